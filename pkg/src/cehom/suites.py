"""Seeded randomized property suites.

Each suite draws ``count`` instances (instance ``i`` uses the generator seeded
with ``(seed, i)``), checks one property, and keeps the first counterexample
as a serialized document so it can be replayed.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import gen
from .ce import CONDITIONS, condition_holds, is_ce_exact, is_strongly_ce_exact, lemma34_check
from .complex import (
    Complex,
    MorphismGroup,
    bounded,
    disk,
    hom_complex,
    homology,
    lemma37_isomorphisms,
    sphere,
    suspension,
)
from .docfmt import complex_document, sequence_document, serialize, Document
from .gp import build_resolution, classify_strongly_ce_gp, corollary56_evaluate, theorem511_evaluate, verify_resolution
from .homotopy import is_xi_triangle
from .module import GpBounds, cyclic_module, free_module
from .module import direct_sum as module_sum
from .ring import CORPUS, F2_X2, F3_X2, Z4, Ring, make_ring

PAIRS = list(itertools.combinations(sorted(CONDITIONS), 2))


@dataclass
class SuiteResult:
    name: str
    seed: int
    total: int = 0
    passed: int = 0
    counterexample: Optional[str] = None
    note: str = ""
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def failed(self) -> int:
        return self.total - self.passed

    @property
    def ok(self) -> bool:
        return self.total > 0 and self.passed == self.total


def _rng(seed: int, i: int):
    return np.random.default_rng([seed, i])


def _run(name: str, seed: int, count: int, rings: list, case: Callable) -> SuiteResult:
    """``case(ring, rng) -> (passed, document or None)``."""
    res = SuiteResult(name, seed)
    t0 = time.perf_counter()
    for i in range(count):
        ring = rings[i % len(rings)]
        ok, doc = case(ring, _rng(seed, i))
        res.total += 1
        if ok:
            res.passed += 1
        elif res.counterexample is None and doc is not None:
            res.counterexample = serialize(doc)
            res.note = f"instance {i}"
    res.seconds = time.perf_counter() - t0
    return res


# --- individual properties -------------------------------------------------------------


def lemma34_case(ring: Ring, rng):
    """Whenever two of the five conditions hold, all six families are exact."""
    if rng.random() < 0.5:
        s = gen.random_short_sequence(ring, rng, periodic_prob=0.2)
    else:
        cfg = gen.GenConfig(length=2)
        s = gen.twisted_sequence(gen.random_complex(ring, rng, 0, cfg), gen.random_complex(ring, rng, 0, cfg), rng)
    rep = is_ce_exact(s)
    for pair in PAIRS:
        if condition_holds(rep, pair[0]) and condition_holds(rep, pair[1]):
            if not lemma34_check(s, pair, rep):
                return False, sequence_document([s.f, s.g])
    return True, None


def lemma37_corpus(ring: Ring):
    """A fixed family of small modules and complexes over ``ring``."""
    R = free_module(ring, 1)
    two = ring.elem(2) if ring.char % 2 == 0 and ring.char > 2 else ring.elem([0, 1])
    k = cyclic_module(ring, two)
    mods = [free_module(ring, 0), R, k, free_module(ring, 2)]
    mods.append(module_sum(R, k))
    mult = ring.matrix([[two]])
    cxs = [
        sphere(0, R),
        sphere(0, k),
        disk(1, R),
        disk(0, k),
        bounded(ring, 0, [R, R], {1: mult}),
        bounded(ring, -1, [R, R, R], {0: mult, 1: mult}),
        bounded(ring, 0, [k, R], {1: ring.eye(1)}),
        bounded(ring, 0, [R, k], {1: mult}),
    ]
    return mods, cxs


def lemma37_check(M, X: Complex, degrees=None) -> bool:
    degs = degrees if degrees is not None else range(X.lo, X.hi + 2)
    return all(b.verify() for n in degs for b in lemma37_isomorphisms(M, X, n))


def lemma37_case(ring: Ring, rng):
    M = gen.random_module(ring, rng, gen.GenConfig(max_gens=1))
    X = gen.random_complex(ring, rng, int(rng.integers(-1, 1)), gen.GenConfig(max_gens=1, length=2))
    if lemma37_check(M, X):
        return True, None
    doc = complex_document(X)
    doc.modules["M"] = M
    return False, doc


def random_mixed_complex(ring: Ring, rng) -> Complex:
    r = rng.random()
    if r < 0.25:
        return gen.random_periodic(ring, rng)
    if r < 0.45 and gen.square_zero_generator(ring) is not None:
        return gen.random_exact_projective(ring, rng, 0, 3, 1)
    return gen.random_complex(ring, rng, int(rng.integers(-1, 1)), gen.GenConfig(length=int(rng.integers(1, 4))))


def prop38_case(ring: Ring, rng, bounds: Optional[GpBounds] = None):
    """Condition sets (2), (3), (4) agree whenever all resolve."""
    G = random_mixed_complex(ring, rng)
    cls = classify_strongly_ce_gp(G, bounds)
    return cls.consistent, (None if cls.consistent else complex_document(G))


def prop55_case(ring: Ring, rng, depth: int = 3):
    G = gen.random_exact_projective(ring, rng, int(rng.integers(-1, 1)), 3, 1)
    rep = verify_resolution(build_resolution(G, depth))
    return rep.ok, (None if rep.ok else complex_document(G))


def cor56_case(ring: Ring, rng, bounds: Optional[GpBounds] = None):
    G = gen.random_bounded_right_exact(ring, rng)
    rep = corollary56_evaluate(G, bounds)
    return rep.agree, (None if rep.agree else complex_document(G))


def thm511_case(ring: Ring, rng, bounds: Optional[GpBounds] = None):
    G = random_mixed_complex(ring, rng)
    rep = theorem511_evaluate(G, bounds)
    return rep.agree, (None if rep.agree else complex_document(G))


def hom_group_check(X: Complex, Y: Complex, degrees=(-1, 0, 1)) -> bool:
    """|H_n Hom(X, Y)| equals the number of homotopy classes X -> S^{-n} Y."""
    H = hom_complex(X, Y)
    for n in degrees:
        lhs = homology(H.complex, n)[0].cardinality if n in H.complex.degrees() else 1
        rhs = MorphismGroup(X, suspension(Y, -n)).homotopy_classes().cardinality
        if lhs != rhs:
            return False
    return True


def hom_group_case(ring: Ring, rng):
    cfg = gen.GenConfig(max_gens=2, length=2)
    X = gen.random_complex(ring, rng, int(rng.integers(-1, 1)), cfg)
    Y = gen.random_complex(ring, rng, int(rng.integers(-1, 1)), cfg)
    if hom_group_check(X, Y):
        return True, None
    return False, Document(ring, complexes={"X": X, "Y": Y})


def xi_case(ring: Ring, rng):
    """Split sequences are members; membership coincides with strong C-E exactness."""
    if rng.random() < 0.3:
        cfg = gen.GenConfig(length=2)
        s = gen.split_sequence(gen.random_complex(ring, rng, 0, cfg), gen.random_complex(ring, rng, 0, cfg))
        ok = is_xi_triangle(s).member
    else:
        s = gen.random_short_sequence(ring, rng)
        ok = is_xi_triangle(s).member == is_strongly_ce_exact(s).strongly_exact
    return ok, (None if ok else sequence_document([s.f, s.g]))


SUITES = {
    "lemma34": (lemma34_case, CORPUS),
    "lemma37": (lemma37_case, (Z4,)),
    "prop38": (prop38_case, CORPUS),
    "prop55": (prop55_case, (Z4, F2_X2, F3_X2)),
    "cor56": (cor56_case, (Z4,)),
    "thm511": (thm511_case, (F2_X2,)),
    "hom-group": (hom_group_case, (Z4, F2_X2)),
    "xi": (xi_case, CORPUS),
}


def run_suite(name: str, seed: int = 1, count: int = 50, rings=None, bounds: Optional[GpBounds] = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    case, specs = SUITES[name]
    ring_list = [r if isinstance(r, Ring) else make_ring(r) for r in (rings or specs)]
    if bounds is not None and name in ("prop38", "cor56", "thm511"):
        fn = lambda ring, rng: case(ring, rng, bounds)  # noqa: E731
    else:
        fn = case
    return _run(name, seed, count, ring_list, fn)
