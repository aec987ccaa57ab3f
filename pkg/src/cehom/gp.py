"""Strongly C-E Gorenstein projective complexes and their complete resolutions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .ce import (
    _Functors,
    exact_at,
    is_ce_projective,
    is_strongly_ce_exact,
    module_sequence_exact,
)
from .complex import (
    ChainMap,
    Complex,
    bounded,
    cokernel_complex,
    disk,
    homology,
    hom_complex,
    is_exact,
    kernel_complex,
    periodic,
    simplify_complex,
    sphere,
)
from .module import (
    GpBounds,
    HomGroup,
    ModuleMap,
    direct_sum as module_sum,
    free_module,
    is_gorenstein_projective,
    is_projective,
    quotient,
)


class GpError(ValueError):
    pass


YES, NO, UNKNOWN = "Yes", "No", "Unknown"

CONDITION_SETS = {
    2: ("G/Z", "H"),
    3: ("Z", "B", "H"),
    4: ("Z", "B", "H", "G/B", "G/Z"),
}


def _combine(statuses) -> str:
    statuses = list(statuses)
    if NO in statuses:
        return NO
    if all(s == YES for s in statuses):
        return YES
    return UNKNOWN


@dataclass
class GpClassification:
    """Per-degree condition table and the verdict of each condition set.

    ``overall`` follows condition set (3): projective terms with Gorenstein
    projective cycles, boundaries and homology.
    """

    table: dict
    sets: dict
    consistent: bool
    reasons: list = field(default_factory=list)

    @property
    def overall(self) -> str:
        return self.sets[3]


def classify_strongly_ce_gp(G: Complex, bounds: Optional[GpBounds] = None) -> GpClassification:
    bounds = bounds or GpBounds()
    table = {}
    reasons = []
    for n in G.degrees():
        f = _Functors(G, n)
        row = {"terms": YES if is_projective(G.module(n)) else NO}
        mods = {"Z": f.Z, "B": f.B, "H": f.H, "G/Z": f.Zq, "G/B": f.Bq}
        for key, M in mods.items():
            row[key] = is_gorenstein_projective(M, bounds).status
        table[n] = row
        if row["terms"] == NO:
            reasons.append(f"term in degree {n} not projective")
    sets = {}
    for k, keys in CONDITION_SETS.items():
        sets[k] = _combine(row[c] for row in table.values() for c in ("terms",) + keys)
    resolved = [v for v in sets.values() if v != UNKNOWN]
    consistent = len(set(resolved)) <= 1
    return GpClassification(table, sets, consistent, reasons)


def is_sharp_projective(G: Complex) -> bool:
    return all(is_projective(G.module(n)) for n in G.degrees())


# --- building complete resolutions ------------------------------------------------------


def cone_embedding(X: Complex) -> tuple[Complex, ChainMap]:
    """X -> P with P_n = X_n + X_{n-1}, d(x, y) = (y, 0), x -> (x, dx)."""
    ring = X.ring
    if X.periodic:
        M = X.module(0)
        g = M.gens
        d = ring.zeros(2 * g, 2 * g)
        d[:g, g:] = ring.eye(g)
        P = periodic(module_sum(M, M), d)
        return P, ChainMap(X, P, {0: ring.vstack(ring.eye(g), X.diff(0))})
    lo, hi = X.lo, X.hi + 1
    mods = [module_sum(X.module(n), X.module(n - 1)) for n in range(lo, hi + 1)]
    diffs = {}
    for n in range(lo + 1, hi + 1):
        a0, b0 = X.module(n).gens, X.module(n - 1).gens
        a1, b1 = X.module(n - 1).gens, X.module(n - 2).gens
        d = ring.zeros(a1 + b1, a0 + b0)
        d[:a1, a0:] = ring.eye(b0)
        diffs[n] = d
    P = bounded(ring, lo, mods, diffs)
    comps = {n: ring.vstack(ring.eye(X.module(n).gens), X.diff(n)) for n in X.degrees()}
    return P, ChainMap(X, P, comps)


def disk_cover(X: Complex) -> tuple[Complex, ChainMap]:
    """P -> X with P_n = X_{n+1} + X_n, d(a, b) = (b, 0), (a, b) -> da + b."""
    ring = X.ring
    if X.periodic:
        M = X.module(0)
        g = M.gens
        d = ring.zeros(2 * g, 2 * g)
        d[:g, g:] = ring.eye(g)
        P = periodic(module_sum(M, M), d)
        return P, ChainMap(P, X, {0: ring.hstack(X.diff(0), ring.eye(g))})
    lo, hi = X.lo - 1, X.hi
    mods = [module_sum(X.module(n + 1), X.module(n)) for n in range(lo, hi + 1)]
    diffs = {}
    for n in range(lo + 1, hi + 1):
        a0, b0 = X.module(n + 1).gens, X.module(n).gens
        a1, b1 = X.module(n).gens, X.module(n - 1).gens
        d = ring.zeros(a1 + b1, a0 + b0)
        d[:a1, a0:] = ring.eye(b0)
        diffs[n] = d
    P = bounded(ring, lo, mods, diffs)
    comps = {n: ring.hstack(X.diff(n + 1), ring.eye(X.module(n).gens)) for n in range(lo, hi + 1)}
    return P, ChainMap(P, X, comps)


@dataclass(eq=False)
class Resolution:
    """A finite window of a strongly complete C-E projective resolution.

    ``right[k]`` is P^k (k >= 0) and ``left[k]`` is P^{-k-1}. ``embed``: G -> P^0
    identifies G with Ker(P^0 -> P^1); ``cover``: P^{-1} -> G is onto.
    ``right_maps[k]``: P^k -> P^{k+1}; ``left_maps[k]``: P^{-k-2} -> P^{-k-1}.
    """

    center: Complex
    right: list
    left: list
    embed: Optional[ChainMap]
    cover: Optional[ChainMap]
    right_maps: list
    left_maps: list

    @property
    def depth(self) -> int:
        return min(len(self.right), len(self.left))

    def term(self, k: int) -> Complex:
        return self.right[k] if k >= 0 else self.left[-k - 1]

    def long_sequence(self) -> list[ChainMap]:
        """Maps P^{-d} -> ... -> P^{d-1} in order."""
        maps = list(reversed(self.left_maps))
        if self.embed is not None and self.cover is not None:
            maps.append(self.embed @ self.cover)
        maps += list(self.right_maps)
        return maps

    def degrees(self) -> list[int]:
        cs = [self.center] + self.right + self.left
        if all(c.periodic for c in cs):
            return [0]
        ws = [c for c in cs if not c.periodic]
        return list(range(min(c.lo for c in ws), max(c.hi for c in ws) + 1))


def build_resolution(G: Complex, depth: int) -> Resolution:
    """Extend G both ways by disk-type C-E projective complexes.

    Right: G embeds into P_n = G_n + G_{n-1}; the cokernel (with simplified
    presentation) is embedded the same way, and so on. Left: the cover
    G_{n+1} + G_n -> G_n with kernel, iterated.
    """
    if depth < 1:
        raise GpError("depth must be at least 1")
    ring = G.ring
    if not is_exact(G):
        raise GpError("complex is not exact")
    if not is_sharp_projective(G):
        raise GpError("terms are not projective")
    if not ring.zero_gorenstein:
        raise GpError("ring is not flagged zero-Gorenstein")
    right, right_maps, embeds = [], [], []
    cur = G
    quots = []
    for _ in range(depth):
        P, alpha = cone_embedding(cur)
        L, proj = cokernel_complex(alpha)
        L2, to, _ = simplify_complex(L)
        right.append(P)
        embeds.append(alpha)
        quots.append(to @ proj)
        cur = L2
    for k in range(depth - 1):
        right_maps.append(embeds[k + 1] @ quots[k])
    left, left_maps, covers, incs = [], [], [], []
    cur = G
    for _ in range(depth):
        P, phi = disk_cover(cur)
        K, inc = kernel_complex(phi)
        K2, _, back = simplify_complex(K)
        left.append(P)
        covers.append(phi)
        incs.append(inc @ back)
        cur = K2
    for k in range(depth - 1):
        left_maps.append(incs[k] @ covers[k + 1])
    return Resolution(G, right, left, embeds[0], covers[0], right_maps, left_maps)


# --- verification ---------------------------------------------------------------------


def _hom_to_disk(X: Complex, i: int):
    R = free_module(X.ring, 1)
    return HomGroup(X.module(i - 1), R)


def _hom_to_sphere(X: Complex, i: int):
    R = free_module(X.ring, 1)
    Q, _ = quotient(X.module(i), X.diff(i + 1))
    return HomGroup(Q, R)


def hom_sequence_exact(maps: list[ChainMap], kind: str, i: int) -> bool:
    """Exactness of Hom(-, D^i R) or Hom(-, S^i R) on a sequence of chain maps.

    Uses Hom(X, D^i M) = Hom_R(X_{i-1}, M) and Hom(X, S^i M) = Hom_R(X_i / B_i X, M).
    """
    cs = [maps[0].source] + [m.target for m in maps]
    k = i - 1 if kind == "disk" else i
    make = _hom_to_disk if kind == "disk" else _hom_to_sphere
    groups = [make(c, i) for c in cs]
    # contravariant: F(X^{j+1}) -> F(X^j) is precomposition with maps[j]
    ind = [groups[j + 1].induced(groups[j], B=maps[j].comp(k)) for j in range(len(maps))]
    ind = list(reversed(ind))
    return module_sequence_exact(ind)


def default_generator_degrees(degrees: list[int]) -> list[int]:
    return list(range(min(degrees) - 1, max(degrees) + 2))


@dataclass
class ResolutionReport:
    ok: bool
    terms_ce_projective: bool
    strongly_exact: bool
    kernel_ok: bool
    hom_exact: bool
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def verify_resolution(res: Resolution, generator_degrees=None) -> ResolutionReport:
    failures = []
    terms = res.left + res.right
    if not terms:
        return ResolutionReport(True, True, True, True, True)
    tproj = True
    for k in range(-len(res.left), len(res.right)):
        rep = is_ce_projective(res.term(k))
        if not rep:
            tproj = False
            failures.append(f"P^{k}: " + ", ".join(rep.reasons()))
    maps = res.long_sequence()
    strong = True
    if len(maps) >= 2:
        srep = is_strongly_ce_exact(maps)
        strong = srep.strongly_exact
        if not strong:
            if srep.split_failure is not None:
                n, j = srep.split_failure
                failures.append(f"junction {j - len(res.left)}: not degreewise split in degree {n}")
            for fam, where in srep.ce.failures.items():
                n, j = where[0]
                failures.append(f"junction {j - len(res.left)}: {fam} not exact in degree {n}")
    kernel_ok = _check_center(res, failures)
    degs = generator_degrees if generator_degrees is not None else default_generator_degrees(res.degrees())
    hom_ok = True
    if len(maps) >= 2:
        for kind in ("disk", "sphere"):
            for i in ([0] if all(t.periodic for t in terms) else degs):
                if not hom_sequence_exact(maps, kind, i):
                    hom_ok = False
                    failures.append(f"Hom(-, {'D' if kind == 'disk' else 'S'}^{i}(R)) not exact")
    ok = tproj and strong and kernel_ok and hom_ok
    return ResolutionReport(ok, tproj, strong, kernel_ok, hom_ok, failures)


def _check_center(res: Resolution, failures: list) -> bool:
    """embed is injective onto Ker(P^0 -> P^1) and cover is onto G."""
    from .module import cokernel, kernel

    ok = True
    if res.embed is None or res.cover is None:
        return True
    nxt = res.right_maps[0] if res.right_maps else None
    for n in res.degrees():
        e = res.embed.cmap(n)
        if not e.is_injective():
            failures.append(f"embedding not injective in degree {n}")
            ok = False
        if nxt is not None and not exact_at(e, nxt.cmap(n)):
            failures.append(f"G is not the kernel of P^0 -> P^1 in degree {n}")
            ok = False
        if not res.cover.cmap(n).is_surjective():
            failures.append(f"cover not onto in degree {n}")
            ok = False
    return ok


# --- the theorem-level evaluations -----------------------------------------------------------


def generators(ring, degrees) -> list[tuple[str, int, Complex]]:
    R = free_module(ring, 1)
    out = []
    for i in degrees:
        out.append(("disk", i, disk(i, R)))
        out.append(("sphere", i, sphere(i, R)))
    return out


def _hom_exact(C: Complex, D: Complex, window=None) -> bool:
    H = hom_complex(C, D, window)
    degs = H.complex.degrees()[1:-1]
    return all(homology(H.complex, n)[0].is_zero() for n in degs)


@dataclass
class Thm511Report:
    conditions: dict
    hom_from_generators: bool
    hom_to_generators: bool
    detecting: list
    classification: GpClassification

    @property
    def agree(self) -> bool:
        resolved = {v for v in self.conditions.values() if v != UNKNOWN}
        return len(resolved) <= 1


def theorem511_evaluate(G: Complex, bounds: Optional[GpBounds] = None, generator_degrees=None, window=(-2, 2)) -> Thm511Report:
    ring = G.ring
    degs = G.degrees()
    gdeg = generator_degrees if generator_degrees is not None else default_generator_degrees(degs)
    if G.periodic and generator_degrees is None:
        gdeg = [0]
    proj = is_sharp_projective(G)
    exact = is_exact(G)
    z_status = _combine(is_gorenstein_projective(homology_cycles(G, n), bounds).status for n in degs)
    c1 = _combine([YES if exact else NO, YES if proj else NO, z_status])
    detecting = []
    from_ok = True
    to_ok = True
    w = window if G.periodic else None
    for kind, i, Q in generators(ring, gdeg):
        if not _hom_exact(Q, G, w):
            from_ok = False
            detecting.append((kind, i))
        if not _hom_exact(G, Q, w):
            to_ok = False
    cls = classify_strongly_ce_gp(G, bounds)
    c2 = _combine([cls.overall, YES if from_ok else NO])
    c3 = YES if (proj and from_ok and to_ok) else NO
    c4 = YES if (is_sharp_projective(G) and from_ok and to_ok) else NO
    return Thm511Report({1: c1, 2: c2, 3: c3, 4: c4}, from_ok, to_ok, detecting, cls)


def homology_cycles(G: Complex, n: int):
    from .complex import cycles

    return cycles(G, n)[0]


@dataclass
class Cor56Report:
    classification: str
    terms_projective: bool

    @property
    def agree(self) -> bool:
        if self.classification == UNKNOWN:
            return True
        return (self.classification == YES) == self.terms_projective


def corollary56_evaluate(G: Complex, bounds: Optional[GpBounds] = None) -> Cor56Report:
    if G.periodic:
        raise GpError("complex is not bounded on the right")
    if not is_exact(G):
        raise GpError("complex is not exact")
    cls = classify_strongly_ce_gp(G, bounds)
    return Cor56Report(cls.overall, is_sharp_projective(G))
