"""Seeded random modules, complexes and sequences for property suites.

Every generator takes a ``numpy.random.Generator`` and is deterministic in it.
Random maps and differentials are drawn from the solution space of the
linear conditions they must satisfy, so well-definedness and ``d o d = 0``
hold by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complex import (
    ChainMap,
    Complex,
    ShortSequence,
    bounded,
    change_basis,
    cokernel_complex,
    direct_sum,
    disk,
    periodic,
)
from .linsys import MatrixSystem
from .module import FpModule, ModuleMap, cokernel, free_module, kernel, simplify, submodule
from .ring import Ring


@dataclass
class GenConfig:
    max_gens: int = 2
    max_rels: int = 1
    length: int = 3
    free_prob: float = 0.4
    density: float = 0.6


def random_element(ring: Ring, rng) -> np.ndarray:
    return rng.integers(0, ring.char, ring.dim).astype(np.int64)


def random_matrix(ring: Ring, rows: int, cols: int, rng, density: float = 0.6) -> np.ndarray:
    A = rng.integers(0, ring.char, (rows, cols, ring.dim)).astype(np.int64)
    mask = rng.random((rows, cols)) < density
    return A * mask[:, :, None]


def random_module(ring: Ring, rng, cfg: GenConfig = GenConfig()) -> FpModule:
    g = int(rng.integers(0, cfg.max_gens + 1))
    if g == 0 or rng.random() < cfg.free_prob:
        return free_module(ring, g)
    r = int(rng.integers(1, cfg.max_rels + 1))
    M = FpModule(ring, g, random_matrix(ring, g, r, rng, cfg.density))
    return simplify(M)[0]


def random_unit_matrix(ring: Ring, k: int, rng) -> np.ndarray:
    """A random invertible k x k matrix (product of elementary moves)."""
    units = [a for a in ring.elements() if ring.is_unit(a)]
    P = ring.eye(k)
    for _ in range(3 * k):
        i, j = rng.integers(0, k, 2)
        if i == j:
            u = units[int(rng.integers(0, len(units)))]
            P[i] = np.stack([ring.mul(u, P[i, c]) for c in range(k)])
        else:
            a = random_element(ring, rng)
            P[i] = (P[i] + np.stack([ring.mul(a, P[j, c]) for c in range(k)])) % ring.char
    return P


def random_solution(sys: MatrixSystem, rng) -> dict:
    """Uniform-ish random point of the homogeneous solution space."""
    K = sys.solution_space()
    n = sys.ring.char
    if K.shape[1] == 0:
        x = np.zeros(sys.flat_size(), dtype=np.int64)
    else:
        c = rng.integers(0, n, K.shape[1])
        x = (K @ c) % n
    return sys.split(x)


def random_hom(M: FpModule, N: FpModule, rng) -> ModuleMap:
    ring = M.ring
    sys = MatrixSystem(ring)
    sys.unknown("F", N.gens, M.gens)
    if M.nrels and N.nrels:
        sys.unknown("W", N.nrels, M.nrels)
        sys.equation([(None, "F", M.relations), ((-N.relations) % ring.char, "W", None)], shape=(N.gens, M.nrels))
    elif M.nrels:
        sys.equation([(None, "F", M.relations)], shape=(N.gens, M.nrels))
    return ModuleMap(M, N, random_solution(sys, rng)["F"])


def _random_diff(ring, src: FpModule, tgt: FpModule, prev, prev_tgt: FpModule, rng):
    """Random well-defined d: src -> tgt with prev o d = 0 in prev_tgt."""
    sys = MatrixSystem(ring)
    sys.unknown("D", tgt.gens, src.gens)
    if src.nrels:
        if tgt.nrels:
            sys.unknown("W", tgt.nrels, src.nrels)
            sys.equation([(None, "D", src.relations), ((-tgt.relations) % ring.char, "W", None)], shape=(tgt.gens, src.nrels))
        else:
            sys.equation([(None, "D", src.relations)], shape=(tgt.gens, src.nrels))
    if prev is not None and prev_tgt.gens:
        terms = [(prev, "D", None)]
        if prev_tgt.nrels:
            sys.unknown("V", prev_tgt.nrels, src.gens)
            terms.append(((-prev_tgt.relations) % ring.char, "V", None))
        sys.equation(terms, shape=(prev_tgt.gens, src.gens))
    return random_solution(sys, rng)["D"]


def random_complex(ring: Ring, rng, lo: int = 0, cfg: GenConfig = GenConfig(), free: bool = False) -> Complex:
    """Bounded complex on ``cfg.length`` consecutive degrees starting at lo."""
    fc = GenConfig(cfg.max_gens, cfg.max_rels, cfg.length, 1.0 if free else cfg.free_prob, cfg.density)
    mods = [random_module(ring, rng, fc) for _ in range(cfg.length)]
    diffs = {}
    for i in range(1, cfg.length):
        prev = diffs.get(lo + i - 1)
        prev_tgt = mods[i - 2] if i >= 2 else None
        diffs[lo + i] = _random_diff(ring, mods[i], mods[i - 1], prev, prev_tgt, rng)
    return bounded(ring, lo, mods, diffs)


def random_periodic(ring: Ring, rng, cfg: GenConfig = GenConfig(), free: bool = False) -> Complex:
    fc = GenConfig(cfg.max_gens, cfg.max_rels, cfg.length, 1.0 if free else cfg.free_prob, cfg.density)
    M = random_module(ring, rng, fc)
    # d o d = 0 is quadratic; sample candidates until one works
    for _ in range(20):
        D = random_hom(M, M, rng).matrix
        DD = ring.matmul(D, D)
        if all(M.is_zero_elem(DD[:, j]) for j in range(M.gens)):
            return periodic(M, D)
    return periodic(M, ring.zeros(M.gens, M.gens))


def random_subcomplex(B: Complex, rng, k: int = 1) -> tuple[Complex, ChainMap]:
    """Subcomplex generated by k random elements per degree, with its inclusion."""
    ring = B.ring
    degs = B.degrees()
    gens = {}
    for n in sorted(degs, reverse=True):
        M = B.module(n)
        cols = [random_element_of(M, rng) for _ in range(k)] if M.gens else []
        S = np.stack(cols, axis=1) if cols else ring.zeros(M.gens, 0)
        if B.periodic:
            S = ring.hstack(S, ring.matmul(B.diff(0), S))
        elif n + 1 in gens:
            S = ring.hstack(S, ring.matmul(B.diff(n + 1), gens[n + 1]))
        gens[n] = S % ring.char
    mods, incs = {}, {}
    for n in degs:
        mods[n], incs[n] = submodule(B.module(n), gens[n])
    from .module import lift_through_mono

    diffs = {}
    for n in degs:
        if B.periodic or n > B.lo:
            m = 0 if B.periodic else n - 1
            diffs[n] = lift_through_mono(incs[m], B.dmap(n) @ incs[n]).matrix
    if B.periodic:
        A = periodic(mods[0], diffs[0])
    else:
        A = bounded(ring, B.lo, [mods[n] for n in degs], {n: diffs[n] for n in degs if n > B.lo})
    return A, ChainMap(A, B, {n: incs[n].matrix for n in degs})


def random_element_of(M: FpModule, rng) -> np.ndarray:
    return random_matrix(M.ring, M.gens, 1, rng, 0.8)[:, 0]


def random_short_sequence(ring: Ring, rng, cfg: GenConfig = GenConfig(), periodic_prob: float = 0.0) -> ShortSequence:
    """Degreewise exact 0 -> A -> B -> B/A -> 0 from a random subcomplex."""
    if rng.random() < periodic_prob:
        B = random_periodic(ring, rng, cfg)
    else:
        B = random_complex(ring, rng, int(rng.integers(-1, 1)), cfg)
    A, inc = random_subcomplex(B, rng, int(rng.integers(0, 2)) + 1)
    _, proj = cokernel_complex(inc)
    return ShortSequence(inc, proj)


def split_sequence(A: Complex, C: Complex) -> ShortSequence:
    """The canonical A -> A + C -> C."""
    ring = A.ring
    S = direct_sum(A, C)
    inc, pr = {}, {}
    for n in S.degrees():
        a, c = A.module(n).gens, C.module(n).gens
        inc[n] = ring.vstack(ring.eye(a), ring.zeros(c, a))
        pr[n] = ring.hstack(ring.zeros(c, a), ring.eye(c))
    return ShortSequence(ChainMap(A, S, inc), ChainMap(S, C, pr))


def random_chain_map(X: Complex, Y: Complex, rng) -> ChainMap:
    from .complex import MorphismGroup

    H = MorphismGroup(X, Y)
    if H.G.shape[1] == 0:
        return ChainMap(X, Y, {})
    c = rng.integers(0, H.n, H.G.shape[1])
    return H.chain_map((H.G @ c) % H.n)


# --- exact complexes of projectives ----------------------------------------------


def square_zero_generator(ring: Ring):
    """A nonzero t with t^2 = 0 generating the maximal ideal, if the ring has one."""
    for a in ring.elements():
        if ring.is_unit(a) or not a.any():
            continue
        if ring.mul(a, a).any():
            continue
        ideal = ring.span_size(ring.matrix([[a]]))
        if ideal * ideal == ring.cardinality:
            return a
    return None


def random_exact_projective(ring: Ring, rng, lo: int = 0, length: int = 3, max_rank: int = 1, periodic_prob: float = 0.4) -> Complex:
    """Exact complex with free terms.

    Bounded: a scrambled sum of disks. Periodic: a scrambled sum of copies of
    (R, t) with t^2 = 0 generating the maximal ideal, plus contractible blocks.
    """
    t = square_zero_generator(ring)
    if t is not None and rng.random() < periodic_prob:
        a = int(rng.integers(1, max_rank + 1))
        b = int(rng.integers(0, 2))
        blocks = []
        R = free_module(ring, 1)
        for _ in range(a):
            blocks.append(periodic(R, ring.matrix([[t]])))
        for _ in range(b):
            blocks.append(periodic(free_module(ring, 2), ring.matrix([[0, 1], [0, 0]])))
        P = direct_sum(*blocks)
        return change_basis(P, {0: random_unit_matrix(ring, P.module(0).gens, rng)})
    pieces = []
    for n in range(lo + 1, lo + length):
        r = int(rng.integers(0, max_rank + 1))
        if r:
            pieces.append(disk(n, free_module(ring, r)))
    if not pieces:
        pieces.append(disk(lo + 1, free_module(ring, 1)))
    X = direct_sum(*pieces)
    return change_basis(X, {n: random_unit_matrix(ring, X.module(n).gens, rng) for n in X.degrees()})


def random_bounded_right_exact(ring: Ring, rng, cfg: GenConfig = GenConfig(free_prob=0.2), projective_prob: float = 0.3) -> Complex:
    """Exact complex vanishing below its window.

    Either a scrambled disk sum (free terms) or ``0 -> ker f -> M -> N -> coker f -> 0``
    for a random map f, plus a disk.
    """
    if rng.random() < projective_prob:
        return random_exact_projective(ring, rng, 0, 3, 1, periodic_prob=0.0)
    M = random_module(ring, rng, cfg)
    N = random_module(ring, rng, cfg)
    f = random_hom(M, N, rng)
    K, inc = kernel(f)
    C, proj = cokernel(f)
    K2, phiK, psiK = simplify(K)
    C2, phiC, psiC = simplify(C)
    mods = [C2, N, M, K2]
    diffs = {1: (phiC @ proj).matrix, 2: f.matrix, 3: (inc @ psiK).matrix}
    G = bounded(ring, 0, mods, diffs)
    return direct_sum(G, disk(int(rng.integers(1, 4)), free_module(ring, 1)))


def radical_free_complex(ring: Ring, rng, lo: int = 0, length: int = 3, max_rank: int = 2) -> Complex:
    """Free complex whose differentials have entries in a square-zero maximal ideal."""
    t = square_zero_generator(ring)
    if t is None:
        raise ValueError("ring has no square-zero maximal ideal")
    ranks = [int(rng.integers(0, max_rank + 1)) for _ in range(length)]
    diffs = {}
    for i in range(1, length):
        mask = rng.integers(0, ring.char, (ranks[i - 1], ranks[i]))
        D = ring.zeros(ranks[i - 1], ranks[i])
        for a in range(ranks[i - 1]):
            for b in range(ranks[i]):
                D[a, b] = (mask[a, b] * t) % ring.char
        diffs[lo + i] = D
    return bounded(ring, lo, [free_module(ring, r) for r in ranks], diffs)


def glued_disks(ring: Ring, rng, ndisks: int = 1, lo: int = 0, length: int = 3) -> Complex:
    """A radical free complex plus ``ndisks`` disks, scrambled by a change of basis."""
    base = radical_free_complex(ring, rng, lo, length)
    pieces = [base]
    for _ in range(ndisks):
        pieces.append(disk(int(rng.integers(lo + 1, lo + length)), free_module(ring, 1)))
    X = direct_sum(*pieces)
    return change_basis(X, {n: random_unit_matrix(ring, X.module(n).gens, rng) for n in X.degrees()})


def twisted_sequence(A: Complex, C: Complex, rng) -> ShortSequence:
    """A -> B -> C with B_n = A_n + C_n and d_B = [[d_A, t], [0, d_C]].

    The twist t is a random chain map C -> (shift of A), so the sequence is
    degreewise split but in general not split as complexes.
    """
    from .complex import Complex as _C
    from .complex import suspension
    from .module import direct_sum as module_sum

    ring = A.ring
    t = random_chain_map(C, suspension(A, 1), rng)
    degs = sorted(set(A.degrees()) | set(C.degrees()) | {n + 1 for n in C.degrees()})
    if A.periodic:
        degs = [0]
    mods = {n: module_sum(A.module(n), C.module(n)) for n in degs}
    diffs = {}
    for n in degs:
        if not A.periodic and n == degs[0]:
            continue
        m = 0 if A.periodic else n - 1
        tn = t.comp(n) if (A.periodic or n in t.degrees()) else ring.zeros(A.module(m).gens, C.module(n).gens)
        top = ring.hstack(A.diff(n), tn)
        bot = ring.hstack(ring.zeros(C.module(m).gens, A.module(n).gens), C.diff(n))
        diffs[n] = ring.vstack(top, bot)
    if A.periodic:
        B = periodic(mods[0], diffs[0])
    else:
        B = _C(ring, mods, diffs, False, degs[0], degs[-1])
    inc, pr = {}, {}
    for n in B.degrees():
        a, c = A.module(n).gens, C.module(n).gens
        inc[n] = ring.vstack(ring.eye(a), ring.zeros(c, a))
        pr[n] = ring.hstack(ring.zeros(c, a), ring.eye(c))
    return ShortSequence(ChainMap(A, B, inc), ChainMap(B, C, pr))
