"""Homotopy-category tools: null-homotopies, cones, equivalences, minimization."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .ce import (
    CeError,
    ShortSequence,
    as_long,
    exact_at,
    is_degreewise_split,
    _Functors,
    _induced,
    _seq_degrees,
)
from .complex import (
    ChainMap,
    Complex,
    ComplexError,
    _map_degrees,
    bounded,
    cycles,
    direct_sum,
    disk,
    has_free_terms,
    identity_map,
    is_radical,
    periodic,
    sphere,
)
from .linsys import MatrixSystem
from .module import FpModule, free_module, direct_sum as module_sum


class HomotopyError(ValueError):
    pass


@dataclass(eq=False)
class Homotopy:
    """s_n : X_n -> Y_{n+1} with f_n = d s_n + s_{n-1} d."""

    f: ChainMap
    comps: dict
    window_verified: bool = False

    def comp(self, n: int) -> np.ndarray:
        X, Y = self.f.source, self.f.target
        if X.periodic and Y.periodic:
            return self.comps[0]
        if n in self.comps:
            return self.comps[n]
        return X.ring.zeros(Y.module(n + 1).gens, X.module(n).gens)

    def verify(self) -> bool:
        f = self.f
        X, Y, ring = f.source, f.target, f.ring
        degs = f.degrees()
        for n in degs:
            s = self.comp(n)
            if s.shape[:2] != (Y.module(n + 1).gens, X.module(n).gens):
                return False
            img = ring.matmul(s, X.module(n).relations)
            if not all(Y.module(n + 1).is_zero_elem(img[:, j]) for j in range(img.shape[1])):
                return False
        for n in degs:
            prev = self.comp(0 if (X.periodic and Y.periodic) else n - 1)
            rhs = ring.matmul(Y.diff(n + 1), self.comp(n)) + ring.matmul(prev, X.diff(n))
            diff = f.comp(n) - rhs
            if not all(Y.module(n).is_zero_elem(diff[:, j]) for j in range(diff.shape[1])):
                return False
        return True


def is_null_homotopic(f: ChainMap) -> Optional[Homotopy]:
    """Solve f = d s + s d for s, or return None."""
    X, Y, ring = f.source, f.target, f.ring
    both = X.periodic and Y.periodic
    degs = f.degrees()
    sys = MatrixSystem(ring)
    sdeg = [0] if both else list(range(degs[0] - 1, degs[-1] + 1))
    for n in sdeg:
        S, T = X.module(n), Y.module(n + 1)
        sys.unknown(f"S{n}", T.gens, S.gens)
        if S.nrels and T.gens:
            sys.unknown(f"W{n}", T.nrels, S.nrels)
            sys.equation([(None, f"S{n}", S.relations), ((-T.relations) % ring.char, f"W{n}", None)], shape=(T.gens, S.nrels))
    for n in degs:
        S, T = X.module(n), Y.module(n)
        if not S.gens or not T.gens:
            continue
        terms = []
        if both:
            terms = [(Y.diff(0), "S0", None), (None, "S0", X.diff(0))]
        else:
            if n in sdeg:
                terms.append((Y.diff(n + 1), f"S{n}", None))
            if n - 1 in sdeg:
                terms.append((None, f"S{n - 1}", X.diff(n)))
        if T.nrels:
            sys.unknown(f"V{n}", T.nrels, S.gens)
            terms.append(((-T.relations) % ring.char, f"V{n}", None))
        if not any(name.startswith("S") for _, name, _ in terms):
            # no homotopy term reaches this degree: need f_n = 0
            if not f.cmap(n).is_zero():
                return None
            continue
        sys.equation(terms, rhs=f.comp(n))
    sol = sys.solve()
    if sol is None:
        return None
    comps = {n: sol[f"S{n}"] for n in sdeg}
    h = Homotopy(f, comps, window_verified=(X.periodic != Y.periodic))
    if not h.verify():
        raise HomotopyError("solver returned an invalid homotopy")
    return h


def homotopy_between(f: ChainMap, g: ChainMap) -> Optional[Homotopy]:
    return is_null_homotopic(f - g)


def is_contractible(C: Complex) -> Optional[Homotopy]:
    return is_null_homotopic(identity_map(C))


# --- mapping cone --------------------------------------------------------------------


def mapping_cone(f: ChainMap) -> Complex:
    """Terms N_n + M_{n-1}, differential [[d^N, f], [0, -d^M]]."""
    M, N, ring = f.source, f.target, f.ring
    if M.periodic != N.periodic:
        raise ComplexError("mapping cone needs both sides of the same variant")
    c = ring.char
    if M.periodic:
        a, b = N.module(0).gens, M.module(0).gens
        d = ring.zeros(a + b, a + b)
        d[:a, :a] = N.diff(0)
        d[:a, a:] = f.comp(0)
        d[a:, a:] = (-M.diff(0)) % c
        return periodic(module_sum(N.module(0), M.module(0)), d)
    lo = min(N.lo, M.lo + 1)
    hi = max(N.hi, M.hi + 1)
    mods = [module_sum(N.module(n), M.module(n - 1)) for n in range(lo, hi + 1)]
    diffs = {}
    for n in range(lo + 1, hi + 1):
        a1, b1 = N.module(n - 1).gens, M.module(n - 2).gens
        a0, b0 = N.module(n).gens, M.module(n - 1).gens
        d = ring.zeros(a1 + b1, a0 + b0)
        d[:a1, :a0] = N.diff(n)
        d[:a1, a0:] = f.comp(n - 1)
        d[a1:, a0:] = (-M.diff(n - 1)) % c
        diffs[n] = d
    return bounded(ring, lo, mods, diffs)


@dataclass(eq=False)
class HomotopyEquivalence:
    forward: ChainMap
    backward: ChainMap
    source_homotopy: Homotopy  # backward o forward ~ id on the source
    target_homotopy: Homotopy  # forward o backward ~ id on the target

    def verify(self) -> bool:
        f, g = self.forward, self.backward
        ok1 = self.source_homotopy.verify() and _same_map(self.source_homotopy.f, (g @ f) - identity_map(f.source))
        ok2 = self.target_homotopy.verify() and _same_map(self.target_homotopy.f, (f @ g) - identity_map(f.target))
        return ok1 and ok2


def _same_map(a: ChainMap, b: ChainMap) -> bool:
    return (a - b).is_zero()


def is_homotopy_equivalence(f: ChainMap) -> Optional[HomotopyEquivalence]:
    """Decide via contractibility of the cone and read off an inverse and homotopies."""
    M, N, ring = f.source, f.target, f.ring
    C = mapping_cone(f)
    s = is_contractible(C)
    if s is None:
        return None
    both = M.periodic
    degs = _map_degrees(M, N)
    g, hN, hM = {}, {}, {}
    c = ring.char
    for n in (degs if not both else [0]):
        S = s.comp(n)  # C_n -> C_{n+1}; C_n = N_n + M_{n-1}, C_{n+1} = N_{n+1} + M_n
        a0 = N.module(n).gens
        a1 = N.module(n + 1).gens
        g[n] = S[a1:, :a0]
        hN[n] = (-S[:a1, :a0]) % c
    for n in (degs if not both else [0]):
        # c-block of s_{n+1}: M_n -> M_{n+1}
        k = 0 if both else n + 1
        S = s.comp(k)
        a0 = N.module(k).gens
        a1 = N.module(k + 1).gens
        hM[n] = S[a1:, a0:]
    if not both:
        lo = degs[0]
        hM[lo - 1] = ring.zeros(M.module(lo).gens, M.module(lo - 1).gens)
        hN[lo - 1] = ring.zeros(N.module(lo).gens, N.module(lo - 1).gens)
    back = ChainMap(N, M, g)
    src = Homotopy((back @ f) - identity_map(M), hM)
    tgt = Homotopy((f @ back) - identity_map(N), hN)
    eq = HomotopyEquivalence(f, back, src, tgt)
    if not eq.verify():
        raise HomotopyError("equivalence extracted from the cone failed verification")
    return eq


def identity_equivalence(X: Complex) -> HomotopyEquivalence:
    I = identity_map(X)
    z = is_null_homotopic(I - I)
    return HomotopyEquivalence(I, I, z, z)


# --- minimization ----------------------------------------------------------------------


def _find_unit(X: Complex):
    ring = X.ring
    for n in X.degrees():
        if not X.periodic and n == X.lo:
            continue
        D = X.diff(n)
        for i in range(D.shape[0]):
            for j in range(D.shape[1]):
                if X.periodic and i == j:
                    continue
                if ring.is_unit(D[i, j]):
                    return n, i, j
    return None


def _inverse(ring, A):
    k = A.shape[0]
    cols = [ring.solve(A, ring.eye(k)[:, j]) for j in range(k)]
    return np.stack(cols, axis=1) if k else ring.zeros(0, 0)


def _eliminate(X: Complex, n: int, i: int, j: int):
    """Split off the disk through d_n[i, j]; returns (W, f: X -> W, g: W -> X, h) with gf - 1 = dh + hd."""
    ring = X.ring
    c = ring.char
    D = X.diff(n)
    top = X.module(n).gens
    bot = X.module(n - 1).gens
    a = D[:, j]  # d(e_j)
    # coordinates in X_{n-1} w.r.t. the basis {a in slot i} + {e_k : k != i}
    Bm = ring.eye(bot)
    Bm[:, i] = a
    Binv = _inverse(ring, Bm)
    coef_a = Binv[i : i + 1]  # 1 x bot
    sigma = ring.zeros(top, 1)
    sigma[j, 0] = ring.one
    hmat = ring.matmul(sigma, coef_a)  # X_{n-1} -> X_n
    if X.periodic:
        rho = (ring.matmul(D, hmat) + ring.matmul(hmat, D)) % c
        keep = [k for k in range(top) if k not in (i, j)]
        Bfull = ring.eye(top)
        Bfull[:, i] = a
        Binv_full = _inverse(ring, Bfull)
        proj = (ring.eye(top) - rho) % c
        G = proj[:, keep]
        F = Binv_full[keep]
        dW = ring.mm(F, D, G)
        W = periodic(free_module(ring, len(keep)), dW)
        f = ChainMap(X, W, {0: F}, check=False)
        g = ChainMap(W, X, {0: G}, check=False)
        h = {0: (-hmat) % c}
        return W, f, g, h
    rho_n = ring.matmul(hmat, D)  # on X_n
    rho_m = ring.matmul(D, hmat)  # on X_{n-1}
    keep_n = [k for k in range(top) if k != j]
    keep_m = [k for k in range(bot) if k != i]
    Gs, Fs = {}, {}
    for m in X.degrees():
        r = X.module(m).gens
        if m == n:
            Gs[m] = ((ring.eye(r) - rho_n) % c)[:, keep_n]
            Fs[m] = ring.eye(r)[keep_n]
        elif m == n - 1:
            Gs[m] = ((ring.eye(r) - rho_m) % c)[:, keep_m]
            Fs[m] = Binv[keep_m]
        else:
            Gs[m] = ring.eye(r)
            Fs[m] = ring.eye(r)
    mods = [free_module(ring, Gs[m].shape[1]) for m in X.degrees()]
    diffs = {m: ring.mm(Fs[m - 1], X.diff(m), Gs[m]) for m in X.degrees() if m > X.lo}
    W = bounded(ring, X.lo, mods, diffs)
    f = ChainMap(X, W, Fs, check=False)
    g = ChainMap(W, X, Gs, check=False)
    h = {n - 1: (-hmat) % c}
    return W, f, g, h


@dataclass(eq=False)
class Minimization:
    complex: Complex
    equivalence: HomotopyEquivalence
    steps: int


def minimize(X: Complex) -> Minimization:
    """Strip disk summands through unit entries until none remain.

    Terms must be free over a local ring. The equivalence maps X to the
    reduced complex; both homotopy certificates are verified.
    """
    ring = X.ring
    if not ring.is_local:
        raise HomotopyError("minimize needs a local ring")
    if not has_free_terms(X):
        raise HomotopyError("minimize needs free terms")
    cur = X
    F = identity_map(X)  # X -> cur
    G = identity_map(X)  # cur -> X
    hdegs = [0] if X.periodic else list(range(X.lo - 1, X.hi + 1))
    # homotopy on X: G F - 1 = dH + Hd
    H = {m: ring.zeros(X.module(m + 1).gens, X.module(m).gens) for m in hdegs}
    steps = 0
    while True:
        hit = _find_unit(cur)
        if hit is None:
            break
        W, f1, g1, h1 = _eliminate(cur, *hit)
        # new G = G g1, new F = f1 F, new H = G h1 F + H
        degs = X.degrees()
        newH = {}
        for m in hdegs:
            k1 = 0 if X.periodic else m
            part = ring.zeros(X.module(m + 1).gens, X.module(m).gens)
            if k1 in h1:
                part = ring.mm(G.comp(m + 1), h1[k1], F.comp(m))
            newH[m] = (part + H[m]) % ring.char
        H = newH
        G = ChainMap(W, X, {m: ring.matmul(G.comp(m), g1.comp(m)) for m in degs}, check=False)
        F = ChainMap(X, W, {m: ring.matmul(f1.comp(m), F.comp(m)) for m in degs}, check=False)
        cur = W
        steps += 1
    src = Homotopy((G @ F) - identity_map(X), H)
    tgt = is_null_homotopic((F @ G) - identity_map(cur))
    if tgt is None:
        raise HomotopyError("reduced complex does not retract")
    eq = HomotopyEquivalence(F, G, src, tgt)
    if not eq.verify():
        raise HomotopyError("minimization certificates failed verification")
    return Minimization(cur, eq, steps)


def is_unit_free(X: Complex) -> bool:
    return _find_unit(X) is None


# --- triangles ----------------------------------------------------------------------------


@dataclass
class XiTriangleReport:
    degreewise_split: bool
    homology_exact: dict
    sections: dict = field(default_factory=dict)

    @property
    def member(self) -> bool:
        return self.degreewise_split and all(self.homology_exact.values())

    def __bool__(self):
        return self.member


def is_xi_triangle(s: ShortSequence) -> XiTriangleReport:
    """Degreewise split and short exact on homology in every degree."""
    try:
        sp = is_degreewise_split(s)
        split, sections = sp.split, sp.sections
    except CeError:
        split, sections = False, {}
    maps = as_long(s)
    cs = [maps[0].source] + [m.target for m in maps]
    hx = {}
    for n in _seq_degrees(cs):
        fs = [_Functors(c, n) for c in cs]
        ind = [_induced(m, n, fs[k], fs[k + 1], "H") for k, m in enumerate(maps)]
        hx[n] = all(exact_at(a, b) for a, b in zip(ind, ind[1:]))
    return XiTriangleReport(split, hx, sections)


# --- homotopy C-E projectivity ------------------------------------------------------------


def ce_precover(P: Complex) -> tuple[Complex, ChainMap]:
    """Q = (disks on every term) + (spheres on free covers of the cycles), and Q -> P.

    Both Hom(D^n R, -) and Hom(S^n R, -) are onto along Q -> P.
    """
    ring = P.ring
    if P.periodic:
        M = P.module(0)
        Z, zinc = cycles(P, 0)
        F = free_module(ring, Z.gens)
        g = M.gens
        Qm = module_sum(M, M, F)
        d = ring.zeros(Qm.gens, Qm.gens)
        d[g : 2 * g, :g] = ring.eye(g)
        Q = periodic(Qm, d)
        pi = ChainMap(Q, P, {0: ring.hstack(ring.eye(g), P.diff(0), zinc.matrix)})
        return Q, pi
    degs = P.degrees()
    disks = [disk(n, P.module(n)) for n in degs] + [disk(P.hi + 1, P.module(P.hi + 1))]
    zs = {n: cycles(P, n) for n in degs}
    spheres = [sphere(n, free_module(ring, zs[n][0].gens)) for n in degs]
    Q = direct_sum(*disks, *spheres)
    comps = {}
    for n in degs:
        comps[n] = ring.hstack(ring.eye(P.module(n).gens), P.diff(n + 1), zs[n][1].matrix)
    comps[P.lo - 1] = ring.zeros(0, Q.module(P.lo - 1).gens)
    return Q, ChainMap(Q, P, comps)


@dataclass
class HomotopyCeProjectiveReport:
    minimize_route: Optional[bool]
    precover_route: Optional[bool]
    minimized: Optional[Complex] = None
    section: Optional[ChainMap] = None
    note: str = ""

    @property
    def verdict(self) -> Optional[bool]:
        if self.minimize_route is not None:
            return self.minimize_route
        return self.precover_route

    @property
    def coherent(self) -> bool:
        if self.minimize_route is None or self.precover_route is None:
            return True
        return self.minimize_route == self.precover_route

    def __bool__(self):
        return bool(self.verdict)


def precover_section(P: Complex) -> Optional[ChainMap]:
    """Some phi: P -> Q with pi phi homotopic to the identity, or None."""
    Q, pi = ce_precover(P)
    ring = P.ring
    c = ring.char
    both = P.periodic
    degs = P.degrees()
    sys = MatrixSystem(ring)
    for n in degs:
        S, T = P.module(n), Q.module(n)
        sys.unknown(f"F{n}", T.gens, S.gens)
        if S.nrels and T.gens:
            sys.unknown(f"WF{n}", T.nrels, S.nrels)
            sys.equation([(None, f"F{n}", S.relations), ((-T.relations) % c, f"WF{n}", None)], shape=(T.gens, S.nrels))
    hdeg = [0] if both else list(range(P.lo - 1, P.hi + 1))
    for n in hdeg:
        S, T = P.module(n), P.module(n + 1)
        sys.unknown(f"H{n}", T.gens, S.gens)
        if S.nrels and T.gens:
            sys.unknown(f"WH{n}", T.nrels, S.nrels)
            sys.equation([(None, f"H{n}", S.relations), ((-T.relations) % c, f"WH{n}", None)], shape=(T.gens, S.nrels))
    # chain condition d^Q F_n = F_{n-1} d^P
    cdeg = [0] if both else list(range(P.lo, P.hi + 2))
    for n in cdeg:
        T, S = Q.module(n - 1), P.module(n)
        if not T.gens or not S.gens:
            continue
        terms = []
        if both or n in degs:
            terms.append((Q.diff(n), f"F{0 if both else n}", None))
        if both or (n - 1) in degs:
            terms.append(((-ring.eye(T.gens)) % c, f"F{0 if both else n - 1}", P.diff(n)))
        if T.nrels:
            sys.unknown(f"VC{n}", T.nrels, S.gens)
            terms.append(((-T.relations) % c, f"VC{n}", None))
        sys.equation(terms, shape=(T.gens, S.gens))
    # pi F_n - 1 = d H_n + H_{n-1} d
    for n in degs:
        S = P.module(n)
        if not S.gens:
            continue
        terms = [(pi.comp(n), f"F{n}", None)]
        k = 0 if both else n
        terms.append(((-P.diff(n + 1)) % c, f"H{k}", None))
        km = 0 if both else n - 1
        terms.append(((-ring.eye(S.gens)) % c, f"H{km}", P.diff(n)))
        if S.nrels:
            sys.unknown(f"VP{n}", S.nrels, S.gens)
            terms.append(((-S.relations) % c, f"VP{n}", None))
        sys.equation(terms, rhs=ring.eye(S.gens))
    sol = sys.solve()
    if sol is None:
        return None
    phi = ChainMap(P, Q, {n: sol[f"F{n}"] for n in degs})
    h = Homotopy((pi @ phi) - identity_map(P), {n: sol[f"H{n}"] for n in hdeg})
    if not h.verify():
        raise HomotopyError("precover section failed verification")
    return phi


def is_homotopy_ce_projective(P: Complex) -> HomotopyCeProjectiveReport:
    """Homotopy equivalent to projective terms with zero differential?

    Route one minimizes (local ring, free terms) and looks for a zero
    differential; route two asks whether P is a homotopy retract of its C-E
    precover. Both are reported when available.
    """
    ring = P.ring
    m_route = None
    mini = None
    note = ""
    if ring.is_local and has_free_terms(P):
        mini = minimize(P).complex
        m_route = all(ring.is_zero(mini.diff(n)) for n in mini.degrees())
    else:
        note = "minimize route unavailable"
    proj_terms = True
    from .module import is_projective

    proj_terms = all(is_projective(P.module(n)) for n in P.degrees())
    sec = precover_section(P)
    p_route = sec is not None
    if m_route is None and not proj_terms and p_route is False:
        note += "; terms not projective"
    return HomotopyCeProjectiveReport(m_route, p_route, mini, sec, note.strip("; "))


# --- Gorenstein projective objects ----------------------------------------------------------


@dataclass
class GpObjectResult:
    classification: object
    equivalence: HomotopyEquivalence
    reduced: Complex
    route: str


def classify_gp_object(X: Complex, bounds=None) -> GpObjectResult:
    """Reduce X up to homotopy, then classify the reduced complex termwise."""
    from .gp import classify_strongly_ce_gp

    ring = X.ring
    if ring.is_local and has_free_terms(X):
        m = minimize(X)
        cls = classify_strongly_ce_gp(m.complex, bounds)
        return GpObjectResult(cls, m.equivalence, m.complex, "minimize")
    cls = classify_strongly_ce_gp(X, bounds)
    if ring.is_local and is_radical(X):
        return GpObjectResult(cls, identity_equivalence(X), X, "radical")
    if cls.overall == "Yes":
        return GpObjectResult(cls, identity_equivalence(X), X, "direct")
    raise HomotopyError("cannot reduce X and the direct check is inconclusive")
