"""Cartan-Eilenberg structure: C-E exactness, degreewise splitting, C-E projectives."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .complex import (
    ChainMap,
    Complex,
    ShortSequence,
    boundaries,
    bounded,
    cycles,
    direct_sum,
    disk,
    homology,
    periodic,
    sphere,
    zero_chain_map,
    zero_complex,
)
from .linsys import MatrixSystem
from .module import (
    FpModule,
    ModuleMap,
    direct_sum as module_sum,
    identity,
    is_projective,
    lift_map,
    lift_through_mono,
    quotient,
    zero_module,
)


class CeError(ValueError):
    pass


FAMILIES = ("terms", "Z", "B", "C/Z", "C/B", "H")


# --- functorial pieces ----------------------------------------------------------


class _Functors:
    """Caches Z, B, H, C/Z, C/B of one complex in one degree."""

    def __init__(self, C: Complex, n: int):
        self.C, self.n = C, n
        self.Z, self.zinc = cycles(C, n)
        self.B, self.binc = boundaries(C, n)
        self.Zq = quotient(C.module(n), self.zinc.matrix)[0]
        self.Bq = quotient(C.module(n), C.diff(n + 1))[0]
        into = lift_through_mono(self.zinc, C.dmap(n + 1))
        self.H = quotient(self.Z, into.matrix)[0]

    def module(self, fam: str) -> FpModule:
        return {"terms": self.C.module(self.n), "Z": self.Z, "B": self.B, "C/Z": self.Zq, "C/B": self.Bq, "H": self.H}[fam]


def _induced(f: ChainMap, n: int, src: _Functors, tgt: _Functors, fam: str) -> ModuleMap:
    fn = f.cmap(n)
    if fam == "terms":
        return fn
    if fam in ("Z", "H"):
        m = lift_through_mono(tgt.zinc, fn @ src.zinc)
        return ModuleMap(src.module(fam), tgt.module(fam), m.matrix, check=False)
    if fam == "B":
        m = lift_through_mono(tgt.binc, fn @ src.binc)
        return ModuleMap(src.B, tgt.B, m.matrix, check=False)
    return ModuleMap(src.module(fam), tgt.module(fam), fn.matrix, check=False)


def exact_at(alpha: ModuleMap, beta: ModuleMap) -> bool:
    """ker beta == im alpha for A --alpha--> B --beta--> C."""
    ring = alpha.ring
    B = beta.source
    if not (beta @ alpha).is_zero():
        return False
    from .module import kernel

    K, inc = kernel(beta)
    span = ring.hstack(alpha.matrix, B.relations)
    return all(ring.in_span(span, inc.matrix[:, j]) for j in range(K.gens))


def _zero_into(M: FpModule) -> ModuleMap:
    return ModuleMap(zero_module(M.ring), M, M.ring.zeros(M.gens, 0), check=False)


def _zero_from(M: FpModule) -> ModuleMap:
    return ModuleMap(M, zero_module(M.ring), M.ring.zeros(0, M.gens), check=False)


def module_sequence_exact(maps: list[ModuleMap]) -> bool:
    """Exactness at every interior object of a composable list of module maps."""
    return all(exact_at(a, b) for a, b in zip(maps, maps[1:]))


def short_exact(alpha: ModuleMap, beta: ModuleMap) -> bool:
    return module_sequence_exact([_zero_into(alpha.source), alpha, beta, _zero_from(beta.target)])


# --- sequences of complexes -------------------------------------------------------


def _seq_degrees(cs: list[Complex]) -> list[int]:
    if all(c.periodic for c in cs):
        return [0]
    ws = [c for c in cs if not c.periodic]
    return list(range(min(c.lo for c in ws), max(c.hi for c in ws) + 1))


def as_long(s: ShortSequence) -> list[ChainMap]:
    """Pad a short sequence with zero complexes: 0 -> A -> B -> C -> 0."""
    ring = s.A.ring
    if s.A.periodic:
        z = periodic(zero_module(ring), ring.zeros(0, 0))
    else:
        z = zero_complex(ring)
    return [zero_chain_map(z, s.A), s.f, s.g, zero_chain_map(s.C, z)]


@dataclass
class CeExactReport:
    families: dict
    failures: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return all(self.families.values())

    def __bool__(self):
        return self.exact

    def failing(self) -> list[str]:
        return [k for k in FAMILIES if not self.families[k]]


def ce_exact_report(maps: list[ChainMap], degrees=None) -> CeExactReport:
    """Evaluate the six families at every interior object of a sequence of chain maps."""
    cs = [maps[0].source] + [m.target for m in maps]
    degs = _seq_degrees(cs) if degrees is None else degrees
    fam_ok = {k: True for k in FAMILIES}
    failures: dict = {k: [] for k in FAMILIES}
    for n in degs:
        fs = [_Functors(c, n) for c in cs]
        for fam in FAMILIES:
            ind = [_induced(m, n, fs[i], fs[i + 1], fam) for i, m in enumerate(maps)]
            for j in range(len(ind) - 1):
                if not exact_at(ind[j], ind[j + 1]):
                    fam_ok[fam] = False
                    failures[fam].append((n, j + 1))
    return CeExactReport(fam_ok, {k: v for k, v in failures.items() if v})


def is_ce_exact(s) -> CeExactReport:
    maps = as_long(s) if isinstance(s, ShortSequence) else list(s)
    return ce_exact_report(maps)


def is_degreewise_exact(s: ShortSequence) -> bool:
    return _terms_exact(as_long(s))


def _terms_exact(maps: list[ChainMap]) -> bool:
    cs = [maps[0].source] + [m.target for m in maps]
    for n in _seq_degrees(cs):
        if not module_sequence_exact([m.cmap(n) for m in maps]):
            return False
    return True


@dataclass
class SplitReport:
    split: bool
    sections: dict = field(default_factory=dict)
    failing_degree: Optional[int] = None

    def __bool__(self):
        return self.split


def is_degreewise_split(s: ShortSequence) -> SplitReport:
    """Sections of g in every degree (g s = 1), after checking short exactness."""
    if not _terms_exact(as_long(s)):
        raise CeError("sequence is not degreewise short exact")
    sections = {}
    for n in s.degrees():
        g = s.g.cmap(n)
        sec = lift_map(g, identity(g.target))
        if sec is None:
            return SplitReport(False, sections, n)
        sections[n] = sec
    return SplitReport(True, sections)


def regular_witness(f: ModuleMap) -> Optional[ModuleMap]:
    """Some t with f t f = f, i.e. image and kernel of f are summands."""
    ring = f.ring
    M, N = f.source, f.target
    sys = MatrixSystem(ring)
    sys.unknown("T", M.gens, N.gens)
    if N.nrels:
        sys.unknown("W", M.nrels, N.nrels)
        sys.equation([(None, "T", N.relations), ((-M.relations) % ring.char, "W", None)], shape=(M.gens, N.nrels))
    terms = [(f.matrix, "T", f.matrix)]
    if N.nrels:
        sys.unknown("V", N.nrels, M.gens)
        terms.append(((-N.relations) % ring.char, "V", None))
    sys.equation(terms, rhs=f.matrix)
    sol = sys.solve()
    if sol is None:
        return None
    return ModuleMap(N, M, sol["T"], check=False)


def sequence_degreewise_split(maps: list[ChainMap]) -> tuple[bool, Optional[tuple[int, int]]]:
    """Every map of an exact sequence splits degreewise (f t f = f for some t)."""
    cs = [maps[0].source] + [m.target for m in maps]
    for n in _seq_degrees(cs):
        for i, m in enumerate(maps):
            if regular_witness(m.cmap(n)) is None:
                return False, (n, i)
    return True, None


@dataclass
class StrongReport:
    strongly_exact: bool
    ce: CeExactReport
    split: bool
    split_failure: Optional[tuple[int, int]] = None

    def __bool__(self):
        return self.strongly_exact


def is_strongly_ce_exact(seq) -> StrongReport:
    """C-E exact at every interior junction and degreewise split."""
    maps = as_long(seq) if isinstance(seq, ShortSequence) else list(seq)
    for a, b in zip(maps, maps[1:]):
        if not (b @ a).is_zero():
            raise CeError("consecutive maps do not compose to zero")
    rep = ce_exact_report(maps)
    if rep.families["terms"]:
        ok, where = sequence_degreewise_split(maps)
    else:
        ok, where = False, None
    return StrongReport(rep.exact and ok, rep, ok, where)


# --- the two-of-five criterion ------------------------------------------------------

# numbering of the five conditions; (3) accepts either B or C/Z
CONDITIONS = {1: ("terms",), 2: ("Z",), 3: ("B", "C/Z"), 4: ("C/B",), 5: ("H",)}


def condition_holds(rep: CeExactReport, k: int) -> bool:
    return any(rep.families[f] for f in CONDITIONS[k])


def lemma34_check(s: ShortSequence, pair: tuple[int, int], report: Optional[CeExactReport] = None) -> bool:
    """Given two verified conditions, re-verify full C-E exactness."""
    rep = report or is_ce_exact(s)
    a, b = pair
    if a not in CONDITIONS or b not in CONDITIONS or a == b:
        raise CeError(f"bad condition pair {pair}")
    if not (condition_holds(rep, a) and condition_holds(rep, b)):
        raise CeError(f"conditions {pair} are not both exact")
    return rep.exact


# --- C-E projective complexes ---------------------------------------------------------


@dataclass
class CeProjectiveReport:
    projective: bool
    failures: dict

    def __bool__(self):
        return self.projective

    def reasons(self) -> list[str]:
        return [f"{k} not projective" for k in ("terms", "Z", "B", "H") if k in self.failures]


def is_ce_projective(P: Complex) -> CeProjectiveReport:
    """Terms, cycles, boundaries and homology all projective."""
    failures: dict = {}
    for n in P.degrees():
        f = _Functors(P, n)
        for key, M in (("terms", P.module(n)), ("Z", f.Z), ("B", f.B), ("H", f.H)):
            if not is_projective(M):
                failures.setdefault(key, []).append(n)
    return CeProjectiveReport(not failures, failures)


@dataclass
class CeDecomposition:
    """P = P' + P'' with P' a sum of disks and P'' the homology with zero differential.

    ``forward``: Q -> P and ``backward``: P -> Q are inverse chain maps, where
    Q = P' + P'' is the disk-and-sphere sum.
    """

    source: Complex
    disks: Complex
    spheres: Complex
    total: Complex
    forward: ChainMap
    backward: ChainMap
    pieces: list

    def verify(self) -> bool:
        from .complex import identity_map

        a = self.forward @ self.backward
        b = self.backward @ self.forward
        return (a - identity_map(self.source)).is_zero() and (b - identity_map(self.total)).is_zero()


def ce_decompose(P: Complex) -> CeDecomposition:
    """Split a C-E projective complex into disks on B_{n-1} and spheres on H_n."""
    rep = is_ce_projective(P)
    if not rep:
        raise CeError("complex is not C-E projective: " + ", ".join(rep.reasons()))
    ring = P.ring
    degs = P.degrees()
    data = {}
    for n in degs:
        f = _Functors(P, n)
        # section h: H_n -> Z_n of the projection, corestriction P_n -> B_{n-1}
        into = lift_through_mono(f.zinc, P.dmap(n + 1))
        H, proj = quotient(f.Z, into.matrix)
        h = lift_map(proj, identity(H))
        data[n] = dict(Z=f.Z, zinc=f.zinc, B=f.B, binc=f.binc, H=H, proj=proj, h=h)
    for n in degs:
        m = 0 if P.periodic else n - 1
        Bm = data[m]["B"] if (P.periodic or m in data) else boundaries(P, m)[0]
        binc_m = data[m]["binc"] if (P.periodic or m in data) else boundaries(P, m)[1]
        core = lift_through_mono(binc_m, P.dmap(n))  # P_n -> B_{n-1}
        t = lift_map(core, identity(Bm))  # B_{n-1} -> P_n with d t = incl
        data[n].update(Bprev=Bm, bprev_inc=binc_m, core=core, t=t)
    for n in degs:
        if data[n]["h"] is None or data[n]["t"] is None:
            raise CeError(f"no splitting found in degree {n}")

    if P.periodic:
        d0 = data[0]
        B, H = d0["B"], d0["H"]
        Bz = module_sum(B, B)
        dmat = ring.zeros(B.gens * 2, B.gens * 2)
        dmat[B.gens :, : B.gens] = ring.eye(B.gens)
        Dk = periodic(Bz, dmat)
        Sp = periodic(H, ring.zeros(H.gens, H.gens))
        Q = direct_sum(Dk, Sp)
        pieces = [("disk", 0, B), ("sphere", 0, H)]
    else:
        disks = [disk(n, data[n]["Bprev"]) for n in degs] + [disk(P.hi + 1, data[P.hi]["B"])]
        spheres = [sphere(n, data[n]["H"]) for n in degs]
        Dk = direct_sum(*disks)
        Sp = direct_sum(*spheres)
        Q = direct_sum(*disks, *spheres)
        pieces = [("disk", n, data[n]["Bprev"]) for n in degs] + [("disk", P.hi + 1, data[P.hi]["B"])]
        pieces += [("sphere", n, data[n]["H"]) for n in degs]

    fwd, bwd = {}, {}
    for n in degs:
        dn = data[n]
        Pn = P.module(n)
        zinc_h = ring.matmul(dn["zinc"].matrix, dn["h"].matrix)
        fwd[n] = ring.hstack(dn["t"].matrix, dn["binc"].matrix, zinc_h)
        # x -> (dx, z - h[z], [z]) with z = x - t d x
        core = dn["core"].matrix
        zx = (ring.eye(Pn.gens) - ring.matmul(dn["t"].matrix, core)) % ring.char
        zc = lift_through_mono(dn["zinc"], ModuleMap(Pn, Pn, zx, check=False)).matrix
        hz = ring.matmul(dn["proj"].matrix, zc)
        rest = (zc - ring.matmul(dn["h"].matrix, hz)) % ring.char
        bc = lift_through_mono(dn["binc"], ModuleMap(Pn, Pn, ring.matmul(dn["zinc"].matrix, rest), check=False)).matrix
        bwd[n] = ring.vstack(core, bc, hz)
    forward = ChainMap(Q, P, fwd)
    backward = ChainMap(P, Q, bwd)
    dec = CeDecomposition(P, Dk, Sp, Q, forward, backward, pieces)
    if not dec.verify():
        raise CeError("decomposition failed verification")
    return dec
