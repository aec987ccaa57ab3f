"""Chain complexes of finitely presented modules.

Indexing is homological: ``d_n : C_n -> C_{n-1}``. Two shapes exist: a
bounded window ``[lo, hi]`` (zero outside) and a 1-periodic complex with one
module and one endomorphism, standing for the same module in every degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .linsys import MatrixSystem
from .module import (
    FpModule,
    HomGroup,
    ModuleError,
    ModuleMap,
    Subquotient,
    _lift_kron,
    direct_sum as module_sum,
    free_module,
    image,
    kernel,
    lift_through_mono,
    quotient,
    zero_module,
)
from .ring import Ring


class ComplexError(ValueError):
    pass


@dataclass(eq=False)
class Complex:
    ring: Ring
    modules: dict
    diffs: dict
    periodic: bool = False
    lo: int = 0
    hi: int = 0
    name: str = ""

    def __post_init__(self):
        ring = self.ring
        if self.periodic:
            M = self.modules[0]
            d = self.diffs.get(0, ring.zeros(M.gens, M.gens)) % ring.char
            self.diffs = {0: d}
            self.lo = self.hi = 0
        else:
            if self.lo > self.hi:
                raise ComplexError("empty degree window")
            for n in range(self.lo, self.hi + 1):
                self.modules.setdefault(n, zero_module(ring))
            self.diffs = {n: self.diffs[n] % ring.char for n in self.diffs if self.lo < n <= self.hi}
        self._validate()

    def _validate(self):
        label = self.name or "complex"
        for n in self.degrees():
            if self.periodic and n != 0:
                continue
            D = self.diff(n)
            src, tgt = self.module(n), self.module(n - 1)
            if D.shape[:2] != (tgt.gens, src.gens):
                raise ComplexError(f"{label}: differential in degree {n} has shape {D.shape[:2]}")
            try:
                ModuleMap(src, tgt, D)
            except ModuleError as e:
                raise ComplexError(f"{label}: differential in degree {n} is not well defined") from e
        for n in self.degrees():
            DD = self.ring.matmul(self.diff(n - 1), self.diff(n))
            tgt = self.module(n - 2)
            if not all(tgt.is_zero_elem(DD[:, j]) for j in range(DD.shape[1])):
                raise ComplexError(f"{label}: d o d != 0 in degree {n}")

    def __repr__(self):
        if self.periodic:
            return f"Complex(periodic, {self.modules[0]})"
        return f"Complex([{self.lo},{self.hi}], gens={[self.module(n).gens for n in range(self.lo, self.hi + 1)]})"

    def degrees(self) -> list[int]:
        """Degrees where a term can be nonzero (one representative if periodic)."""
        if self.periodic:
            return [0]
        return list(range(self.lo, self.hi + 1))

    def check_degrees(self) -> list[int]:
        """Degrees where Z, B, H can be nonzero."""
        return self.degrees()

    def module(self, n: int) -> FpModule:
        if self.periodic:
            return self.modules[0]
        if self.lo <= n <= self.hi:
            return self.modules[n]
        return zero_module(self.ring)

    def diff(self, n: int) -> np.ndarray:
        if self.periodic:
            return self.diffs[0]
        if n in self.diffs:
            return self.diffs[n]
        return self.ring.zeros(self.module(n - 1).gens, self.module(n).gens)

    def dmap(self, n: int) -> ModuleMap:
        return ModuleMap(self.module(n), self.module(n - 1), self.diff(n), check=False)

    def is_zero(self) -> bool:
        return all(self.module(n).is_zero() for n in self.degrees())

    def equals(self, other: "Complex") -> bool:
        """Literal equality of presentations and differentials."""
        if self.periodic != other.periodic:
            return False
        degs = sorted(set(self.degrees()) | set(other.degrees()))
        for n in degs:
            a, b = self.module(n), other.module(n)
            if a.gens != b.gens or not np.array_equal(a.relations, b.relations):
                return False
            if not np.array_equal(self.diff(n), other.diff(n)):
                return False
        return True


def bounded(ring: Ring, lo: int, modules: list, diffs: Optional[dict] = None, name: str = "") -> Complex:
    """Bounded complex with ``modules[i]`` in degree ``lo + i``."""
    mods = {lo + i: m for i, m in enumerate(modules)}
    return Complex(ring, mods, dict(diffs or {}), False, lo, lo + len(modules) - 1, name)


def periodic(M: FpModule, d, name: str = "") -> Complex:
    return Complex(M.ring, {0: M}, {0: np.asarray(d)}, True, name=name)


def zero_complex(ring: Ring) -> Complex:
    return bounded(ring, 0, [zero_module(ring)])


def disk(m: int, M: FpModule) -> Complex:
    """D^m(M): M in degrees m and m-1 joined by the identity."""
    return bounded(M.ring, m - 1, [M, M], {m: M.ring.eye(M.gens)})


def sphere(m: int, M: FpModule) -> Complex:
    return bounded(M.ring, m, [M])


def suspension(C: Complex, k: int = 1) -> Complex:
    """(S^k C)_n = C_{n-k} with differential (-1)^k d."""
    ring = C.ring
    sign = -1 if k % 2 else 1
    if C.periodic:
        return periodic(C.module(0), (sign * C.diff(0)) % ring.char)
    mods = [C.module(n) for n in range(C.lo, C.hi + 1)]
    diffs = {n + k: (sign * D) % ring.char for n, D in C.diffs.items()}
    return bounded(ring, C.lo + k, mods, diffs)


def direct_sum(*cs: Complex) -> Complex:
    ring = cs[0].ring
    if any(c.periodic != cs[0].periodic for c in cs):
        raise ComplexError("cannot add a periodic and a bounded complex")
    if cs[0].periodic:
        M = module_sum(*[c.module(0) for c in cs])
        return periodic(M, _blockdiag(ring, [c.diff(0) for c in cs]))
    lo = min(c.lo for c in cs)
    hi = max(c.hi for c in cs)
    mods = [module_sum(*[c.module(n) for c in cs]) for n in range(lo, hi + 1)]
    diffs = {n: _blockdiag(ring, [c.diff(n) for c in cs]) for n in range(lo + 1, hi + 1)}
    return bounded(ring, lo, mods, diffs)


def _blockdiag(ring: Ring, mats) -> np.ndarray:
    r = sum(m.shape[0] for m in mats)
    c = sum(m.shape[1] for m in mats)
    out = ring.zeros(r, c)
    i = j = 0
    for m in mats:
        out[i : i + m.shape[0], j : j + m.shape[1]] = m
        i += m.shape[0]
        j += m.shape[1]
    return out


def change_basis(C: Complex, P: dict) -> Complex:
    """Conjugate a complex of free modules by invertible matrices ``P[n]``.

    The new differential is ``P[n-1] d_n P[n]^{-1}``; missing degrees use the
    identity. Only for free terms.
    """
    ring = C.ring

    def inv(A):
        k = A.shape[0]
        cols = [ring.solve(A, ring.eye(k)[:, j]) for j in range(k)]
        if any(c is None for c in cols):
            raise ComplexError("change of basis is not invertible")
        return np.stack(cols, axis=1) if cols else ring.zeros(0, 0)

    def get(n):
        return P.get(n, ring.eye(C.module(n).gens))

    if C.periodic:
        A = get(0)
        return periodic(C.module(0), ring.mm(A, C.diff(0), inv(A)))
    diffs = {n: ring.mm(get(n - 1), C.diff(n), inv(get(n))) for n in range(C.lo + 1, C.hi + 1)}
    return bounded(ring, C.lo, [C.module(n) for n in range(C.lo, C.hi + 1)], diffs)


# --- Z, B, H ------------------------------------------------------------------


def cycles(C: Complex, n: int) -> tuple[FpModule, ModuleMap]:
    return kernel(C.dmap(n))


def boundaries(C: Complex, n: int) -> tuple[FpModule, ModuleMap]:
    B, inc, _ = image(C.dmap(n + 1))
    return B, inc


def homology(C: Complex, n: int) -> tuple[FpModule, ModuleMap, ModuleMap]:
    """(H_n, inclusion Z_n -> C_n, projection Z_n -> H_n)."""
    Z, zinc = cycles(C, n)
    into = lift_through_mono(zinc, C.dmap(n + 1))
    H, proj = quotient(Z, into.matrix)
    return H, zinc, proj


def is_exact(C: Complex, degrees=None) -> bool:
    degs = C.degrees() if degrees is None else degrees
    return all(homology(C, n)[0].is_zero() for n in degs)


# --- chain maps -----------------------------------------------------------------


def _map_degrees(S: Complex, T: Complex) -> list[int]:
    if S.periodic and T.periodic:
        return [0]
    ws = [c for c in (S, T) if not c.periodic]
    lo = min(c.lo for c in ws)
    hi = max(c.hi for c in ws)
    return list(range(lo, hi + 1))


@dataclass(eq=False)
class ChainMap:
    source: Complex
    target: Complex
    comps: dict
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        ring = self.source.ring
        if self.source.periodic != self.target.periodic and self.source.periodic and self.target.periodic:
            raise ComplexError("variant mismatch")
        comps = {}
        for n in self.degrees():
            M, N = self.source.module(n), self.target.module(n)
            A = self.comps.get(n)
            comps[n] = ring.zeros(N.gens, M.gens) if A is None else np.asarray(A) % ring.char
            if comps[n].shape[:2] != (N.gens, M.gens):
                raise ComplexError(f"chain map component {n} has shape {comps[n].shape[:2]}")
        self.comps = comps
        if self.check:
            bad = self.failing_degree()
            if bad is not None:
                raise ComplexError(f"not a chain map (degree {bad})")

    @property
    def ring(self) -> Ring:
        return self.source.ring

    def degrees(self) -> list[int]:
        return _map_degrees(self.source, self.target)

    def comp(self, n: int) -> np.ndarray:
        if self.source.periodic and self.target.periodic:
            return self.comps[0]
        if n in self.comps:
            return self.comps[n]
        return self.ring.zeros(self.target.module(n).gens, self.source.module(n).gens)

    def cmap(self, n: int) -> ModuleMap:
        return ModuleMap(self.source.module(n), self.target.module(n), self.comp(n), check=False)

    def failing_degree(self) -> Optional[int]:
        ring = self.ring
        degs = self.degrees()
        for n in degs:
            if not self.cmap(n).is_well_defined():
                return n
        for n in degs + [degs[-1] + 1]:
            lhs = ring.matmul(self.target.diff(n), self.comp(n))
            rhs = ring.matmul(self.comp(n - 1), self.source.diff(n))
            T = self.target.module(n - 1)
            diff = lhs - rhs
            if not all(T.is_zero_elem(diff[:, j]) for j in range(diff.shape[1])):
                return n
        return None

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self after other."""
        degs = _map_degrees(other.source, self.target)
        comps = {n: self.ring.matmul(self.comp(n), other.comp(n)) for n in degs}
        return ChainMap(other.source, self.target, comps, check=False)

    def __matmul__(self, other):
        return self.compose(other)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.source, self.target, {n: self.comp(n) - other.comp(n) for n in self.degrees()}, check=False)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.source, self.target, {n: self.comp(n) + other.comp(n) for n in self.degrees()}, check=False)

    def is_zero(self) -> bool:
        return all(self.cmap(n).is_zero() for n in self.degrees())


def identity_map(C: Complex) -> ChainMap:
    return ChainMap(C, C, {n: C.ring.eye(C.module(n).gens) for n in C.degrees()}, check=False)


def zero_chain_map(S: Complex, T: Complex) -> ChainMap:
    return ChainMap(S, T, {}, check=False)


@dataclass(eq=False)
class ShortSequence:
    """A --f--> B --g--> C with g f = 0."""

    f: ChainMap
    g: ChainMap

    def __post_init__(self):
        if self.f.target is not self.g.source:
            raise ComplexError("maps do not compose")
        if not (self.g @ self.f).is_zero():
            raise ComplexError("composite of the sequence is not zero")

    @property
    def A(self):
        return self.f.source

    @property
    def B(self):
        return self.f.target

    @property
    def C(self):
        return self.g.target

    def degrees(self) -> list[int]:
        return _map_degrees(self.A, self.C) if not (self.A.periodic and self.C.periodic) else [0]


# --- groups of maps ---------------------------------------------------------------


class MorphismGroup(Subquotient):
    """Hom_{C(R)}(X, Y): chain maps modulo componentwise-zero maps.

    Ambient coordinates concatenate the flattened components over
    :attr:`degrees`. :meth:`homotopy_classes` further divides by null-homotopic
    maps, giving Hom_{K(R)}(X, Y).
    """

    def __init__(self, X: Complex, Y: Complex):
        ring = X.ring
        self.X, self.Y, self.ring = X, Y, ring
        self.degrees = _map_degrees(X, Y)
        sys = MatrixSystem(ring)
        for n in self.degrees:
            sys.unknown(f"F{n}", Y.module(n).gens, X.module(n).gens)
        self.ambient_size = sys.flat_size()
        for n in self.degrees:
            M, N = X.module(n), Y.module(n)
            if M.nrels and N.gens:
                sys.unknown(f"W{n}", N.nrels, M.nrels)
                sys.equation([(None, f"F{n}", M.relations), ((-N.relations) % ring.char, f"W{n}", None)], shape=(N.gens, M.nrels))
        eq_degs = self.degrees if (X.periodic and Y.periodic) else self.degrees + [self.degrees[-1] + 1]
        for n in eq_degs:
            T = Y.module(n - 1)
            S = X.module(n)
            if not T.gens or not S.gens:
                continue
            terms = []
            if n in self.degrees:
                terms.append((Y.diff(n), f"F{n}", None))
            if (n - 1) in self.degrees or (X.periodic and Y.periodic):
                m = 0 if (X.periodic and Y.periodic) else n - 1
                terms.append(((-ring.eye(T.gens)) % ring.char, f"F{m}", X.diff(n)))
            if T.nrels:
                sys.unknown(f"V{n}", T.nrels, S.gens)
                terms.append(((-T.relations) % ring.char, f"V{n}", None))
            if terms:
                sys.equation(terms, shape=(T.gens, S.gens))
        self._sys = sys
        size = self.ambient_size
        G = sys.solution_space()[:size] if size else np.zeros((0, 0), dtype=np.int64)
        Zcols = []
        for n in self.degrees:
            M, N = X.module(n), Y.module(n)
            if N.nrels and M.gens:
                L = _lift_kron(ring, N.relations, ring.eye(M.gens))
                block = np.zeros((size, L.shape[1]), dtype=np.int64)
                off = sys.offset(f"F{n}")
                block[off : off + L.shape[0]] = L
                Zcols.append(block)
        Z = np.concatenate(Zcols, axis=1) if Zcols else np.zeros((size, 0), dtype=np.int64)
        super().__init__(ring.char, G, Z)

    def flat(self, f: ChainMap) -> np.ndarray:
        vals = {f"F{n}": f.comp(n) for n in self.degrees}
        return self._sys.flatten(vals)[: self.ambient_size]

    def chain_map(self, v) -> ChainMap:
        full = np.zeros(self._sys.flat_size(), dtype=np.int64)
        full[: self.ambient_size] = v
        vals = self._sys.split(full)
        return ChainMap(self.X, self.Y, {n: vals[f"F{n}"] for n in self.degrees}, check=False)

    def generator_maps(self) -> list[ChainMap]:
        return [self.chain_map(self.G[:, j]) for j in range(self.G.shape[1])]

    def null_homotopic_span(self) -> np.ndarray:
        """Ambient vectors spanning {d s + s d}."""
        X, Y, ring = self.X, self.Y, self.ring
        cols = []
        both = X.periodic and Y.periodic
        src_degs = [0] if both else list(range(self.degrees[0] - 1, self.degrees[-1] + 1))
        for n in src_degs:
            Hs = HomGroup(X.module(n), Y.module(n + 1))
            for j in range(Hs.G.shape[1]):
                s = Hs.unflat(Hs.G[:, j])
                vals = {}
                a = ring.matmul(Y.diff(n + 1), s)  # lands in component n
                b = ring.matmul(s, X.diff(n + 1))  # lands in component n + 1
                if both:
                    vals["F0"] = (a + b) % ring.char
                else:
                    if n in self.degrees:
                        vals[f"F{n}"] = a
                    if (n + 1) in self.degrees:
                        vals[f"F{n + 1}"] = b
                cols.append(self._sys.flatten(vals)[: self.ambient_size])
        if not cols:
            return np.zeros((self.ambient_size, 0), dtype=np.int64)
        return np.stack(cols, axis=1)

    def homotopy_classes(self) -> Subquotient:
        Z = np.concatenate([self.Z, self.null_homotopic_span()], axis=1)
        return Subquotient(self.n, self.G, Z)


# --- the Hom complex --------------------------------------------------------------


@dataclass
class HomComplex:
    """Hom_R(C, D) as a complex of modules over the prime ring.

    ``terms[n]`` is the sub-quotient for degree n, whose ambient space
    concatenates the flattened ``Hom_R(C_t, D_{n+t})`` blocks for t in the
    window of C; ``blocks[n]`` lists ``(t, offset, HomGroup)``.
    """

    complex: Complex
    terms: dict
    blocks: dict


def hom_complex(C: Complex, D: Complex, window: Optional[tuple[int, int]] = None) -> HomComplex:
    """Hom complex with differential (d f)_m = d^D f_m - (-1)^n f_{m-1} d^C_m.

    Degree-n elements are families f_t : C_t -> D_{n+t}. The first argument
    must be bounded unless the second is; for a periodic side the degrees
    materialized default to [-4, 4].
    """
    if C.periodic and D.periodic:
        raise ComplexError("hom_complex needs a bounded argument")
    ring = C.ring
    n_ring = ring.char

    def ts(n):
        if not C.periodic:
            return list(range(C.lo, C.hi + 1))
        return list(range(D.lo - n, D.hi - n + 1))

    if window is None:
        window = (-4, 4) if (C.periodic or D.periodic) else (D.lo - C.hi, D.hi - C.lo)
    lo, hi = window
    degs = list(range(lo - 1, hi + 2))
    terms, blocks = {}, {}
    for n in degs:
        blist, Gs, Zs, off = [], [], [], 0
        for t in ts(n):
            Hg = HomGroup(C.module(t), D.module(n + t))
            blist.append((t, off, Hg))
            off += Hg.ambient
            Gs.append(Hg.G)
            Zs.append(Hg.Z)
        blocks[n] = blist
        terms[n] = Subquotient(n_ring, _blockdiag_z(Gs), _blockdiag_z(Zs))
    diffs = {}
    for n in degs[1:]:
        src, tgt = blocks[n], blocks[n - 1]
        rows = sum(b[2].ambient for b in tgt)
        cols = sum(b[2].ambient for b in src)
        L = np.zeros((rows, cols), dtype=np.int64)
        sign = -1 if n % 2 else 1
        for (t, so, Hs) in src:
            for (u, to, Ht) in tgt:
                if u == t:
                    blk = _lift_kron(ring, D.diff(n + t), ring.eye(C.module(t).gens))
                    L[to : to + Ht.ambient, so : so + Hs.ambient] += blk
                elif u == t + 1:
                    # f_t composed with d^C_{t+1} lands in the (t+1) block
                    blk = _lift_kron(ring, ring.eye(D.module(n + t).gens), C.diff(t + 1))
                    L[to : to + Ht.ambient, so : so + Hs.ambient] -= sign * blk
        diffs[n] = terms[n].map_to(terms[n - 1], L % n_ring)
    zr = terms[degs[0]].zring
    out = Complex(
        zr,
        {n: terms[n].module for n in degs},
        {n: diffs[n].matrix for n in degs[1:]},
        False,
        degs[0],
        degs[-1],
        name="Hom",
    )
    return HomComplex(out, terms, blocks)


def _blockdiag_z(mats):
    r = sum(m.shape[0] for m in mats)
    c = sum(m.shape[1] for m in mats)
    out = np.zeros((r, c), dtype=np.int64)
    i = j = 0
    for m in mats:
        out[i : i + m.shape[0], j : j + m.shape[1]] = m
        i += m.shape[0]
        j += m.shape[1]
    return out


def hom_cycles_to_chain_maps(HC: HomComplex, C: Complex, D: Complex, n: int, v) -> ChainMap:
    """Read a degree-n cycle of Hom(C, D) as a chain map C -> S^{-n} D."""
    target = suspension(D, -n)
    comps = {}
    for (t, off, Hg) in HC.blocks[n]:
        comps[t] = Hg.unflat(v[off : off + Hg.ambient])
    return ChainMap(C, target, comps)


# --- natural correspondences between morphism groups and module Homs ----------


@dataclass
class Bijection:
    name: str
    left: Subquotient
    right: Subquotient
    forward: ModuleMap
    backward: ModuleMap

    def verify(self) -> bool:
        if self.left.cardinality != self.right.cardinality:
            return False
        from .module import identity

        fb = self.backward @ self.forward
        bf = self.forward @ self.backward
        return fb.equals(identity(self.left.module)) and bf.equals(identity(self.right.module))


def _map_by(src: Subquotient, dst: Subquotient, fn) -> ModuleMap:
    cols = [dst.coords(fn(src.G[:, j])) for j in range(src.G.shape[1])]
    zr = src.zring
    mat = np.stack(cols, axis=1)[:, :, None] if cols else zr.zeros(dst.G.shape[1], 0)
    return ModuleMap(src.module, dst.module, mat, check=False)


def lemma37_isomorphisms(M: FpModule, X: Complex, n: int) -> list[Bijection]:
    """The four natural bijections between morphism groups and module Homs."""
    ring = M.ring
    out = []

    # Hom(D^n(M), X) = Hom_R(M, X_n)
    D = disk(n, M)
    G1 = MorphismGroup(D, X)
    H1 = HomGroup(M, X.module(n))

    def f1(v):
        return H1.flat(G1.chain_map(v).comp(n))

    def b1(v):
        g = H1.unflat(v)
        return G1.flat(ChainMap(D, X, {n: g, n - 1: ring.matmul(X.diff(n), g)}, check=False))

    out.append(Bijection("Hom(D^n(M),X) = Hom(M,X_n)", G1, H1, _map_by(G1, H1, f1), _map_by(H1, G1, b1)))

    # Hom(S^n(M), X) = Hom_R(M, Z_n X)
    S = sphere(n, M)
    G2 = MorphismGroup(S, X)
    Z, zinc = cycles(X, n)
    H2 = HomGroup(M, Z)

    def f2(v):
        f = G2.chain_map(v).comp(n)
        h = lift_through_mono(zinc, ModuleMap(M, X.module(n), f, check=False))
        return H2.flat(h.matrix)

    def b2(v):
        h = H2.unflat(v)
        return G2.flat(ChainMap(S, X, {n: ring.matmul(zinc.matrix, h)}, check=False))

    out.append(Bijection("Hom(S^n(M),X) = Hom(M,Z_n X)", G2, H2, _map_by(G2, H2, f2), _map_by(H2, G2, b2)))

    # Hom(X, D^n(M)) = Hom_R(X_{n-1}, M)
    G3 = MorphismGroup(X, D)
    H3 = HomGroup(X.module(n - 1), M)

    def f3(v):
        return H3.flat(G3.chain_map(v).comp(n - 1))

    def b3(v):
        g = H3.unflat(v)
        return G3.flat(ChainMap(X, D, {n - 1: g, n: ring.matmul(g, X.diff(n))}, check=False))

    out.append(Bijection("Hom(X,D^n(M)) = Hom(X_{n-1},M)", G3, H3, _map_by(G3, H3, f3), _map_by(H3, G3, b3)))

    # Hom(X, S^n(M)) = Hom_R(X_n / B_n X, M)
    G4 = MorphismGroup(X, S)
    Q, _ = quotient(X.module(n), X.diff(n + 1))
    H4 = HomGroup(Q, M)

    def f4(v):
        return H4.flat(G4.chain_map(v).comp(n))

    def b4(v):
        return G4.flat(ChainMap(X, S, {n: H4.unflat(v)}, check=False))

    out.append(Bijection("Hom(X,S^n(M)) = Hom(X_n/B_n,M)", G4, H4, _map_by(G4, H4, f4), _map_by(H4, G4, b4)))
    return out


def free_complex(ring: Ring, lo: int, ranks: list[int], diffs: dict) -> Complex:
    """Bounded complex of free modules R^{ranks[i]} in degree lo + i."""
    return bounded(ring, lo, [free_module(ring, r) for r in ranks], diffs)


# --- kernels, cokernels and presentations of complexes ---------------------------


def _rebuild(C: Complex, mods: dict, diffs: dict) -> Complex:
    if C.periodic:
        return periodic(mods[0], diffs[0])
    return bounded(C.ring, C.lo, [mods[n] for n in range(C.lo, C.hi + 1)], {n: diffs[n] for n in range(C.lo + 1, C.hi + 1)})


def kernel_complex(f: ChainMap) -> tuple[Complex, ChainMap]:
    """Degreewise kernel of f with its inclusion into the source."""
    S = f.source
    degs = S.degrees()
    mods, incs = {}, {}
    for n in degs:
        mods[n], incs[n] = kernel(f.cmap(n))
    diffs = {}
    for n in degs:
        if S.periodic or n > S.lo:
            m = 0 if S.periodic else n - 1
            diffs[n] = lift_through_mono(incs[m], S.dmap(n) @ incs[n]).matrix
    K = _rebuild(S, mods, diffs)
    return K, ChainMap(K, S, {n: incs[n].matrix for n in degs}, check=False)


def cokernel_complex(f: ChainMap) -> tuple[Complex, ChainMap]:
    """Degreewise cokernel of f with the projection from the target."""
    T = f.target
    degs = T.degrees()
    mods = {n: quotient(T.module(n), f.comp(n))[0] for n in degs}
    diffs = {n: T.diff(n) for n in degs}
    L = _rebuild(T, mods, diffs)
    return L, ChainMap(T, L, {n: T.ring.eye(T.module(n).gens) for n in degs}, check=False)


def simplify_complex(C: Complex) -> tuple[Complex, ChainMap, ChainMap]:
    """Simplify every term's presentation; returns (C', C -> C', C' -> C), mutually inverse."""
    from .module import simplify

    ring = C.ring
    degs = C.degrees()
    parts = {n: simplify(C.module(n)) for n in degs}

    def phi(n):
        return parts[0 if C.periodic else n][1].matrix if (C.periodic or n in parts) else ring.zeros(0, 0)

    def psi(n):
        return parts[0 if C.periodic else n][2].matrix if (C.periodic or n in parts) else ring.zeros(0, 0)

    mods = {n: parts[n][0] for n in degs}
    diffs = {}
    for n in degs:
        if C.periodic or n > C.lo:
            diffs[n] = ring.mm(phi(n - 1), C.diff(n), psi(n))
    D = _rebuild(C, mods, diffs)
    to = ChainMap(C, D, {n: phi(n) for n in degs}, check=False)
    back = ChainMap(D, C, {n: psi(n) for n in degs}, check=False)
    return D, to, back


def has_free_terms(C: Complex) -> bool:
    return all(C.module(n).is_free_presented for n in C.degrees())


def is_radical(C: Complex) -> bool:
    """Whether every differential lands in m * (target) for the maximal ideal m.

    Only meaningful over a local ring; such a complex has no disk summand.
    """
    ring = C.ring
    nonunits = [a for a in ring.elements() if not ring.is_unit(a)]
    for n in C.degrees():
        T = C.module(n - 1)
        if not T.gens:
            continue
        cols = []
        for k in range(T.gens):
            for a in nonunits:
                v = ring.zeros(T.gens, 1)
                v[k, 0] = a
                cols.append(v)
        span = ring.hstack(T.relations, *cols)
        D = C.diff(n)
        if not all(ring.in_span(span, D[:, j]) for j in range(D.shape[1])):
            return False
    return True
