"""Finitely presented modules over a finite commutative ring.

A module is ``R^g / span(relations)``; a map is a matrix in generator
coordinates. Abelian groups that arise as Hom sets are modelled as
sub-quotients of a flat Z/c coordinate space and converted to modules over
the prime ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import zmod
from .linsys import MatrixSystem, _vec
from .ring import Ring, IntegersMod, make_ring


class ModuleError(ValueError):
    pass


@dataclass(eq=False)
class FpModule:
    ring: Ring
    gens: int
    relations: np.ndarray

    def __post_init__(self):
        self.relations = np.asarray(self.relations, dtype=np.int64) % self.ring.char
        if self.relations.shape[0] != self.gens or self.relations.ndim != 3:
            raise ModuleError(f"relations must have {self.gens} rows, got shape {self.relations.shape}")

    def __repr__(self):
        return f"FpModule(gens={self.gens}, rels={self.relations.shape[1]}, |M|={self.cardinality})"

    @property
    def nrels(self) -> int:
        return self.relations.shape[1]

    @property
    def is_free_presented(self) -> bool:
        return self.ring.is_zero(self.relations)

    @property
    def cardinality(self) -> int:
        return self.ring.cardinality**self.gens // self.ring.span_size(self.relations)

    def is_zero(self) -> bool:
        return self.cardinality == 1

    def is_zero_elem(self, v) -> bool:
        return self.ring.in_span(self.relations, v)

    def elements(self):
        """Canonical representatives of every element (small modules only)."""
        n = self.ring.char
        L = self.ring.lift(self.relations)
        H, piv = zmod.howell(L.T, n) if L.shape[1] else (np.zeros((0, L.shape[0]), np.int64), np.zeros(0, np.int64))
        seen = set()
        import itertools

        for t in itertools.product(range(n), repeat=self.gens * self.ring.dim):
            v = zmod.reduce(np.array(t, dtype=np.int64), H, piv, n)
            key = tuple(v)
            if key not in seen:
                seen.add(key)
                yield v.reshape(self.gens, self.ring.dim)


def free_module(ring: Ring, rank: int) -> FpModule:
    if rank < 0:
        raise ModuleError("rank must be non-negative")
    return FpModule(ring, rank, ring.zeros(rank, 0))


def zero_module(ring: Ring) -> FpModule:
    return free_module(ring, 0)


def cyclic_module(ring: Ring, *elements) -> FpModule:
    """R / (elements)."""
    rels = ring.matrix([list(elements)]) if elements else ring.zeros(1, 0)
    return FpModule(ring, 1, rels)


def direct_sum(*mods: FpModule) -> FpModule:
    ring = mods[0].ring
    g = sum(m.gens for m in mods)
    k = sum(m.nrels for m in mods)
    rels = ring.zeros(g, k)
    r = c = 0
    for m in mods:
        rels[r : r + m.gens, c : c + m.nrels] = m.relations
        r += m.gens
        c += m.nrels
    return FpModule(ring, g, rels)


@dataclass(eq=False)
class ModuleMap:
    source: FpModule
    target: FpModule
    matrix: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        ring = self.source.ring
        self.matrix = np.asarray(self.matrix, dtype=np.int64) % ring.char
        if self.matrix.shape[:2] != (self.target.gens, self.source.gens):
            raise ModuleError(
                f"map matrix has shape {self.matrix.shape[:2]}, expected {(self.target.gens, self.source.gens)}"
            )
        if self.check and not self.is_well_defined():
            raise ModuleError("matrix does not send source relations into target relations")

    @property
    def ring(self) -> Ring:
        return self.source.ring

    def is_well_defined(self) -> bool:
        img = self.ring.matmul(self.matrix, self.source.relations)
        return all(self.target.is_zero_elem(img[:, j]) for j in range(img.shape[1]))

    def __call__(self, v):
        return self.ring.matmul(self.matrix, v.reshape(self.source.gens, 1, self.ring.dim))[:, 0]

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self after other."""
        return ModuleMap(other.source, self.target, self.ring.matmul(self.matrix, other.matrix), check=False)

    def __matmul__(self, other):
        return self.compose(other)

    def __add__(self, other):
        return ModuleMap(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other):
        return ModuleMap(self.source, self.target, self.matrix - other.matrix, check=False)

    def __neg__(self):
        return ModuleMap(self.source, self.target, -self.matrix, check=False)

    def is_zero(self) -> bool:
        return all(self.target.is_zero_elem(self.matrix[:, j]) for j in range(self.source.gens))

    def equals(self, other: "ModuleMap") -> bool:
        return (self - other).is_zero()

    def is_injective(self) -> bool:
        return kernel(self)[0].is_zero()

    def is_surjective(self) -> bool:
        return cokernel(self)[0].is_zero()


def identity(M: FpModule) -> ModuleMap:
    return ModuleMap(M, M, M.ring.eye(M.gens), check=False)


def zero_map(M: FpModule, N: FpModule) -> ModuleMap:
    return ModuleMap(M, N, M.ring.zeros(N.gens, M.gens), check=False)


# --- sub-objects and quotients ----------------------------------------------


def _prune_mod(ring: Ring, S, rels):
    """Columns of S that are not generated by earlier kept ones plus rels."""
    kept = []
    for j in range(S.shape[1]):
        cur = ring.hstack(rels, *[k[:, None] for k in kept]) if kept else rels
        if not ring.in_span(cur, S[:, j]):
            kept.append(S[:, j])
    return np.stack(kept, axis=1) if kept else ring.zeros(S.shape[0], 0)


def submodule(M: FpModule, S) -> tuple[FpModule, ModuleMap]:
    """The submodule of M generated by the columns of S, with its inclusion."""
    ring = M.ring
    S = _prune_mod(ring, S % ring.char, M.relations)
    k = S.shape[1]
    K = ring.kernel(ring.hstack(S, M.relations))
    rels = ring.canonical_gens(K[:k]) if k else ring.zeros(0, 0)
    N = FpModule(ring, k, rels)
    return N, ModuleMap(N, M, S, check=False)


def kernel(f: ModuleMap) -> tuple[FpModule, ModuleMap]:
    ring = f.ring
    g = f.source.gens
    K = ring.kernel(ring.hstack(f.matrix, f.target.relations))
    return submodule(f.source, K[:g])


def image(f: ModuleMap) -> tuple[FpModule, ModuleMap, ModuleMap]:
    """(Im f, inclusion Im f -> target, corestriction source -> Im f)."""
    I, inc = submodule(f.target, f.matrix)
    core = lift_through_mono(inc, f)
    return I, inc, core


def cokernel(f: ModuleMap) -> tuple[FpModule, ModuleMap]:
    ring = f.ring
    C = FpModule(ring, f.target.gens, ring.canonical_gens(ring.hstack(f.target.relations, f.matrix)))
    return C, ModuleMap(f.target, C, ring.eye(f.target.gens), check=False)


def quotient(M: FpModule, S) -> tuple[FpModule, ModuleMap]:
    """M / span(S) with the projection."""
    ring = M.ring
    Q = FpModule(ring, M.gens, ring.canonical_gens(ring.hstack(M.relations, S)))
    return Q, ModuleMap(M, Q, ring.eye(M.gens), check=False)


def lift_through_mono(i: ModuleMap, h: ModuleMap) -> ModuleMap:
    """The map g with i g = h; requires im h inside im i."""
    ring = i.ring
    N = i.target
    cols = []
    for j in range(h.source.gens):
        x = ring.solve(ring.hstack(i.matrix, N.relations), h.matrix[:, j])
        if x is None:
            raise ModuleError("image of map is not contained in the submodule")
        cols.append(x[: i.source.gens])
    mat = np.stack(cols, axis=1) if cols else ring.zeros(i.source.gens, 0)
    return ModuleMap(h.source, i.source, mat, check=False)


def lift_map(p: ModuleMap, h: ModuleMap) -> Optional[ModuleMap]:
    """Some well-defined t: X -> N with p t = h (p: N -> T, h: X -> T), or None."""
    ring = p.ring
    X, N, T = h.source, p.source, p.target
    sys = MatrixSystem(ring)
    sys.unknown("T", N.gens, X.gens)
    sys.unknown("W", N.nrels, X.nrels)
    sys.unknown("V", T.nrels, X.gens)
    if X.nrels:
        sys.equation([(None, "T", X.relations), ((-N.relations) % ring.char, "W", None)], shape=(N.gens, X.nrels))
    sys.equation([(p.matrix, "T", None), ((-T.relations) % ring.char, "V", None)], rhs=h.matrix)
    sol = sys.solve()
    if sol is None:
        return None
    return ModuleMap(X, N, sol["T"], check=False)


def simplify(M: FpModule) -> tuple[FpModule, ModuleMap, ModuleMap]:
    """Drop generators killed by a relation with a unit coefficient.

    Returns ``(M', phi, psi)`` with phi: M -> M', psi: M' -> M mutually
    inverse isomorphisms.
    """
    ring = M.ring
    rels = ring.canonical_gens(M.relations)
    g = M.gens
    phi = ring.eye(g)  # M -> current
    psi = ring.eye(g)  # current -> M
    changed = True
    while changed:
        changed = False
        for c in range(rels.shape[1]):
            col = rels[:, c]
            unit = next((i for i in range(rels.shape[0]) if ring.is_unit(col[i])), None)
            if unit is None:
                continue
            i = unit
            u_inv = ring.inverse(col[i])
            keep = [k for k in range(rels.shape[0]) if k != i]
            step = ring.zeros(len(keep), rels.shape[0])
            for a, k in enumerate(keep):
                step[a, k] = ring.one
                step[a, i] = ring.neg(ring.mul(u_inv, col[k]))
            incl = ring.zeros(rels.shape[0], len(keep))
            for a, k in enumerate(keep):
                incl[k, a] = ring.one
            others = [j for j in range(rels.shape[1]) if j != c]
            rels = ring.canonical_gens(ring.matmul(step, rels[:, others]))
            phi = ring.matmul(step, phi)
            psi = ring.matmul(psi, incl)
            changed = True
            break
    Mp = FpModule(ring, rels.shape[0], rels)
    return Mp, ModuleMap(M, Mp, phi, check=False), ModuleMap(Mp, M, psi, check=False)


# --- projectivity -------------------------------------------------------------


@dataclass
class ProjectivityResult:
    projective: bool
    section: Optional[ModuleMap] = None

    def __bool__(self):
        return self.projective


def is_projective(M: FpModule) -> ProjectivityResult:
    """Does R^g -> M split?  The witness is the section M -> R^g."""
    ring = M.ring
    F = free_module(ring, M.gens)
    if M.is_free_presented:
        return ProjectivityResult(True, ModuleMap(M, F, ring.eye(M.gens), check=False))
    # section s = 1 + rel Y with s rel = 0, i.e. rel Y rel = -rel
    rel = M.relations
    sys = MatrixSystem(ring)
    sys.unknown("Y", M.nrels, M.gens)
    sys.equation([(rel, "Y", rel)], rhs=(-rel) % ring.char)
    sol = sys.solve()
    if sol is None:
        return ProjectivityResult(False)
    S = (ring.eye(M.gens) + ring.matmul(rel, sol["Y"])) % ring.char
    sec = ModuleMap(M, F, S)
    return ProjectivityResult(True, sec)


# --- abelian groups as sub-quotients -------------------------------------------


class Subquotient:
    """span(G) / span(Z) inside (Z/n)^A, where span(Z) is contained in span(G)."""

    def __init__(self, n: int, G, Z):
        self.n = n
        self.zring = make_ring(IntegersMod(n))
        G = np.asarray(G, dtype=np.int64) % n
        Z = np.asarray(Z, dtype=np.int64) % n
        self.ambient = G.shape[0]
        # canonical generator columns modulo Z
        kept = []
        for j in range(G.shape[1]):
            cur = np.concatenate([Z] + [k[:, None] for k in kept], axis=1) if kept else Z
            if not zmod.in_span(cur, G[:, j], n):
                kept.append(G[:, j])
        self.G = np.stack(kept, axis=1) if kept else np.zeros((self.ambient, 0), dtype=np.int64)
        self.Z = Z
        a = self.G.shape[1]
        if a:
            K = zmod.kernel(np.concatenate([self.G, Z], axis=1), n)[:a]
            rels = self.zring.canonical_gens(K[:, :, None]) if K.shape[1] else self.zring.zeros(a, 0)
        else:
            rels = self.zring.zeros(0, 0)
        self.module = FpModule(self.zring, a, rels)

    @property
    def cardinality(self) -> int:
        return self.module.cardinality

    def coords(self, v) -> np.ndarray:
        """Generator coordinates of an ambient vector in span(G) + span(Z)."""
        a = self.G.shape[1]
        x = zmod.solve(np.concatenate([self.G, self.Z], axis=1), np.asarray(v) % self.n, self.n)
        if x is None:
            raise ModuleError("vector does not lie in the sub-quotient")
        return x[:a]

    def contains(self, v) -> bool:
        return zmod.in_span(np.concatenate([self.G, self.Z], axis=1), v, self.n)

    def is_zero(self, v) -> bool:
        return zmod.in_span(self.Z, v, self.n)

    def map_to(self, other: "Subquotient", L) -> ModuleMap:
        """Module map induced by the ambient linear map L (other.ambient x self.ambient)."""
        L = np.asarray(L, dtype=np.int64)
        cols = [other.coords(L @ self.G[:, j]) for j in range(self.G.shape[1])]
        mat = np.stack(cols, axis=1)[:, :, None] if cols else self.zring.zeros(other.G.shape[1], 0)
        return ModuleMap(self.module, other.module, mat, check=False)


def _lift_kron(ring: Ring, A, B):
    """Z/c matrix of X -> A X B on column-major flattened coordinates."""
    return ring.lift(ring.kron(B.transpose(1, 0, 2), A))


class HomGroup(Subquotient):
    """Hom_R(M, N) as an abelian group; ambient = flattened gN x gM matrices."""

    def __init__(self, M: FpModule, N: FpModule):
        ring = M.ring
        self.M, self.N, self.ring = M, N, ring
        sys = MatrixSystem(ring)
        sys.unknown("F", N.gens, M.gens)
        sys.unknown("W", N.nrels, M.nrels)
        if M.nrels:
            sys.equation([(None, "F", M.relations), ((-N.relations) % ring.char, "W", None)], shape=(N.gens, M.nrels))
        size = N.gens * M.gens * ring.dim
        if M.nrels:
            K = sys.solution_space()[:size]
        else:
            K = np.eye(size, dtype=np.int64)
        if N.nrels and M.gens:
            Z = _lift_kron(ring, N.relations, ring.eye(M.gens))
        else:
            Z = np.zeros((size, 0), dtype=np.int64)
        super().__init__(ring.char, K, Z)

    def flat(self, F) -> np.ndarray:
        return _vec(self.ring, F).reshape(-1) % self.ring.char

    def unflat(self, v) -> np.ndarray:
        from .linsys import _unvec

        return _unvec(np.asarray(v), self.N.gens, self.M.gens, self.ring.dim)

    def element(self, coords) -> np.ndarray:
        return self.unflat(self.G @ np.asarray(coords) % self.n)

    def induced(self, other: "HomGroup", A=None, B=None) -> ModuleMap:
        """Map F -> A F B into ``other``."""
        ring = self.ring
        A = ring.eye(self.N.gens) if A is None else A
        B = ring.eye(self.M.gens) if B is None else B
        return self.map_to(other, _lift_kron(ring, A, B))


# --- Gorenstein projectivity ----------------------------------------------------


@dataclass
class GpBounds:
    period: int = 2
    rank: int = 4
    max_steps: int = 12
    shortcut: bool = True


@dataclass
class CompleteResolution:
    """Eventually periodic complete resolution by free modules.

    ``maps`` is a finite window of matrices (each ``R^a -> R^b``, composed
    left to right); the first ``left_period`` maps repeat forever to the left
    and the last ``right_period`` to the right. The module embeds through
    ``embedding`` (target-rank x module-generators) onto ``ker(map_at(center))``.
    """

    ring: Ring
    maps: list
    left_period: int
    right_period: int
    center: int
    embedding: np.ndarray

    @property
    def period(self) -> int:
        return max(self.left_period, self.right_period)

    @property
    def ranks(self) -> list[int]:
        return [self.maps[0].shape[1]] + [m.shape[0] for m in self.maps]

    def map_at(self, k: int) -> np.ndarray:
        L = len(self.maps)
        if k < 0:
            return self.maps[k % self.left_period]
        if k >= L:
            p = self.right_period
            return self.maps[L - p + (k - L) % p]
        return self.maps[k]


@dataclass
class GpVerdict:
    status: str  # "Yes" or "Unknown"
    witness: Optional[CompleteResolution] = None
    reason: str = ""

    @property
    def yes(self) -> bool:
        return self.status == "Yes"


def _exact_at(ring: Ring, A, B) -> bool:
    """ker B == im A for free modules (A then B)."""
    if A.shape[0] != B.shape[1]:
        return False
    if not ring.is_zero(ring.matmul(B, A)):
        return False
    K = ring.kernel(B)
    return all(ring.in_span(A, K[:, j]) for j in range(K.shape[1]))


def verify_complete_resolution(M: FpModule, W: CompleteResolution) -> tuple[bool, str]:
    """Exactness, Hom(-, R)-exactness and M = ker(map_at(center)), re-checked."""
    ring = M.ring
    lo = -W.left_period - 1
    hi = len(W.maps) + W.right_period + 1
    for k in range(lo, hi):
        A, B = W.map_at(k), W.map_at(k + 1)
        if not _exact_at(ring, A, B):
            return False, f"not exact at junction {k}/{k + 1}"
        At, Bt = A.transpose(1, 0, 2), B.transpose(1, 0, 2)
        if not _exact_at(ring, Bt, At):
            return False, f"Hom(-,R) not exact at junction {k}/{k + 1}"
    E, D = W.embedding, W.map_at(W.center)
    if E.shape[1] != M.gens or E.shape[0] != D.shape[1]:
        return False, "embedding has the wrong shape"
    F = free_module(ring, E.shape[0])
    emb = ModuleMap(M, F, E, check=False)
    if not emb.is_well_defined():
        return False, "embedding is not well defined"
    if not emb.is_injective():
        return False, "embedding is not injective"
    if not _exact_at(ring, E, D):
        return False, "embedding image differs from the kernel"
    return True, "ok"


def _same(A, B) -> bool:
    return A.shape == B.shape and np.array_equal(A, B)


def contractible_witness(ring: Ring, rank: int, embedding=None) -> CompleteResolution:
    """... -> F+F -> F+F -> ... with (x, y) -> (y, 0); kernel F+0."""
    D = ring.zeros(2 * rank, 2 * rank)
    D[:rank, rank:] = ring.eye(rank)
    if embedding is None:
        embedding = ring.vstack(ring.eye(rank), ring.zeros(rank, rank))
    return CompleteResolution(ring, [D], 1, 1, 0, embedding)


def _close(step, start, max_steps, max_rank, rank_of):
    seq = [start]
    for _ in range(max_steps):
        nxt = step(seq[-1])
        if rank_of(nxt) > max_rank:
            return seq, None, f"exceeded rank {max_rank}"
        hit = next((i for i, A in enumerate(seq) if _same(A, nxt)), None)
        if hit is not None:
            return seq, hit, ""
        seq.append(nxt)
    return seq, None, f"did not close within {max_steps} steps"


def is_gorenstein_projective(M: FpModule, bounds: Optional[GpBounds] = None) -> GpVerdict:
    """Search for an eventually periodic complete resolution through M.

    The right half is built by repeatedly taking generators of left
    annihilators (an embedding into a free module), the left half by
    repeated syzygies. Generators are canonical functions of the submodule,
    so revisiting a matrix closes a period. Over rings flagged zero-Gorenstein
    the rank and period bounds are lifted. Every Yes is re-verified.
    """
    bounds = bounds or GpBounds()
    ring = M.ring
    M0, phi, _ = simplify(M)
    if M0.nrels == 0:
        W = contractible_witness(ring, M0.gens, ring.vstack(phi.matrix, ring.zeros(M0.gens, M.gens)))
        ok, why = verify_complete_resolution(M, W)
        return GpVerdict("Yes", W) if ok else GpVerdict("Unknown", reason=why)
    unbounded = ring.zero_gorenstein and bounds.shortcut
    max_rank = 64 if unbounded else bounds.rank
    max_period = 4 * bounds.max_steps if unbounded else bounds.period
    max_steps = 4 * bounds.max_steps if unbounded else bounds.max_steps

    A1 = ring.left_annihilator(M0.relations)
    if A1.shape[0] > max_rank:
        return GpVerdict("Unknown", reason=f"embedding exceeded rank {max_rank}")
    right, r_start, why = _close(ring.left_annihilator, A1, max_steps, max_rank, lambda A: A.shape[0])
    if r_start is None:
        return GpVerdict("Unknown", reason="right half " + why)
    left, l_start, why = _close(ring.kernel, A1, max_steps, max_rank, lambda A: A.shape[1])
    if l_start is None:
        return GpVerdict("Unknown", reason="left half " + why)
    r_period = len(right) - r_start
    l_period = len(left) - l_start
    if max(r_period, l_period) > max_period:
        return GpVerdict("Unknown", reason=f"period exceeds bound {max_period}")
    lhs = list(reversed(left[1:]))
    window = lhs + right
    center = len(lhs) + 1
    W = CompleteResolution(ring, window, l_period, r_period, center, ring.matmul(A1, phi.matrix))
    ok, why = verify_complete_resolution(M, W)
    if not ok:
        return GpVerdict("Unknown", reason=f"candidate failed verification: {why}")
    return GpVerdict("Yes", W)
