"""Finite commutative coefficient rings.

A ring is stored as a free Z/c-module with basis ``e_0 = 1, e_1, ...`` and
structure constants ``table[a, b, z]`` (``e_a * e_b = sum_z table[a,b,z] e_z``).
Elements are integer arrays of shape ``(dim,)``; matrices over the ring are
arrays of shape ``(rows, cols, dim)``. Every R-linear system is solved by
lifting it to Z/c.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence, Union

import numpy as np

from . import zmod


class RingError(ValueError):
    pass


@dataclass(frozen=True)
class IntegersMod:
    n: int


@dataclass(frozen=True)
class PolyQuotient:
    """F_p[x]/(f); ``f`` lists coefficients low degree first and is monic."""

    p: int
    f: tuple


@dataclass(frozen=True)
class MonomialQuotient:
    """F_p[x] or F_p[x, y] modulo a monomial ideal given by exponent vectors."""

    p: int
    nvars: int
    ideal: tuple


RingSpec = Union[IntegersMod, PolyQuotient, MonomialQuotient]


def max_ring_card() -> int:
    return int(os.environ.get("CEHOM_MAX_RING_CARD", "256"))


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p**0.5) + 1))


def _standard_monomials(nvars, ideal):
    bounds = []
    for v in range(nvars):
        pure = [g[v] for g in ideal if all(g[w] == 0 for w in range(nvars) if w != v)]
        if not pure:
            raise RingError(f"monomial ideal has no pure power of variable {v}; quotient is infinite")
        bounds.append(min(pure))
    mons = []
    for e in itertools.product(*(range(b) for b in bounds)):
        if not any(all(e[w] >= g[w] for w in range(nvars)) for g in ideal):
            mons.append(e)
    mons.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return mons


class Ring:
    """A finite commutative ring with exact linear algebra."""

    def __init__(self, spec: RingSpec, char: int, table: np.ndarray, labels: list[str], zero_gorenstein: bool):
        self.spec = spec
        self.char = char
        self.table = table % char
        self.dim = table.shape[0]
        self.labels = labels
        self.zero_gorenstein = zero_gorenstein

    def __repr__(self):
        return f"Ring({self.spec})"

    def __eq__(self, other):
        return isinstance(other, Ring) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    @property
    def cardinality(self) -> int:
        return self.char**self.dim

    # --- elements ---------------------------------------------------------

    def elem(self, value) -> np.ndarray:
        """Element from an int (multiple of 1) or a coefficient list."""
        out = np.zeros(self.dim, dtype=np.int64)
        if isinstance(value, np.ndarray) and value.shape == (self.dim,):
            return value.astype(np.int64) % self.char
        if isinstance(value, (int, np.integer)):
            out[0] = int(value)
        else:
            coeffs = list(value)
            if len(coeffs) > self.dim:
                raise RingError(f"element {value!r} has more than {self.dim} coefficients")
            out[: len(coeffs)] = coeffs
        return out % self.char

    def encode(self, a) -> Union[int, list]:
        """Inverse of :meth:`elem` used by serialization."""
        a = np.asarray(a) % self.char
        if isinstance(self.spec, IntegersMod):
            return int(a[0])
        return [int(x) for x in a]

    @property
    def zero(self):
        return np.zeros(self.dim, dtype=np.int64)

    @property
    def one(self):
        return self.elem(1)

    def add(self, a, b):
        return (a + b) % self.char

    def neg(self, a):
        return (-a) % self.char

    def mul(self, a, b):
        return np.einsum("x,y,xyz->z", a, b, self.table) % self.char

    def elements(self) -> Iterator[np.ndarray]:
        if self.cardinality > max_ring_card():
            raise RingError(f"ring of cardinality {self.cardinality} exceeds enumeration cap {max_ring_card()}")
        for t in itertools.product(range(self.char), repeat=self.dim):
            yield np.array(t, dtype=np.int64)

    def mult_matrix(self, a) -> np.ndarray:
        """Z/c matrix of multiplication by ``a`` (column b = a * e_b)."""
        return np.einsum("a,abz->zb", a, self.table) % self.char

    def inverse(self, a):
        x = zmod.solve(self.mult_matrix(a), self.one, self.char)
        return None if x is None else x

    def is_unit(self, a) -> bool:
        return self.inverse(a) is not None

    @cached_property
    def is_local(self) -> bool:
        nonunits = [a for a in self.elements() if not self.is_unit(a)]
        keys = {tuple(a) for a in nonunits}
        return all(tuple(self.add(a, b)) in keys for a in nonunits for b in nonunits)

    def prime_ring(self) -> "Ring":
        return make_ring(IntegersMod(self.char))

    def format(self, a) -> str:
        a = np.asarray(a) % self.char
        if self.dim == 1:
            return str(int(a[0]))
        terms = []
        for c, lab in zip(a, self.labels):
            if c:
                terms.append(lab if (c == 1 and lab != "1") else (f"{c}" if lab == "1" else f"{c}{lab}"))
        return "+".join(terms) if terms else "0"

    # --- matrices ---------------------------------------------------------

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols, self.dim), dtype=np.int64)

    def eye(self, k: int) -> np.ndarray:
        out = self.zeros(k, k)
        for i in range(k):
            out[i, i, 0] = 1
        return out

    def matrix(self, rows: Sequence[Sequence], shape=None) -> np.ndarray:
        """Matrix from nested lists of element literals."""
        rows = [list(r) for r in rows]
        r = len(rows)
        c = len(rows[0]) if rows else (shape[1] if shape else 0)
        if shape is not None and (r, c) != tuple(shape):
            if not (r == 0 and shape[0] == 0):
                raise RingError(f"matrix literal is {r}x{c}, declared {shape[0]}x{shape[1]}")
            r, c = shape
        out = self.zeros(r, c)
        for i, row in enumerate(rows):
            if len(row) != c:
                raise RingError("ragged matrix literal")
            for j, v in enumerate(row):
                out[i, j] = self.elem(v)
        return out

    def scalar(self, a, k: int = 1) -> np.ndarray:
        out = self.zeros(k, k)
        for i in range(k):
            out[i, i] = self.elem(a)
        return out

    def matmul(self, A, B) -> np.ndarray:
        if A.shape[1] != B.shape[0]:
            raise RingError(f"cannot multiply {A.shape[:2]} by {B.shape[:2]}")
        if A.shape[1] == 0:
            return self.zeros(A.shape[0], B.shape[1])
        return np.einsum("ija,jkb,abz->ikz", A, B, self.table) % self.char

    def mm(self, *mats) -> np.ndarray:
        out = mats[0]
        for M in mats[1:]:
            out = self.matmul(out, M)
        return out

    def scale(self, a, A) -> np.ndarray:
        return np.einsum("a,jkb,abz->jkz", self.elem(a), A, self.table) % self.char

    def lift(self, A) -> np.ndarray:
        """The Z/c matrix of A acting on flattened coordinates ``j*dim + b``."""
        r, s, d = A.shape
        L = np.einsum("ija,abz->izjb", A, self.table)
        return L.reshape(r * d, s * d) % self.char

    def kron(self, P, Q) -> np.ndarray:
        a, b, _ = P.shape
        e, f, _ = Q.shape
        K = np.einsum("ijx,kly,xyz->ikjlz", P, Q, self.table) % self.char
        return K.reshape(a * e, b * f, self.dim)

    def is_zero(self, A) -> bool:
        return not (np.asarray(A) % self.char).any()

    def equal(self, A, B) -> bool:
        return A.shape == B.shape and not ((A - B) % self.char).any()

    def hstack(self, *mats) -> np.ndarray:
        return np.concatenate(mats, axis=1) % self.char

    def vstack(self, *mats) -> np.ndarray:
        return np.concatenate(mats, axis=0) % self.char

    def block(self, rows: Sequence[Sequence[np.ndarray]]) -> np.ndarray:
        return self.vstack(*[self.hstack(*r) for r in rows])

    # --- linear systems ---------------------------------------------------

    def solve(self, A, b) -> np.ndarray | None:
        """Lexicographically least x (shape ``(cols, dim)``) with A x = b."""
        if b.ndim == 3:
            b = b[:, 0, :]
        if A.shape[0] != b.shape[0]:
            raise RingError(f"dimension mismatch: A has {A.shape[0]} rows, b has {b.shape[0]}")
        x = zmod.solve(self.lift(A), b.reshape(-1), self.char)
        if x is None:
            return None
        return x.reshape(A.shape[1], self.dim)

    def in_span(self, V, w) -> bool:
        """Whether w (shape ``(rows, dim)``) lies in the R-span of V's columns."""
        w = np.asarray(w).reshape(-1)
        if V.shape[1] == 0:
            return not (w % self.char).any()
        return zmod.in_span(self.lift(V), w, self.char)

    def span_size(self, V) -> int:
        if V.shape[1] == 0:
            return 1
        return zmod.span_size(self.lift(V), self.char)

    def canonical_gens(self, V) -> np.ndarray:
        """Irredundant generators of the R-span of V's columns.

        Depends only on the span: candidates are its Howell basis over Z/c,
        kept greedily when not already generated.
        """
        rows = V.shape[0]
        if V.shape[1] == 0 or rows == 0:
            return self.zeros(rows, 0)
        H, _ = zmod.howell(self.lift(V).T, self.char)
        return self._prune(H.reshape(-1, rows, self.dim), rows)

    def _prune(self, cands, rows) -> np.ndarray:
        kept: list[np.ndarray] = []
        for v in cands:
            cur = np.stack(kept, axis=1) if kept else self.zeros(rows, 0)
            if not self.in_span(cur, v):
                kept.append(v)
        return np.stack(kept, axis=1) if kept else self.zeros(rows, 0)

    def kernel(self, A) -> np.ndarray:
        """Matrix whose columns generate ker A (canonical, irredundant)."""
        s = A.shape[1]
        if s == 0:
            return self.zeros(0, 0)
        K = zmod.kernel(self.lift(A), self.char)
        if K.shape[1] == 0:
            return self.zeros(s, 0)
        return self._prune(K.T.reshape(-1, s, self.dim), s)

    def left_annihilator(self, A) -> np.ndarray:
        """Rows generating {y : y A = 0} (commutative, so ker of A^T)."""
        return self.kernel(A.transpose(1, 0, 2)).transpose(1, 0, 2)


def make_ring(spec: RingSpec) -> Ring:
    """Validate a ring description and build its multiplication table."""
    if isinstance(spec, IntegersMod):
        if spec.n < 2:
            raise RingError("IntegersMod needs n >= 2")
        table = np.ones((1, 1, 1), dtype=np.int64)
        return Ring(spec, spec.n, table, ["1"], True)
    if isinstance(spec, PolyQuotient):
        p, f = spec.p, [int(c) % spec.p for c in spec.f]
        if not _is_prime(p):
            raise RingError(f"{p} is not prime")
        deg = len(f) - 1
        if deg < 1:
            raise RingError("polynomial modulus must have degree >= 1")
        if f[-1] != 1:
            raise RingError("polynomial modulus must be monic")
        # reduce x^k for k < 2*deg - 1
        powers = []
        cur = [1] + [0] * (deg - 1)
        for _ in range(2 * deg - 1):
            powers.append(cur[:])
            top = cur[-1]
            cur = [0] + cur[:-1]
            cur = [(c - top * f[i]) % p for i, c in enumerate(cur)]
        table = np.zeros((deg, deg, deg), dtype=np.int64)
        for a in range(deg):
            for b in range(deg):
                table[a, b] = powers[a + b]
        labels = ["1", "x"] + [f"x^{k}" for k in range(2, deg)]
        return Ring(spec, p, table, labels[:deg], True)
    if isinstance(spec, MonomialQuotient):
        p, nv = spec.p, spec.nvars
        if not _is_prime(p):
            raise RingError(f"{p} is not prime")
        if nv not in (1, 2):
            raise RingError("MonomialQuotient supports 1 or 2 variables")
        ideal = [tuple(int(x) for x in g) for g in spec.ideal]
        if any(len(g) != nv for g in ideal):
            raise RingError("exponent vectors must have one entry per variable")
        mons = _standard_monomials(nv, ideal)
        index = {m: i for i, m in enumerate(mons)}
        d = len(mons)
        table = np.zeros((d, d, d), dtype=np.int64)
        for a, ma in enumerate(mons):
            for b, mb in enumerate(mons):
                s = tuple(x + y for x, y in zip(ma, mb))
                if s in index:
                    table[a, b, index[s]] = 1
        names = "xy"
        labels = []
        for m in mons:
            parts = [names[v] + (f"^{e}" if e > 1 else "") for v, e in enumerate(m) if e]
            labels.append("*".join(parts) if parts else "1")
        # quotient of a PID in one variable exactly when only one variable survives
        used = {v for m in mons for v, e in enumerate(m) if e}
        ring = Ring(spec, p, table, labels, len(used) <= 1)
        if ring.cardinality > max_ring_card():
            raise RingError(f"ring of cardinality {ring.cardinality} exceeds cap {max_ring_card()}")
        return ring
    raise RingError(f"unknown ring spec {spec!r}")


def solve_linear(ring: Ring, A, b):
    return ring.solve(A, b)


def kernel_generators(ring: Ring, A):
    return ring.kernel(A)


# Default corpus: two QF rings of each characteristic flavour plus the
# m^2 = 0, rank-2 local ring, which is not Gorenstein.
Z4 = IntegersMod(4)
F2_X2 = PolyQuotient(2, (0, 0, 1))
F3_X2 = PolyQuotient(3, (0, 0, 1))
F2_XY = MonomialQuotient(2, 2, ((2, 0), (1, 1), (0, 2)))
CORPUS = (Z4, F2_X2, F3_X2, F2_XY)


def corpus_rings() -> list[Ring]:
    return [make_ring(s) for s in CORPUS]
