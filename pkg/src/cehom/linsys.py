"""Linear systems whose unknowns are matrices over a ring.

Equations have the form ``sum_t A_t X_t B_t = C`` and are vectorised with
``vec(A X B) = (B^T kron A) vec(X)`` (column-major vec), then lifted to Z/c.
"""

from __future__ import annotations

import numpy as np

from . import zmod
from .ring import Ring


def _vec(ring: Ring, X):
    r, s, d = X.shape
    return X.transpose(1, 0, 2).reshape(r * s, d)


def _unvec(v, rows, cols, d):
    return v.reshape(cols, rows, d).transpose(1, 0, 2).copy()


class MatrixSystem:
    def __init__(self, ring: Ring):
        self.ring = ring
        self.unknowns: dict[str, tuple[int, int]] = {}
        self._offsets: dict[str, int] = {}
        self._size = 0
        self._eqs: list[tuple[list, np.ndarray]] = []

    def unknown(self, name: str, rows: int, cols: int) -> str:
        self.unknowns[name] = (rows, cols)
        self._offsets[name] = self._size
        self._size += rows * cols
        return name

    def equation(self, terms, rhs=None, shape=None):
        """Add ``sum A X B = rhs``; ``A`` or ``B`` may be None for identity."""
        if rhs is None:
            if shape is None:
                name = terms[0][1]
                A, B = terms[0][0], terms[0][2]
                r = A.shape[0] if A is not None else self.unknowns[name][0]
                c = B.shape[1] if B is not None else self.unknowns[name][1]
                shape = (r, c)
            rhs = self.ring.zeros(*shape)
        self._eqs.append((list(terms), rhs % self.ring.char))

    def _assemble(self):
        ring = self.ring
        blocks, rhss = [], []
        for terms, rhs in self._eqs:
            r, c = rhs.shape[:2]
            row = ring.zeros(r * c, self._size)
            for A, name, B in terms:
                xr, xc = self.unknowns[name]
                A = ring.eye(xr) if A is None else A
                B = ring.eye(xc) if B is None else B
                if A.shape[0] != r or B.shape[1] != c or A.shape[1] != xr or B.shape[0] != xc:
                    raise ValueError(f"term shape mismatch for unknown {name}")
                K = ring.kron(B.transpose(1, 0, 2), A)
                off = self._offsets[name]
                row[:, off : off + xr * xc] = (row[:, off : off + xr * xc] + K) % ring.char
            blocks.append(row)
            rhss.append(_vec(ring, rhs))
        if blocks:
            M = np.concatenate(blocks, axis=0)
            b = np.concatenate(rhss, axis=0)
        else:
            M = ring.zeros(0, self._size)
            b = np.zeros((0, ring.dim), dtype=np.int64)
        return M, b

    def _split(self, x):
        d = self.ring.dim
        out = {}
        for name, (r, c) in self.unknowns.items():
            off = self._offsets[name]
            out[name] = _unvec(x[off * d : (off + r * c) * d], r, c, d)
        return out

    def solve(self):
        """Lexicographically least solution as a dict of matrices, or None."""
        M, b = self._assemble()
        n = self.ring.char
        L = self.ring.lift(M)
        x = zmod.solve(L, b.reshape(-1), n)
        if x is None:
            return None
        return self._split(x)

    def solution_space(self):
        """Z/c generators of the homogeneous solution space (ignores rhs)."""
        M, _ = self._assemble()
        K = zmod.kernel(self.ring.lift(M), self.ring.char)
        return K

    def split(self, x):
        return self._split(np.asarray(x))

    def flat_size(self) -> int:
        return self._size * self.ring.dim

    def offset(self, name: str) -> int:
        return self._offsets[name] * self.ring.dim

    def flatten(self, values: dict) -> np.ndarray:
        """Flat Z/c coordinates of a dict of matrix values (missing = 0)."""
        d = self.ring.dim
        out = np.zeros(self._size * d, dtype=np.int64)
        for name, X in values.items():
            r, c = self.unknowns[name]
            off = self._offsets[name] * d
            out[off : off + r * c * d] = _vec(self.ring, X).reshape(-1)
        return out % self.ring.char
