"""Linear algebra over Z/n via the Howell normal form.

Everything above this layer (rings, modules, complexes) reduces its linear
systems to matrices over Z/c, where c is the characteristic of the
coefficient ring. The Howell form is canonical for a row span, which gives
exact membership tests, kernels that generate, and a lexicographically least
coset representative for free.
"""

from math import gcd

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def _xgcd(a, b):
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b != 0:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return a, s0, t0


@njit(cache=True)
def _gcd(a, b):
    while b != 0:
        a, b = b, a % b
    return a


@njit(cache=True)
def _unit_to_gcd(a, n):
    # unit u with u*a = gcd(a, n) mod n
    g = _gcd(a, n)
    nn = n // g
    if nn == 1:
        return 1
    aa = (a // g) % nn
    _, s, _ = _xgcd(aa, nn)
    u0 = s % nn
    u = u0
    while _gcd(u, n) != 1:
        u += nn
    return u % n


@njit(cache=True)
def _howell(A, n):
    m, k = A.shape
    W = np.zeros((m + k + 1, k), dtype=np.int64)
    for i in range(m):
        for j in range(k):
            W[i, j] = A[i, j] % n
    nrows = m
    top = 0
    pivots = np.zeros(k, dtype=np.int64)
    npiv = 0
    for col in range(k):
        p = -1
        for r in range(top, nrows):
            if W[r, col] != 0:
                p = r
                break
        if p < 0:
            continue
        if p != top:
            for j in range(k):
                tmp = W[p, j]
                W[p, j] = W[top, j]
                W[top, j] = tmp
        for r in range(top + 1, nrows):
            b = W[r, col]
            if b == 0:
                continue
            a = W[top, col]
            g, s, t = _xgcd(a, b)
            ag = a // g
            bg = b // g
            for j in range(col, k):
                x = W[top, j]
                y = W[r, j]
                W[top, j] = (s * x + t * y) % n
                W[r, j] = (ag * y - bg * x) % n
        a = W[top, col]
        u = _unit_to_gcd(a, n)
        for j in range(col, k):
            W[top, j] = (u * W[top, j]) % n
        g = W[top, col]
        # annihilator row: (n/g) * pivot row vanishes at col
        f = n // g
        nz = False
        for j in range(col + 1, k):
            v = (f * W[top, j]) % n
            W[nrows, j] = v
            if v != 0:
                nz = True
        if nz:
            nrows += 1
        else:
            for j in range(k):
                W[nrows, j] = 0
        for r in range(top):
            q = W[r, col] // g
            if q != 0:
                for j in range(col, k):
                    W[r, j] = (W[r, j] - q * W[top, j]) % n
        pivots[npiv] = col
        npiv += 1
        top += 1
    return W[:top].copy(), pivots[:npiv].copy()


def howell(A, n):
    """Howell form of the row span of ``A`` over Z/n.

    Returns ``(H, pivots)``: the nonzero rows in echelon order and the pivot
    column of each row. Each pivot entry divides ``n``; entries above a pivot
    are reduced below it.
    """
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("expected a 2-d array")
    if A.shape[0] == 0 or A.shape[1] == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int64), np.zeros(0, dtype=np.int64)
    return _howell(np.ascontiguousarray(A), int(n))


@njit(cache=True)
def _reduce(v, H, pivots, n, upto):
    v = v % n
    for i in range(H.shape[0]):
        c = pivots[i]
        if c >= upto:
            break
        g = H[i, c]
        q = v[c] // g
        if q != 0:
            for j in range(c, v.shape[0]):
                v[j] = (v[j] - q * H[i, j]) % n
    return v


def reduce(v, H, pivots, n, upto=None):
    """Reduce ``v`` against Howell rows whose pivot lies before ``upto``."""
    v = np.array(v, dtype=np.int64)
    if upto is None:
        upto = v.shape[0]
    if H.shape[0] == 0:
        return v % n
    return _reduce(v, H, pivots, int(n), int(upto))


def in_span(G, v, n):
    """Whether ``v`` lies in the column span of ``G`` over Z/n."""
    G = np.asarray(G, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64) % n
    if not v.any():
        return True
    if G.shape[1] == 0:
        return False
    H, piv = howell(G.T, n)
    return not reduce(v, H, piv, n).any()


def span_size(G, n):
    """Number of elements in the column span of ``G`` over Z/n (exact int)."""
    G = np.asarray(G, dtype=np.int64)
    if G.size == 0:
        return 1
    H, piv = howell(G.T, n)
    size = 1
    for i, c in enumerate(piv):
        size *= n // int(H[i, c])
    return size


def _augmented(A, n):
    r, s = A.shape
    W = np.zeros((s, r + s), dtype=np.int64)
    W[:, :r] = A.T % n
    W[:, r:] = np.eye(s, dtype=np.int64)
    return howell(W, n)


def solve(A, b, n):
    """Lexicographically least ``x`` with ``A @ x == b`` mod n, or None."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64) % n
    r, s = A.shape
    if b.shape != (r,):
        raise ValueError(f"rhs has shape {b.shape}, expected ({r},)")
    if s == 0:
        return np.zeros(0, dtype=np.int64) if not b.any() else None
    H, piv = _augmented(A, n)
    v = np.concatenate([b, np.zeros(s, dtype=np.int64)])
    v = reduce(v, H, piv, n, upto=r)
    if v[:r].any():
        return None
    x = (-v[r:]) % n
    kmask = piv >= r
    if kmask.any():
        x = reduce(x, H[kmask][:, r:], piv[kmask] - r, n)
    assert not ((A @ x - b) % n).any()
    return x


def kernel(A, n):
    """Columns generating the kernel of ``A`` over Z/n, in Howell order."""
    A = np.asarray(A, dtype=np.int64)
    r, s = A.shape
    if s == 0:
        return np.zeros((0, 0), dtype=np.int64)
    H, piv = _augmented(A, n)
    rows = H[piv >= r][:, r:]
    return np.ascontiguousarray(rows.T)


__all__ = ["howell", "reduce", "in_span", "span_size", "solve", "kernel", "gcd"]
