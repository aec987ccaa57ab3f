import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cehom.ring import CORPUS, IntegersMod, MonomialQuotient, PolyQuotient, RingError, make_ring

SMALL = [IntegersMod(4), IntegersMod(6), PolyQuotient(2, (0, 0, 1)), PolyQuotient(3, (0, 0, 1)),
         PolyQuotient(2, (1, 1, 0, 1)), MonomialQuotient(2, 2, ((2, 0), (1, 1), (0, 2)))]


@pytest.mark.parametrize("spec,card", [
    (IntegersMod(4), 4),
    (PolyQuotient(2, (0, 0, 1)), 4),
    (MonomialQuotient(2, 2, ((2, 0), (1, 1), (0, 2))), 8),
    (MonomialQuotient(3, 1, ((3,),)), 27),
])
def test_cardinality(spec, card):
    R = make_ring(spec)
    assert R.cardinality == card
    assert len(list(R.elements())) == card


@pytest.mark.parametrize("spec", [
    IntegersMod(1),
    PolyQuotient(2, (1, 1, 0)),
    PolyQuotient(4, (0, 1)),
    MonomialQuotient(2, 2, ((1, 1),)),
    MonomialQuotient(2, 2, ((2, 0),)),
])
def test_rejects_bad_specs(spec):
    with pytest.raises(RingError):
        make_ring(spec)


def test_zero_gorenstein_flags():
    assert make_ring(IntegersMod(12)).zero_gorenstein
    assert make_ring(PolyQuotient(3, (0, 0, 1))).zero_gorenstein
    assert not make_ring(MonomialQuotient(2, 2, ((2, 0), (1, 1), (0, 2)))).zero_gorenstein
    # one variable only: a quotient of F_p[x]
    assert make_ring(MonomialQuotient(2, 1, ((3,),))).zero_gorenstein


def test_cardinality_cap(monkeypatch):
    monkeypatch.setenv("CEHOM_MAX_RING_CARD", "16")
    with pytest.raises(RingError):
        make_ring(MonomialQuotient(3, 1, ((3,),)))


def test_solve_examples(z4, f2x):
    x = f2x.elem([0, 1])
    assert z4.solve(z4.matrix([[2]]), z4.matrix([[2]])[:, 0]).tolist() == [[1]]
    assert z4.solve(z4.matrix([[2]]), z4.matrix([[1]])[:, 0]) is None
    sol = f2x.solve(f2x.matrix([[x]]), f2x.matrix([[x]])[:, 0])
    assert sol.tolist() == [[1, 0]]


def test_kernel_examples(z4, f2x):
    K = z4.kernel(z4.matrix([[2]]))
    assert z4.span_size(K) == 2 and z4.in_span(K, z4.matrix([[2]])[:, 0])
    assert z4.kernel(z4.eye(3)).shape[1] == 0
    x = f2x.elem([0, 1])
    K = f2x.kernel(f2x.matrix([[x]]))
    assert f2x.span_size(K) == 2 and f2x.in_span(K, f2x.matrix([[x]])[:, 0])


@pytest.mark.parametrize("spec", SMALL)
def test_ring_axioms_exhaustive(spec):
    R = make_ring(spec)
    els = list(R.elements())
    one = R.one
    for a in els:
        assert np.array_equal(R.mul(a, one), a)
    for a, b in itertools.product(els, repeat=2):
        assert np.array_equal(R.mul(a, b), R.mul(b, a))
    for a, b, c in itertools.product(els, repeat=3):
        assert np.array_equal(R.mul(R.mul(a, b), c), R.mul(a, R.mul(b, c)))
        assert np.array_equal(R.mul(a, R.add(b, c)), R.add(R.mul(a, b), R.mul(a, c)))


def _vectors(R, k):
    els = list(R.elements())
    for t in itertools.product(range(len(els)), repeat=k):
        yield np.stack([els[i] for i in t]) if k else np.zeros((0, R.dim), np.int64)


def _matrix(R, data, rows, cols):
    rng = np.random.default_rng(data)
    return rng.integers(0, R.char, (rows, cols, R.dim)).astype(np.int64)


@given(st.sampled_from(CORPUS), st.integers(0, 10**6), st.integers(1, 2), st.integers(1, 3))
def test_kernel_matches_enumeration(spec, seed, rows, cols):
    R = make_ring(spec)
    A = _matrix(R, seed, rows, cols)
    K = R.kernel(A)
    assert R.is_zero(R.matmul(A, K))
    brute = [v for v in _vectors(R, cols) if R.is_zero(R.matmul(A, v[:, None]))]
    assert R.span_size(K) == len(brute)
    assert all(R.in_span(K, v) for v in brute)


@given(st.sampled_from(CORPUS), st.integers(0, 10**6), st.integers(1, 2), st.integers(1, 2))
def test_solve_matches_enumeration(spec, seed, rows, cols):
    R = make_ring(spec)
    A = _matrix(R, seed, rows, cols)
    b = _matrix(R, seed + 1, rows, 1)[:, 0]
    x = R.solve(A, b)
    solutions = [v for v in _vectors(R, cols) if np.array_equal(R.matmul(A, v[:, None])[:, 0], b)]
    if x is None:
        assert not solutions
    else:
        assert np.array_equal(R.matmul(A, x[:, None])[:, 0], b)
        # the tie-break is the lexicographically least flat representative
        assert min(tuple(v.reshape(-1)) for v in solutions) == tuple(x.reshape(-1))


def test_solve_is_deterministic(z4):
    A = z4.matrix([[2, 2]])
    b = z4.matrix([[2]])[:, 0]
    assert np.array_equal(z4.solve(A, b), z4.solve(A, b))


def test_dimension_mismatch(z4):
    with pytest.raises(ValueError):
        z4.matmul(z4.eye(2), z4.eye(3))
