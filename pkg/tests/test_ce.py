import pytest
from hypothesis import given, strategies as st

from cehom import gen
from cehom.ce import (
    CONDITIONS,
    FAMILIES,
    CeError,
    ce_decompose,
    condition_holds,
    is_ce_exact,
    is_ce_projective,
    is_degreewise_exact,
    is_degreewise_split,
    is_strongly_ce_exact,
    lemma34_check,
)
from cehom.complex import (
    ChainMap,
    ComplexError,
    ShortSequence,
    bounded,
    change_basis,
    direct_sum,
    disk,
    is_exact,
    periodic,
    sphere,
    zero_chain_map,
    zero_complex,
)
from cehom.module import cyclic_module, free_module
from cehom.ring import CORPUS, Z4, make_ring
from cehom.suites import PAIRS, lemma34_case

from conftest import rng_for


def _sphere_disk_sphere(ring):
    """S^0(R) -> D^1(R) -> S^1(R)."""
    R = free_module(ring, 1)
    A, B, C = sphere(0, R), disk(1, R), sphere(1, R)
    one = ring.eye(1)
    return ShortSequence(ChainMap(A, B, {0: one}), ChainMap(B, C, {1: one}))


def _two_in_four(z4):
    k = cyclic_module(z4, 2)
    R = free_module(z4, 1)
    A, B, C = sphere(0, k), sphere(0, R), sphere(0, k)
    return ShortSequence(ChainMap(A, B, {0: z4.matrix([[2]])}), ChainMap(B, C, {0: z4.eye(1)}))


def test_sphere_disk_sphere_is_split_but_not_ce_exact(z4):
    s = _sphere_disk_sphere(z4)
    assert is_degreewise_split(s)
    rep = is_ce_exact(s)
    assert rep.families["terms"]
    assert rep.failing() == ["Z", "B", "C/Z", "C/B", "H"]
    assert not is_strongly_ce_exact(s)


def test_reversed_order_is_not_a_sequence(z4):
    # D^1 -> S^0 by the identity in degree 0 is not a chain map
    R = free_module(z4, 1)
    with pytest.raises(ComplexError):
        ChainMap(disk(1, R), sphere(0, R), {0: z4.eye(1)})


def test_nonsplit_spheres_are_ce_exact(z4):
    s = _two_in_four(z4)
    assert is_degreewise_exact(s)
    assert not is_degreewise_split(s)
    assert is_ce_exact(s).exact
    rep = is_strongly_ce_exact(s)
    assert not rep and rep.ce.exact and not rep.split


def test_split_sequences_are_strongly_exact():
    rng = rng_for(4)
    for spec in CORPUS:
        ring = make_ring(spec)
        A = gen.random_complex(ring, rng, 0, gen.GenConfig(length=2))
        C = gen.random_complex(ring, rng, 0, gen.GenConfig(length=2))
        s = gen.split_sequence(A, C)
        rep = is_strongly_ce_exact(s)
        assert rep.strongly_exact, rep.ce.failing()


def test_zero_sequence(z4):
    z = zero_complex(z4)
    s = ShortSequence(zero_chain_map(z, z), zero_chain_map(z, z))
    assert is_ce_exact(s).exact
    assert is_strongly_ce_exact(s)


def test_two_conditions_force_the_rest(z4):
    s = _two_in_four(z4)
    rep = is_ce_exact(s)
    assert lemma34_check(s, (1, 5), rep)
    assert lemma34_check(s, (2, 4), rep)


def test_unmet_pair_raises(z4):
    s = _sphere_disk_sphere(z4)
    with pytest.raises(CeError):
        lemma34_check(s, (1, 2))
    with pytest.raises(CeError):
        lemma34_check(s, (2, 2))


def test_condition_numbering():
    assert sorted(CONDITIONS) == [1, 2, 3, 4, 5]
    assert len(PAIRS) == 10
    assert set(sum(CONDITIONS.values(), ())) == set(FAMILIES)


@given(seed=st.integers(0, 10_000), which=st.integers(0, len(CORPUS) - 1))
def test_two_of_five_property(seed, which):
    ok, doc = lemma34_case(make_ring(CORPUS[which]), rng_for(seed))
    assert ok, doc


def test_exactness_dichotomy():
    # degreewise exact sequences either satisfy every family or only the terms
    rng = rng_for(17)
    for spec in CORPUS:
        ring = make_ring(spec)
        for _ in range(15):
            s = gen.random_short_sequence(ring, rng)
            rep = is_ce_exact(s)
            assert rep.families["terms"]
            assert rep.exact or not any(condition_holds(rep, k) for k in (2, 3, 4, 5))


def test_strong_implies_ce_and_split():
    rng = rng_for(5)
    for spec in CORPUS:
        ring = make_ring(spec)
        for _ in range(10):
            s = gen.random_short_sequence(ring, rng)
            rep = is_strongly_ce_exact(s)
            if rep:
                assert rep.ce.exact and is_degreewise_split(s)


def test_exact_subcomplex_gives_ce_exact_extension():
    # A twisted extension with an exact left end is C-E exact.
    rng = rng_for(6)
    for spec in CORPUS:
        ring = make_ring(spec)
        R = free_module(ring, 1)
        for _ in range(5):
            A = direct_sum(disk(1, R), disk(2, R))
            C = gen.random_complex(ring, rng, 0, gen.GenConfig(length=2))
            s = gen.twisted_sequence(A, C, rng)
            assert is_exact(A, degrees=range(-1, 4))
            assert is_strongly_ce_exact(s)


# --- C-E projective complexes -----------------------------------------------------


def test_ce_projective_examples(dual):
    R, x, F, k = dual
    assert is_ce_projective(disk(1, F))
    assert is_ce_projective(sphere(0, F))
    P = periodic(F, R.matrix([[x]]))
    rep = is_ce_projective(P)
    assert not rep
    assert "Z not projective" in rep.reasons()
    assert not is_ce_projective(sphere(0, k))


def test_decompose_disk_plus_sphere(z4):
    R = free_module(z4, 1)
    X = direct_sum(disk(1, R), sphere(0, R))
    # scramble the basis in degree 0
    Y = change_basis(X, {0: z4.matrix([[1, 1], [0, 1]])})
    dec = ce_decompose(Y)
    assert dec.verify()
    kinds = sorted((kind, n, M.cardinality) for kind, n, M in dec.pieces if not M.is_zero())
    assert kinds == [("disk", 1, 4), ("sphere", 0, 4)]


def test_decompose_zero_differential(z4):
    R = free_module(z4, 2)
    X = bounded(z4, 0, [R, R])
    dec = ce_decompose(X)
    assert dec.verify()
    assert all(M.is_zero() for kind, n, M in dec.pieces if kind == "disk")


def test_decompose_periodic_disk(f2x):
    R = free_module(f2x, 2)
    d = f2x.zeros(2, 2)
    d[1, 0] = f2x.one
    dec = ce_decompose(periodic(R, d))
    assert dec.verify()


def test_decompose_rejects_non_projective(dual):
    R, x, F, k = dual
    with pytest.raises(CeError, match="not C-E projective"):
        ce_decompose(periodic(F, R.matrix([[x]])))
