import pytest
from hypothesis import given, strategies as st

from cehom import gen
from cehom.ce import is_strongly_ce_exact
from cehom.complex import (
    ChainMap,
    MorphismGroup,
    ShortSequence,
    direct_sum,
    disk,
    homology,
    identity_map,
    is_exact,
    periodic,
    sphere,
    zero_chain_map,
    zero_complex,
)
from cehom.homotopy import (
    HomotopyError,
    classify_gp_object,
    homotopy_between,
    is_contractible,
    is_homotopy_ce_projective,
    is_homotopy_equivalence,
    is_null_homotopic,
    is_unit_free,
    is_xi_triangle,
    mapping_cone,
    minimize,
)
from cehom.module import cyclic_module, free_module
from cehom.ring import CORPUS, F2_X2, IntegersMod, make_ring

from conftest import rng_for


def test_disk_contractible_sphere_not(z4):
    R = free_module(z4, 1)
    h = is_contractible(disk(1, R))
    assert h is not None and h.verify()
    assert is_contractible(sphere(0, R)) is None


def test_multiplication_by_two_not_null(z4):
    R = free_module(z4, 1)
    S = sphere(0, R)
    f = ChainMap(S, S, {0: z4.matrix([[2]])})
    assert is_null_homotopic(f) is None


def test_periodic_identity_not_null(dual):
    R, x, F, k = dual
    P = periodic(F, R.matrix([[x]]))
    assert is_contractible(P) is None
    assert is_contractible(periodic(free_module(R, 2), R.matrix([[0, 0], [1, 0]]))) is not None


def test_cone_of_identity_is_contractible(z4):
    rng = rng_for(2)
    for _ in range(4):
        C = gen.random_complex(z4, rng, 0, gen.GenConfig(length=2))
        assert is_contractible(mapping_cone(identity_map(C))) is not None


def test_cone_of_zero_map_from_zero(z4):
    rng = rng_for(3)
    C = gen.random_complex(z4, rng, 0, gen.GenConfig(length=3))
    K = mapping_cone(zero_chain_map(zero_complex(z4), C))
    for n in range(C.lo - 1, C.hi + 2):
        assert homology(K, n)[0].cardinality == homology(C, n)[0].cardinality


def test_cone_of_x(dual):
    R, x, F, k = dual
    S = sphere(0, F)
    K = mapping_cone(ChainMap(S, S, {0: R.matrix([[x]])}))
    assert homology(K, 0)[0].cardinality == 2
    assert homology(K, 1)[0].cardinality == 2


def test_adding_a_disk_is_an_equivalence(z4):
    R = free_module(z4, 1)
    S = sphere(0, R)
    T = direct_sum(S, disk(1, R))
    inc = ChainMap(S, T, {0: z4.matrix([[1], [0]])})
    eq = is_homotopy_equivalence(inc)
    assert eq is not None and eq.verify()
    proj = ChainMap(T, S, {0: z4.matrix([[1, 0]])})
    assert is_homotopy_equivalence(proj) is not None


def test_non_equivalence(z4):
    R = free_module(z4, 1)
    S = sphere(0, R)
    assert is_homotopy_equivalence(ChainMap(S, S, {0: z4.matrix([[2]])})) is None
    assert is_homotopy_equivalence(zero_chain_map(S, disk(1, R))) is None


def test_homotopy_classes_agree_with_solver(z4, f2x):
    rng = rng_for(8)
    for ring in (z4, f2x):
        for _ in range(4):
            cfg = gen.GenConfig(length=2)
            X = gen.random_complex(ring, rng, 0, cfg)
            Y = gen.random_complex(ring, rng, 0, cfg)
            G = MorphismGroup(X, Y)
            classes = G.homotopy_classes()
            for _ in range(3):
                f, g = gen.random_chain_map(X, Y, rng), gen.random_chain_map(X, Y, rng)
                same = classes.is_zero((G.flat(f) - G.flat(g)) % ring.char)
                assert same == (homotopy_between(f, g) is not None)


# --- minimization ---------------------------------------------------------------


def test_minimize_glued_disks(f2x):
    rng = rng_for(11)
    for nd in (1, 2, 3):
        X = gen.glued_disks(f2x, rng, nd)
        m = minimize(X)
        assert is_unit_free(m.complex)
        assert m.equivalence.verify()
        assert m.steps >= nd
        again = minimize(m.complex)
        assert again.steps == 0 and again.complex.equals(m.complex)


def test_minimize_periodic(f2x):
    x = f2x.elem([0, 1])
    F = free_module(f2x, 1)
    P = periodic(F, f2x.matrix([[x]]))
    d = f2x.zeros(3, 3)
    d[0, 0] = x
    d[2, 1] = f2x.one
    Q = periodic(free_module(f2x, 3), d)
    m = minimize(Q)
    assert m.complex.module(0).gens == 1 and m.complex.equals(P)
    assert m.equivalence.verify()


def test_minimize_needs_free_terms(dual):
    R, x, F, k = dual
    with pytest.raises(HomotopyError):
        minimize(sphere(0, k))
    with pytest.raises(HomotopyError, match="local"):
        minimize(sphere(0, free_module(_z6(), 1)))


def _z6():
    return make_ring(IntegersMod(6))


@given(seed=st.integers(0, 10_000))
def test_minimize_fixed_point(seed):
    ring = make_ring(F2_X2)
    X = gen.glued_disks(ring, rng_for(seed), 1 + seed % 3)
    m = minimize(X)
    assert is_unit_free(m.complex) and m.equivalence.verify()
    assert minimize(m.complex).steps == 0


# --- triangles -----------------------------------------------------------------------


def test_split_sequence_is_a_triangle(z4):
    R = free_module(z4, 1)
    s = gen.split_sequence(sphere(0, R), disk(1, R))
    assert is_xi_triangle(s).member


def test_sphere_disk_sphere_not_a_triangle(z4):
    R = free_module(z4, 1)
    A, B, C = sphere(0, R), disk(1, R), sphere(1, R)
    s = ShortSequence(ChainMap(A, B, {0: z4.eye(1)}), ChainMap(B, C, {1: z4.eye(1)}))
    rep = is_xi_triangle(s)
    assert rep.degreewise_split and not rep.member


def test_nonsplit_not_a_triangle(z4):
    k = cyclic_module(z4, 2)
    R = free_module(z4, 1)
    A, B, C = sphere(0, k), sphere(0, R), sphere(0, k)
    s = ShortSequence(ChainMap(A, B, {0: z4.matrix([[2]])}), ChainMap(B, C, {0: z4.eye(1)}))
    rep = is_xi_triangle(s)
    assert not rep.degreewise_split and not rep.member


def test_triangles_match_strong_exactness():
    rng = rng_for(12)
    for spec in CORPUS:
        ring = make_ring(spec)
        for _ in range(8):
            s = gen.random_short_sequence(ring, rng)
            assert is_xi_triangle(s).member == bool(is_strongly_ce_exact(s))


# --- homotopy C-E projectivity ------------------------------------------------------


def test_homotopy_ce_projective_examples(dual):
    R, x, F, k = dual
    yes = is_homotopy_ce_projective(direct_sum(disk(1, F), sphere(0, F)))
    assert yes.verdict is True and yes.coherent
    no = is_homotopy_ce_projective(periodic(F, R.matrix([[x]])))
    assert no.verdict is False and no.coherent
    assert is_homotopy_ce_projective(sphere(0, k)).verdict is False


def test_homotopy_ce_projective_non_local(z4):
    ring = _z6()
    F = free_module(ring, 1)
    rep = is_homotopy_ce_projective(direct_sum(disk(1, F), sphere(0, F)))
    assert rep.minimize_route is None and rep.precover_route is True


def test_routes_cohere(f2x):
    rng = rng_for(13)
    for _ in range(10):
        X = gen.random_complex(f2x, rng, 0, gen.GenConfig(length=3), free=True)
        rep = is_homotopy_ce_projective(X)
        assert rep.minimize_route is not None and rep.coherent


# --- GP objects ----------------------------------------------------------------------


def test_gp_object_examples(dual):
    R, x, F, k = dual
    P = periodic(F, R.matrix([[x]]))
    res = classify_gp_object(P)
    assert res.route == "minimize" and res.classification.overall == "Yes"
    res = classify_gp_object(sphere(0, k))
    assert res.route == "radical" and res.classification.overall == "No"
    d = R.zeros(3, 3)
    d[0, 0] = x
    d[2, 1] = R.one
    res = classify_gp_object(periodic(free_module(R, 3), d))
    assert res.classification.overall == "Yes"
    assert res.reduced.module(0).gens == 1
    assert res.equivalence.verify()


def test_two_disks_minimize_to_zero(f2x):
    F = free_module(f2x, 1)
    m = minimize(direct_sum(disk(1, F), disk(2, F)))
    assert m.steps == 2 and m.complex.is_zero()


def test_disk_plus_sphere_reduces_to_sphere(f2x):
    F = free_module(f2x, 1)
    rep = is_homotopy_ce_projective(direct_sum(disk(1, F), sphere(0, F)))
    assert rep.verdict is True
    assert [rep.minimized.module(n).gens for n in rep.minimized.degrees()] == [1, 0]
