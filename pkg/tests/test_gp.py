import pytest
from hypothesis import given, strategies as st

from cehom import gen
from cehom.complex import (
    ChainMap,
    bounded,
    direct_sum,
    disk,
    homology,
    is_exact,
    periodic,
    sphere,
)
from cehom.gp import (
    GpError,
    Resolution,
    build_resolution,
    classify_strongly_ce_gp,
    corollary56_evaluate,
    generators,
    hom_sequence_exact,
    is_sharp_projective,
    theorem511_evaluate,
    verify_resolution,
)
from cehom.homotopy import is_contractible
from cehom.module import cyclic_module, free_module
from cehom.ring import CORPUS, F2_X2, Z4, make_ring
from cehom.suites import prop38_case

from conftest import rng_for


@pytest.fixture
def example(dual):
    R, x, F, k = dual
    return periodic(F, R.matrix([[x]]))


def test_classify_periodic_example(example):
    cls = classify_strongly_ce_gp(example)
    assert cls.sets == {2: "Yes", 3: "Yes", 4: "Yes"}
    assert cls.overall == "Yes" and cls.consistent
    assert cls.table[0]["Z"] == "Yes"


def test_classify_examples(dual):
    R, x, F, k = dual
    assert classify_strongly_ce_gp(disk(1, F)).overall == "Yes"
    cls = classify_strongly_ce_gp(sphere(0, k))
    assert cls.overall == "No"
    assert cls.reasons == ["term in degree 0 not projective"]


def test_sharp_projective(dual, example):
    R, x, F, k = dual
    assert is_sharp_projective(example)
    assert not is_sharp_projective(disk(1, k))


@given(seed=st.integers(0, 10_000), which=st.integers(0, len(CORPUS) - 1))
def test_condition_sets_agree(seed, which):
    ok, doc = prop38_case(make_ring(CORPUS[which]), rng_for(seed))
    assert ok, doc


def test_sums_classify_together(dual):
    R, x, F, k = dual
    P = periodic(F, R.matrix([[x]]))
    yes = classify_strongly_ce_gp(direct_sum(P, P)).overall
    assert yes == "Yes"
    mixed = direct_sum(disk(1, F), disk(1, k))
    assert classify_strongly_ce_gp(mixed).overall == "No"


def test_exact_projective_complexes_classify_yes():
    rng = rng_for(31)
    for spec in (Z4, F2_X2):
        ring = make_ring(spec)
        for _ in range(8):
            G = gen.random_exact_projective(ring, rng, 0, 3, 1)
            assert is_exact(G) and is_sharp_projective(G)
            assert classify_strongly_ce_gp(G).overall == "Yes"


# --- resolutions -------------------------------------------------------------------


def test_resolution_of_periodic_example(example):
    res = build_resolution(example, 2)
    assert res.depth == 2
    rep = verify_resolution(res)
    assert rep.ok, rep.failures


def test_resolution_of_a_disk(z4):
    F = free_module(z4, 1)
    res = build_resolution(disk(1, F), 1)
    cover, embed = res.left[0], res.right[0]
    assert (cover.lo, cover.hi) == (-1, 1)
    assert (embed.lo, embed.hi) == (0, 2)
    assert [cover.module(n).gens for n in cover.degrees()] == [1, 2, 1]
    assert is_contractible(cover) is not None and is_contractible(embed) is not None
    assert verify_resolution(res).ok


def test_resolution_of_zero_complex(z4):
    G = bounded(z4, 0, [free_module(z4, 0)])
    assert verify_resolution(build_resolution(G, 2)).ok


def test_resolution_errors(dual, example):
    R, x, F, k = dual
    with pytest.raises(GpError, match="depth"):
        build_resolution(example, 0)
    with pytest.raises(GpError, match="not exact"):
        build_resolution(sphere(0, F), 1)
    with pytest.raises(GpError, match="not projective"):
        build_resolution(disk(1, k), 1)


def test_resolution_needs_zero_gorenstein_ring(f2xy):
    F = free_module(f2xy, 1)
    with pytest.raises(GpError, match="zero-Gorenstein"):
        build_resolution(disk(1, F), 1)


def test_mutated_junction_fails(z4):
    F = free_module(z4, 1)
    res = build_resolution(disk(1, F), 2)
    m = res.right_maps[0]
    twice = ChainMap(m.source, m.target, {n: 2 * m.comp(n) for n in m.degrees()})
    res.right_maps[0] = twice
    rep = verify_resolution(res)
    assert not rep.ok and not rep.strongly_exact
    assert any("junction" in f for f in rep.failures)


def test_empty_resolution_is_vacuous(example):
    assert verify_resolution(Resolution(example, [], [], None, None, [], [])).ok


def test_random_resolutions_verify():
    rng = rng_for(41)
    for spec in (Z4, F2_X2):
        ring = make_ring(spec)
        for _ in range(3):
            G = gen.random_exact_projective(ring, rng, 0, 3, 1)
            assert verify_resolution(build_resolution(G, 2)).ok


# --- the four equivalent conditions -----------------------------------------------


def test_conditions_on_periodic_example(example):
    rep = theorem511_evaluate(example)
    assert rep.conditions == {1: "Yes", 2: "Yes", 3: "Yes", 4: "Yes"}
    assert rep.agree and rep.detecting == []


def test_conditions_on_a_sphere(dual):
    R, x, F, k = dual
    rep = theorem511_evaluate(sphere(0, F))
    assert set(rep.conditions.values()) == {"No"}
    assert rep.detecting and all(kind == "sphere" for kind, _ in rep.detecting)


def test_disks_never_detect_non_exactness(dual):
    # Hom(D^i R, X) = Hom(R, X_i) shifted, which is always exact
    R, x, F, k = dual
    rng = rng_for(51)
    for _ in range(6):
        X = gen.random_complex(R, rng, 0, gen.GenConfig(length=3), free=True)
        rep = theorem511_evaluate(X)
        assert all(kind == "sphere" for kind, _ in rep.detecting)
        if not is_exact(X):
            assert rep.detecting


def test_generators_listing(z4):
    gens = generators(z4, [0, 1])
    assert [(k, i) for k, i, _ in gens] == [("disk", 0), ("sphere", 0), ("disk", 1), ("sphere", 1)]


def test_resolution_stays_exact_under_hom_into_generators(dual, example):
    res = build_resolution(example, 2)
    assert hom_sequence_exact(res.long_sequence(), "sphere", 0)
    assert hom_sequence_exact(res.long_sequence(), "disk", 0)


# --- bounded on the right ---------------------------------------------------------


def test_bounded_right_examples(z4):
    F = free_module(z4, 1)
    k = cyclic_module(z4, 2)
    rep = corollary56_evaluate(disk(1, F))
    assert rep.classification == "Yes" and rep.terms_projective and rep.agree
    rep = corollary56_evaluate(bounded(z4, 0, [k, k], {1: z4.eye(1)}))
    assert rep.classification == "No" and not rep.terms_projective and rep.agree
    padded = bounded(z4, -1, [free_module(z4, 0), k, k], {1: z4.eye(1)})
    assert corollary56_evaluate(padded).agree


def test_bounded_right_rejects_non_exact(z4):
    with pytest.raises(GpError):
        corollary56_evaluate(sphere(0, free_module(z4, 1)))


def test_bounded_right_random(z4):
    rng = rng_for(61)
    for _ in range(6):
        G = gen.random_bounded_right_exact(z4, rng)
        assert is_exact(G)
        assert corollary56_evaluate(G).agree


def test_non_exact_complex_is_detected(dual):
    R, x, F, k = dual
    X = bounded(R, 0, [F, F], {1: R.matrix([[x]])})
    assert homology(X, 0)[0].cardinality == 2
    rep = theorem511_evaluate(X)
    assert rep.detecting and not rep.hom_from_generators
    assert set(rep.conditions.values()) == {"No"}
