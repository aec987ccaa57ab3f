import pytest
from hypothesis import given, strategies as st

from cehom import gen
from cehom.cli import example_text
from cehom.complex import is_exact
from cehom.docfmt import (
    DocumentError,
    complex_document,
    documents_equal,
    parse,
    resolution_document,
    sequence_document,
    serialize,
)
from cehom.gp import build_resolution, verify_resolution
from cehom.ring import CORPUS, Z4, make_ring
from cehom.suites import _run

from conftest import rng_for


def test_shipped_example_parses():
    doc = parse(example_text())
    P = doc.complex("P")
    assert P.periodic and is_exact(P)
    assert doc.ring.cardinality == 4


def test_ring_only_document():
    doc = parse("ring IntegersMod 4\n")
    assert doc.ring.cardinality == 4 and not doc.complexes


def test_monomial_ring_and_module():
    doc = parse("ring MonomialQuotient 2 2 [[2,0],[1,1],[0,2]]\nmodule k gens 1 relations 1x2 [[[0,1,0],[0,0,1]]]\n")
    assert doc.modules["k"].cardinality == 2


def test_dd_error_names_complex_and_degree():
    text = "ring IntegersMod 4\ncomplex C bounded 0 2\n  term 0 free 1\n  term 1 free 1\n  term 2 free 1\n  diff 1 1x1 [[1]]\n  diff 2 1x1 [[1]]\nend\n"
    with pytest.raises(DocumentError, match=r"complex C: d o d != 0 in degree 2"):
        parse(text)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "ring IntegersMod 1\n",
        "ring Nonsense 3\n",
        "ring IntegersMod 4\nmodule M free\n",
        "ring IntegersMod 4\ncomplex C periodic\n  term free 1\n",
        "ring IntegersMod 4\nmodule M free 1\nmodule M free 2\n",
        "ring IntegersMod 4\nsequence s f g\n",
    ],
)
def test_malformed_documents(text):
    with pytest.raises(DocumentError):
        parse(text)


def test_error_carries_line_number():
    with pytest.raises(DocumentError) as e:
        parse("ring IntegersMod 4\n# note\nbogus line\n")
    assert e.value.line == 3


@given(seed=st.integers(0, 10_000), which=st.integers(0, len(CORPUS) - 1))
def test_complex_round_trip(seed, which):
    ring = make_ring(CORPUS[which])
    rng = rng_for(seed)
    C = gen.random_periodic(ring, rng) if seed % 3 == 0 else gen.random_complex(ring, rng, -1, gen.GenConfig(length=3))
    doc = complex_document(C)
    assert documents_equal(parse(serialize(doc)), doc)


def test_sequence_round_trip(z4):
    s = gen.random_short_sequence(z4, rng_for(5))
    doc = sequence_document([s.f, s.g])
    back = parse(serialize(doc))
    assert documents_equal(back, doc)
    assert back.short_sequence().A.equals(s.A)


def test_resolution_round_trip(dual):
    R, x, F, k = dual
    G = parse(example_text()).complex()
    doc = resolution_document(build_resolution(G, 2))
    back = parse(serialize(doc))
    assert documents_equal(back, doc)
    assert verify_resolution(back.resolutions["res"]).ok


def test_counterexamples_replay():
    # a deliberately false claim: every random complex is exact
    ring = make_ring(Z4)

    def claim(r, rng):
        X = gen.random_complex(r, rng, 0, gen.GenConfig(length=2))
        return is_exact(X), complex_document(X)

    res = _run("false-claim", 3, 20, [ring], claim)
    assert res.failed > 0 and res.counterexample is not None
    X = parse(res.counterexample).complex("X")
    assert not is_exact(X)
