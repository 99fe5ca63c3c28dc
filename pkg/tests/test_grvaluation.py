import numpy as np
import pytest

from algebra_core import Ideal, equal
from corpus import TestCorpus, generate_corpus, monomial_corpus, random_polynomial, random_valuations
from fractional import FractionalIdeal, KElement, parse_k_element
from grvaluation import (
    NOT_GRADED,
    GrValuation,
    b_closure_monomial,
    extend_FV,
    fv_membership,
    gauss_valuation,
    gr_star_valuation_check,
    in_ring_verdict,
    wedge_Y_closure,
)
from semistar import Divisorial, EabHApprox, Identity, NewtonClosure, StarContext, eab_h_approx
from utils import InputError


def frac(ring, *texts):
    return FractionalIdeal.from_generators([parse_k_element(ring, t) for t in texts])


@pytest.fixture
def V12(R1):
    return GrValuation.of([[1, 2]], R1, name="V12")


@pytest.fixture
def V11(R1):
    return GrValuation.of([[1, 1]], R1, name="V11")


def test_gauss_values(R1, V12):
    assert gauss_valuation(R1.poly("x + y"), V12) == (1,)
    assert gauss_valuation(parse_k_element(R1, "x/y"), V12, "in-ring").is_false
    assert gauss_valuation(parse_k_element(R1, "(x + y)/x"), V12, "in-ring").is_true


def test_not_graded_elements(Q1):
    V = GrValuation.of([[1]], Q1)
    result = gauss_valuation(parse_k_element(Q1, "x/(x - 1)"), V, "in-ring")
    assert result is NOT_GRADED
    assert in_ring_verdict(result).is_false


def test_weight_columns_must_be_nonnegative(R1):
    with pytest.raises(InputError):
        GrValuation.of([[1, -1]], R1)


def test_unknown_query(R1, V12):
    with pytest.raises(InputError):
        gauss_valuation(R1.poly("x"), V12, "residue")


def test_gauss_axioms_on_corpus(R1):
    rng = np.random.Generator(np.random.PCG64(13))
    for V in random_valuations(R1, seed=13, count=5):
        for _ in range(8):
            f, g = random_polynomial(rng, R1, 3), random_polynomial(rng, R1, 3)
            assert V.value(f * g) == tuple(a + b for a, b in zip(V.value(f), V.value(g)))
            if f + g:
                assert V.value(f + g) >= min(V.value(f), V.value(g))


def test_dichotomy_on_homogeneous_fractions(R1):
    rng = np.random.Generator(np.random.PCG64(29))
    for V in random_valuations(R1, seed=29, count=5):
        for _ in range(10):
            a = R1.monomial([int(rng.integers(0, 3)), int(rng.integers(0, 3))])
            b = R1.monomial([int(rng.integers(0, 3)), int(rng.integers(0, 3))])
            z = KElement(a, b)
            assert V.in_ring(z).is_true or V.in_ring(z.inverse()).is_true


def test_extend_FV_ties_pick_first(R1, V11):
    ext = extend_FV(frac(R1, "x^2", "y^2"), V11)
    assert ext.generator.format() == "x^2"
    assert ext.certificates[1][1] == (0,)


def test_extend_FV_examples(R1, V12):
    assert extend_FV(frac(R1, "x"), V12).generator.format() == "x"
    ext = extend_FV(frac(R1, "x", "y"), V12)
    assert ext.generator.format() == "x"
    assert ext.member(parse_k_element(R1, "y")).is_true


def test_extend_FV_needs_homogeneous_generators(R1, V12):
    with pytest.raises(InputError):
        extend_FV(frac(R1, "x + y^2"), V12)


def test_extend_FV_generator_order_does_not_matter(R1, V12):
    a, b = frac(R1, "x^2", "x*y", "y^3"), frac(R1, "y^3", "x*y", "x^2")
    for text in ("x", "x^2", "y^2", "x*y/y", "x^3/y"):
        z = parse_k_element(R1, text)
        assert fv_membership(a, z, V12).value == fv_membership(b, z, V12).value


def test_fv_membership_principal_inhomogeneous(R1, V11):
    F = frac(R1, "x + y^2")
    assert fv_membership(F, parse_k_element(R1, "x^2 + x*y^2"), V11).is_true


def test_b_closure_examples(R1):
    assert equal(b_closure_monomial(R1.ideal("x^2", "y^2")), R1.ideal("x^2", "x*y", "y^2"))
    assert equal(b_closure_monomial(R1.ideal("x^3")), R1.ideal("x^3"))
    assert equal(b_closure_monomial(R1.ideal("x^3", "y^2")), R1.ideal("x^3", "x^2*y", "y^2"))


def test_b_closure_rejects_non_monomials(R1):
    with pytest.raises(InputError):
        b_closure_monomial(R1.ideal("x + y"))


def test_b_closure_is_a_closure_operator(R1):
    corpus = monomial_corpus(R1, seed=31, count=50, max_degree=4)
    ideals = [F.numerator for F in corpus.ideals]
    assert len(ideals) == 50
    for I in ideals:
        bI = b_closure_monomial(I)
        assert bI.contains_ideal(I)
        assert equal(b_closure_monomial(bI), bI)
    for I, J in zip(ideals, ideals[1:]):
        S = Ideal(I.ring, I.generators + J.generators)
        assert b_closure_monomial(S).contains_ideal(b_closure_monomial(I))


def test_eab_h_approx_within_newton_closure(R1):
    corpus = monomial_corpus(R1, seed=37, count=4, max_degree=3)
    ctx = StarContext(R1)
    for F in corpus.ideals:
        approx = eab_h_approx(Identity(), F, [R1.ideal("1"), R1.ideal("x", "y"), R1.ideal("x^2", "y")], ctx)
        closure = FractionalIdeal.integral(b_closure_monomial(F.numerator))
        assert closure.contains(approx.finite)


def test_wedge_examples(R1, V11, V12):
    handle = wedge_Y_closure(frac(R1, "x", "y").power(2), [V11])
    assert handle.contains(parse_k_element(R1, "y^2")).is_true
    handle = wedge_Y_closure(frac(R1, "x", "y"), [V11, V12])
    assert handle.contains(parse_k_element(R1, "y")).is_true
    assert handle.contains(parse_k_element(R1, "1")).is_false


def test_wedge_is_extensive(R1, V11, V12):
    for F in generate_corpus(R1, seed=41, count=6, max_degree=3).homogeneous_ideals():
        handle = wedge_Y_closure(F, [V11, V12])
        assert all(handle.contains(g).is_true for g in F.generators() if not g.is_zero())


def test_gr_star_valuation(R1, V11):
    corpus = TestCorpus.explicit(R1, [frac(R1, "x", "y"), frac(R1, "x^2", "y")])
    assert gr_star_valuation_check(V11, Identity(), corpus).verdict.is_true
    report = gr_star_valuation_check(V11, Divisorial(), corpus)
    assert report.verdict.is_false
    assert report.witnesses[0][0] == "(x, y)"


def test_gr_star_valuation_consistency(R1, V11):
    corpus = monomial_corpus(R1, seed=43, count=4, max_degree=3)
    report = gr_star_valuation_check(V11, NewtonClosure(), corpus, approx=EabHApprox(NewtonClosure()))
    assert report.details["consistency"] == "pass"
