import pytest

from algebra_core import Ideal
from corpus import generate_corpus
from fractional import (
    FractionalIdeal,
    KElement,
    frac_arithmetic,
    homogeneous_components,
    is_homogeneous_fractional,
    parse_k_element,
    rh_membership,
    v_closure,
)
from utils import InputError


def frac(ring, *texts):
    return FractionalIdeal.from_generators([parse_k_element(ring, t) for t in texts])


def test_colon_by_maximal_ideal(R1):
    xR = frac(R1, "x")
    assert frac_arithmetic(xR, frac(R1, "x", "y"), "colon").equals(xR)


def test_equality_is_semantic(R1):
    F = FractionalIdeal(R1.poly("x"), R1.ideal("x^2", "x*y"))
    assert F.equals(frac(R1, "x", "y"))


def test_inverse_of_principal(R1):
    R = FractionalIdeal.unit(R1)
    assert R.colon(frac(R1, "1/x")).equals(frac(R1, "x"))


def test_membership_exact_criterion(R1):
    F = frac(R1, "x/y", "1")
    assert F.member(parse_k_element(R1, "x^2/y"))
    assert F.member(parse_k_element(R1, "(x + y)/y"))
    assert not F.member(parse_k_element(R1, "1/y"))
    assert frac_arithmetic(F, None, "member", parse_k_element(R1, "x*y/y^2"))


def test_sum_product_and_intersection(R1):
    X, Y = frac(R1, "x"), frac(R1, "y")
    assert (X + Y).equals(frac(R1, "x", "y"))
    assert (X * Y).equals(frac(R1, "x*y"))
    assert frac_arithmetic(X, Y, "intersect").equals(frac(R1, "x*y"))
    assert frac_arithmetic(frac(R1, "1/x"), frac(R1, "1/y"), "intersect").equals(FractionalIdeal.unit(R1))


def test_zero_denominator_is_an_error(R1):
    with pytest.raises(InputError):
        FractionalIdeal(R1.poly("0"), R1.ideal("x"))
    with pytest.raises(InputError):
        KElement(R1.poly("x"), R1.poly("0"))


def test_missing_operand(R1):
    with pytest.raises(InputError):
        frac_arithmetic(frac(R1, "x"), None, "sum")
    with pytest.raises(InputError):
        frac_arithmetic(frac(R1, "x"), frac(R1, "y"), "divide")


def test_v_closure_examples(R1):
    assert v_closure(frac(R1, "x", "y")).equals(FractionalIdeal.unit(R1))
    assert v_closure(frac(R1, "x^2 + y")).equals(frac(R1, "x^2 + y"))
    assert v_closure(frac(R1, "x^2/x")).equals(frac(R1, "x"))


def test_v_closure_properties(R1):
    corpus = generate_corpus(R1, seed=23, count=6, max_degree=3)
    x = parse_k_element(R1, "x")
    for F in corpus.ideals:
        Fv = v_closure(F)
        assert Fv.contains(F)
        assert v_closure(Fv).equals(Fv)
        assert v_closure(F.scale(x)).equals(Fv.scale(x))


def test_v_closure_is_monotone(R1):
    F, G = frac(R1, "x^2"), frac(R1, "x^2", "x*y")
    assert v_closure(G).contains(v_closure(F))


def test_rh_membership_examples(R1, Q1):
    assert rh_membership(parse_k_element(R1, "x/y"), R1).is_true
    assert rh_membership(parse_k_element(R1, "(x + y)/x"), R1).is_true
    assert rh_membership(parse_k_element(Q1, "x/(x - 1)"), Q1).is_false
    with pytest.raises(InputError):
        rh_membership(parse_k_element(R1, "0"), R1)


def test_rh_membership_of_homogeneous_ratios(R2):
    for text in ("x^2/y", "y/(x^2 + y)", "(x^3 + x*y)/y^2"):
        assert rh_membership(parse_k_element(R2, text), R2).is_true


def test_homogeneous_components(R1):
    z = parse_k_element(R1, "(x + y^2)/x")
    parts = homogeneous_components(z, R1)
    assert [deg for deg, _ in parts] == [(0,), (1,)]
    total = parts[0][1] + parts[1][1]
    assert (total - z).is_zero()


def test_is_homogeneous_fractional(R1):
    assert is_homogeneous_fractional(frac(R1, "x/y", "1"), R1).is_true
    assert is_homogeneous_fractional(frac(R1, "x + y^2"), R1).is_false
    inhomogeneous_den = FractionalIdeal(R1.poly("x + 1"), Ideal(R1.poly_ring, (R1.poly("x*(x + 1)"),)))
    assert is_homogeneous_fractional(inhomogeneous_den, R1).is_true
