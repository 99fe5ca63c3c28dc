import pytest

from corpus import random_valuations
from fractional import FractionalIdeal, parse_k_element
from grvaluation import GrValuation
from kronecker import (
    CLASSICAL_KR,
    HOMOGENEOUS_KR,
    FunctionRingElement,
    KroneckerHandle,
    classical_in_homogeneous_check,
    gauss_extension,
    graded_parts_roundtrip,
    k_function_ring_axioms_check,
    kr_ideal_closure,
    kr_membership,
    sample_elements,
    valuation_meet_kr_check,
    x_element,
    x_inverse_element,
)
from semistar import Identity, MeetValuations, NewtonClosure
from utils import InputError


def fe(ring, num, den):
    return FunctionRingElement.of([ring.poly(t) for t in num], [ring.poly(t) for t in den])


def frac(ring, *texts):
    return FractionalIdeal.from_generators([parse_k_element(ring, t) for t in texts])


def test_x_and_inverse_are_members(R2):
    handle = KroneckerHandle(R2, NewtonClosure())
    assert kr_membership(x_element(R2), handle).is_true
    assert kr_membership(x_inverse_element(R2), handle).is_true


def test_homogeneous_ring_is_strictly_larger(R2):
    elt = fe(R2, ["x*y"], ["x^2 + y^2"])
    assert kr_membership(elt, KroneckerHandle(R2, NewtonClosure(), HOMOGENEOUS_KR)).is_true
    assert kr_membership(elt, KroneckerHandle(R2, NewtonClosure(), CLASSICAL_KR)).is_false


def test_valuation_meet_membership(R1):
    V = GrValuation.of([[1, 1]], R1)
    handle = KroneckerHandle(R1, MeetValuations((V,)))
    assert handle.eab_verified
    assert kr_membership(fe(R1, ["y"], ["x"]), handle).is_true
    assert kr_membership(fe(R1, ["1"], ["x"]), handle).is_false


def test_membership_is_multiplicative(R1):
    V = GrValuation.of([[1, 2]], R1)
    handle = KroneckerHandle(R1, MeetValuations((V,)))
    e1, e2 = fe(R1, ["y"], ["x"]), fe(R1, ["x^2", "y"], ["x + y"])
    assert kr_membership(e1, handle).is_true and kr_membership(e2, handle).is_true
    assert kr_membership(e1 * e2, handle).is_true


def test_unknown_mode(R1):
    with pytest.raises(InputError):
        KroneckerHandle(R1, Identity(), "graded")


def test_function_ring_axioms(R2):
    handle = KroneckerHandle(R2, NewtonClosure())
    sample = [
        [parse_k_element(R2, "x"), parse_k_element(R2, "y")],
        [parse_k_element(R2, "1")],
        [parse_k_element(R2, "0"), parse_k_element(R2, "1")],
    ]
    report = k_function_ring_axioms_check(handle, sample)
    assert report.verdict.is_true
    assert report.checks_run == 4
    assert report.notes == ["f(0) = 0 skipped"]


def test_ideal_closure_oracle(R1):
    handle = KroneckerHandle(R1, NewtonClosure())
    F = frac(R1, "x^2", "y^2")
    assert kr_ideal_closure(F, handle, parse_k_element(R1, "x*y")).is_true
    assert kr_ideal_closure(F, handle, parse_k_element(R1, "x^2")).is_true
    V = GrValuation.of([[1, 2]], R1)
    wedge = KroneckerHandle(R1, MeetValuations((V,)))
    assert kr_ideal_closure(frac(R1, "x", "y"), wedge, parse_k_element(R1, "1")).is_false


def test_ideal_closure_rejects_elements_outside_rh(Q1):
    handle = KroneckerHandle(Q1, NewtonClosure())
    with pytest.raises(InputError):
        kr_ideal_closure(frac(Q1, "x"), handle, parse_k_element(Q1, "x/(x - 1)"))


def test_ideal_closure_splits_inhomogeneous_numerators(R1):
    handle = KroneckerHandle(R1, NewtonClosure())
    u = parse_k_element(R1, "(x + y^2)/x")
    assert kr_ideal_closure(frac(R1, "1/x"), handle, u).is_true
    notes: list[str] = []
    verdict = kr_ideal_closure(frac(R1, "x", "y"), handle, u, notes)
    assert verdict.is_unknown
    assert "homogeneous component" in notes[0]


def test_gauss_extension_values(R1):
    W = gauss_extension(GrValuation.of([[1, 2]], R1))
    assert W.element_value(fe(R1, ["x"], ["y"])) == (-1,)
    assert W.contains(x_element(R1))
    assert not W.contains(fe(R1, ["x"], ["y"]))


def test_graded_parts_roundtrip(R1, R2):
    assert graded_parts_roundtrip(GrValuation.of([[1, 2]], R1)).verdict.is_true
    assert graded_parts_roundtrip(GrValuation.of([[0, 1], [1, 0]], R2), window=3, max_exponent=3).verdict.is_true


def test_graded_parts_roundtrip_on_random_stacks(R2):
    stacks = random_valuations(R2, seed=8, count=20)
    for V in stacks:
        report = graded_parts_roundtrip(V, window=3, max_exponent=3)
        assert report.verdict.is_true, V.describe()


def test_valuation_meet_matches_gauss_extensions(R1):
    Y = [GrValuation.of([[1, 1]], R1, "V11"), GrValuation.of([[1, 2]], R1, "V12")]
    report = valuation_meet_kr_check(Y, sample_elements(R1, seed=11, count=15))
    assert report.verdict.is_true
    assert report.checks_run == 15


def test_classical_members_are_homogeneous_members(R2):
    base = sample_elements(R2, seed=5, count=250)
    # c(f*g) ⊆ c(f)c(g) ⊆ c(g)
    members = [FunctionRingElement(e.num * e.den, e.den) for e in base]
    report = classical_in_homogeneous_check(R2, NewtonClosure(), base + members)
    assert not report.verdict.is_false, report.witnesses[:1]
    assert report.checks_run >= 50
    graded = KroneckerHandle(R2, NewtonClosure())
    assert sum(kr_membership(e, graded).is_true for e in members) >= 20


def test_sample_elements_are_reproducible(R1):
    a = [e.format() for e in sample_elements(R1, seed=2, count=5)]
    b = [e.format() for e in sample_elements(R1, seed=2, count=5)]
    assert a == b
