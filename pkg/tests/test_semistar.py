import pytest

from corpus import TestCorpus, generate_corpus, monomial_corpus
from fractional import FractionalIdeal, parse_k_element
from grvaluation import GrValuation
from semistar import (
    Adjoin,
    Divisorial,
    ExtendToOverring,
    Identity,
    Join,
    LocalizeAtPrimes,
    LocalizeComplement,
    MeetValuations,
    NewtonClosure,
    StarContext,
    axioms_check,
    compare,
    eab_checks,
    eab_h_approx,
    eval_star,
    meet_and_join,
    preserve_homogeneity_check,
    quasi_star_ideal_check,
    stability_check,
    stable_assoc_approx,
)
from utils import InputError


def frac(ring, *texts):
    return FractionalIdeal.from_generators([parse_k_element(ring, t) for t in texts])


def el(ring, text):
    return parse_k_element(ring, text)


def corpus_of(ring, *ideals):
    return TestCorpus.explicit(ring, list(ideals))


def adjoin(ring, *texts):
    return ExtendToOverring(Adjoin(tuple(el(ring, t) for t in texts)))


def h(ring, *primes):
    return LocalizeAtPrimes(tuple(ring.ideal(p) for p in primes))


# -----------------------------
# eval
# -----------------------------
def test_identity_is_finite(R1):
    F = frac(R1, "x", "y")
    handle = eval_star(Identity(), F, StarContext(R1))
    assert handle.is_finite and handle.finite.equals(F)


def test_overring_ascent(R1):
    handle = eval_star(adjoin(R1, "x/y"), frac(R1, "y"), StarContext(R1))
    assert not handle.is_finite
    assert handle.contains(el(R1, "x")).is_true


def test_meet_valuations_membership(R1):
    V = GrValuation.of([[1, 1]], R1, name="W")
    handle = eval_star(MeetValuations((V,)), frac(R1, "x", "y").power(2), StarContext(R1))
    assert handle.contains(el(R1, "y^2")).is_true


def test_localization_membership(R1):
    handle = eval_star(h(R1, "x"), frac(R1, "x"), StarContext(R1))
    assert handle.contains(el(R1, "x/y")).is_true
    assert handle.contains(el(R1, "1")).is_false


def test_zero_ideal_is_rejected(R1):
    with pytest.raises(InputError):
        eval_star(Identity(), frac(R1, "0"), StarContext(R1))


def test_inhomogeneous_prime_is_rejected(R1):
    with pytest.raises(InputError):
        eval_star(h(R1, "x + y^2"), frac(R1, "x"), StarContext(R1))


# -----------------------------
# axioms / compare
# -----------------------------
def test_axioms_hold_for_identity_and_v(R1):
    corpus = generate_corpus(R1, seed=42, count=8, max_degree=3)
    ctx = StarContext(R1)
    assert axioms_check(Identity(), corpus, ctx).verdict.is_true
    assert axioms_check(Divisorial(), corpus, ctx).verdict.is_true


def test_square_map_is_not_extensive(R1, square_star):
    report = axioms_check(square_star, corpus_of(R1, frac(R1, "x")), StarContext(R1))
    assert report.verdict.is_false
    assert report.witnesses[0][:3] == ("*3", "(x)", "x")


def test_overring_and_valuation_meet_axioms_on_seeded_corpus(R1):
    corpus = generate_corpus(R1, seed=42, count=20, max_degree=4)
    ctx = StarContext(R1).with_caps({"max_triples": 30})
    W = MeetValuations((GrValuation.of([[1, 1]], R1, name="W11"), GrValuation.of([[1, 2]], R1, name="W12")))
    for star in (adjoin(R1, "x/y"), W):
        report = axioms_check(star, corpus, ctx)
        assert not report.verdict.is_false, report.witnesses[:1]
        assert report.checks_run >= 100


def test_localization_axioms_never_fail(R1):
    corpus = corpus_of(R1, frac(R1, "x"), frac(R1, "x*y", "y^2"))
    report = axioms_check(h(R1, "x"), corpus, StarContext(R1).with_caps({"max_triples": 5}))
    assert not report.verdict.is_false


def test_compare_identity_and_v(R1):
    report = compare(Identity(), Divisorial(), corpus_of(R1, frac(R1, "x", "y"), frac(R1, "x")), StarContext(R1))
    assert report.details["relation"] == "<="


def test_compare_localizations_incomparable(R1):
    corpus = corpus_of(R1, frac(R1, "x"), frac(R1, "y"))
    report = compare(h(R1, "x"), h(R1, "y"), corpus, StarContext(R1))
    assert report.details["relation"] == "incomparable"
    assert report.witnesses


def test_compare_identity_and_overring(R1):
    report = compare(Identity(), adjoin(R1, "x/y"), corpus_of(R1, frac(R1, "y")), StarContext(R1))
    assert report.details["relation"] == "<="


# -----------------------------
# homogeneity
# -----------------------------
def test_inhomogeneous_overring_breaks_homogeneity(Q1):
    report = preserve_homogeneity_check(adjoin(Q1, "1/(x - 1)"), corpus_of(Q1, frac(Q1, "x")), StarContext(Q1))
    assert report.verdict.is_false
    assert any("not in R_H" in w for w in report.witnesses[0])


def test_inhomogeneous_localization_breaks_homogeneity(Q1):
    L = ExtendToOverring(LocalizeComplement(Q1.ideal("x - 1"), homogeneous=False))
    report = preserve_homogeneity_check(L, corpus_of(Q1, frac(Q1, "x")), StarContext(Q1))
    assert report.verdict.is_false
    assert any("not in R_H" in w for w in report.witnesses[0])


def test_v_preserves_homogeneity(R1):
    corpus = generate_corpus(R1, seed=42, count=8, max_degree=3)
    assert preserve_homogeneity_check(Divisorial(), corpus, StarContext(R1)).verdict.is_true


def test_localization_preserves_homogeneity(R1):
    corpus = corpus_of(R1, frac(R1, "x"), frac(R1, "x", "y"))
    assert not preserve_homogeneity_check(h(R1, "x"), corpus, StarContext(R1)).verdict.is_false


# -----------------------------
# e.a.b. / stability / quasi-ideals
# -----------------------------
def test_identity_is_not_graded_eab(R1):
    corpus = corpus_of(R1, frac(R1, "x", "y"), frac(R1, "x", "y").power(2), frac(R1, "x^2", "y^2"))
    report = eab_checks(Identity(), corpus, StarContext(R1))
    assert report.verdict.is_false


def test_newton_closure_is_eab_on_monomials(R1):
    corpus = monomial_corpus(R1, seed=3, count=3, max_degree=3)
    assert eab_checks(NewtonClosure(), corpus, StarContext(R1), "eab").verdict.is_true


def test_unknown_eab_mode(R1):
    with pytest.raises(InputError):
        eab_checks(Identity(), corpus_of(R1, frac(R1, "x")), StarContext(R1), "strict")


def test_identity_is_stable(R1):
    corpus = corpus_of(R1, frac(R1, "x"), frac(R1, "y"), frac(R1, "x", "y"))
    assert stability_check(Identity(), corpus, StarContext(R1)).verdict.is_true


def test_quasi_star_ideals(R1):
    ctx = StarContext(R1)
    assert quasi_star_ideal_check(R1.ideal("x", "y"), Identity(), ctx).verdict.is_true
    assert quasi_star_ideal_check(R1.ideal("x", "y"), Divisorial(), ctx).verdict.is_false
    assert quasi_star_ideal_check(R1.ideal("x"), Divisorial(), ctx).verdict.is_true


# -----------------------------
# approximations, meet and join
# -----------------------------
def test_stable_approx_of_identity_is_F(R1):
    F = frac(R1, "x^2", "y")
    handle = stable_assoc_approx(Identity(), F, None, StarContext(R1))
    assert handle.lower and handle.finite.equals(F)


def test_stable_approx_of_localization(R1):
    handle = stable_assoc_approx(h(R1, "x"), frac(R1, "x*y"), [R1.ideal("y")], StarContext(R1))
    assert handle.contains(el(R1, "x")).is_true


def test_stable_approx_of_v_on_maximal_ideal(R1):
    handle = stable_assoc_approx(Divisorial(), frac(R1, "x", "y"), None, StarContext(R1))
    assert handle.finite.equals(FractionalIdeal.unit(R1))


def test_eab_h_approx_reaches_newton_closure(R1):
    handle = eab_h_approx(Identity(), frac(R1, "x^2", "y^2"), [R1.ideal("1"), R1.ideal("x", "y")], StarContext(R1))
    assert handle.finite.equals(frac(R1, "x^2", "x*y", "y^2"))


def test_eab_h_approx_rejects_inhomogeneous_witness(R1):
    with pytest.raises(InputError):
        eab_h_approx(Identity(), frac(R1, "x"), [R1.ideal("x + y^2")], StarContext(R1))


def test_join_of_identity(R1):
    F = frac(R1, "x", "y^2")
    handle = meet_and_join([Identity()], "join", F, StarContext(R1))
    assert handle.is_finite and handle.finite.equals(F)


def test_join_descriptor_reaches_fixpoint(R1):
    handle = eval_star(Join((Identity(), Divisorial())), frac(R1, "x", "y"), StarContext(R1))
    assert handle.is_finite
    assert handle.finite.equals(FractionalIdeal.unit(R1))


def test_join_of_overrings(R1):
    handle = meet_and_join([adjoin(R1, "x/y"), adjoin(R1, "y/x")], "join", frac(R1, "y"), StarContext(R1), cap=2)
    assert handle.contains(el(R1, "x")).is_true


def test_meet_of_localizations(R1):
    handle = meet_and_join([h(R1, "x"), h(R1, "y")], "meet", frac(R1, "x*y"), StarContext(R1))
    assert handle.contains(el(R1, "x")).is_false


def test_join_needs_a_known_mode(R1):
    with pytest.raises(InputError):
        meet_and_join([Identity()], "union", frac(R1, "x"), StarContext(R1))


def test_meet_of_finite_stars_is_exact(R1):
    F = frac(R1, "x", "y")
    handle = meet_and_join([Identity(), Divisorial()], "meet", F, StarContext(R1))
    assert handle.is_finite and handle.finite.equals(F)
