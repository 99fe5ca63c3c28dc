import pytest

from corpus import generate_corpus, random_valuations
from fractional import FractionalIdeal, parse_k_element
from grvaluation import GrValuation
from kronecker import FunctionRingElement, sample_elements
from semistar import Adjoin, Divisorial, ExtendToOverring, Identity, Join, StarContext
from topology import (
    GR_VALUATION,
    HOMOGENEOUS_PRIME,
    SEMISTAR,
    DhOpen,
    PointSample,
    StarOpen,
    ZarOpen,
    homogeneous_prime_sample,
    phi_preimage_check,
    point_open_membership,
    preimage_rewrites,
    retraction_checks,
    rewrite_union,
    specialization_and_t0,
    specialization_report,
    ultrafilter_finite,
)
from utils import InputError


def el(ring, text):
    return parse_k_element(ring, text)


def frac(ring, *texts):
    return FractionalIdeal.from_generators([el(ring, t) for t in texts])


@pytest.fixture
def valuations(R1):
    return [GrValuation.of([[1, 1]], R1, name="V11"), GrValuation.of([[1, 2]], R1, name="V12")]


def test_zar_open_membership(R1, valuations):
    V11, V12 = valuations
    u = el(R1, "y^2/x")
    assert point_open_membership(V11, ZarOpen((u,))).is_true
    assert point_open_membership(V12, ZarOpen((el(R1, "x/y"),))).is_false
    assert point_open_membership(V12, ZarOpen(())).is_true


def test_zar_open_rejects_inhomogeneous_element(R1, valuations):
    with pytest.raises(InputError):
        point_open_membership(valuations[0], ZarOpen((el(R1, "x + y^2"),)))


def test_dh_open_membership(R1):
    P = R1.ideal("x")
    assert point_open_membership(P, DhOpen(R1.poly("y"))).is_true
    assert point_open_membership(P, DhOpen(R1.poly("x^2"))).is_false


def test_star_open_membership(R1):
    ctx = StarContext(R1)
    W = StarOpen(frac(R1, "x", "y"))
    assert point_open_membership(Divisorial(), W, ctx).is_true
    assert point_open_membership(Identity(), W, ctx).is_false


def test_star_open_needs_context(R1):
    with pytest.raises(InputError):
        point_open_membership(Identity(), StarOpen(frac(R1, "x")))


def test_point_kind_mismatch(R1, valuations):
    with pytest.raises(InputError):
        point_open_membership(valuations[0], DhOpen(R1.poly("y")))


def test_preimage_rewrite_agrees(R2):
    V = GrValuation.of([[1, 1]], R2, name="V")
    union, report = preimage_rewrites(el(R2, "(x + y)/x^2"), [V])
    assert report.verdict.is_true
    assert not union.contains(V).is_true


def test_preimage_rewrite_on_function_ring_element(R1, valuations):
    alpha = FunctionRingElement.of([R1.poly("x"), R1.poly("y")], [R1.poly("x*y")])
    _, report = preimage_rewrites(alpha, valuations)
    assert not report.verdict.is_false
    assert report.checks_run == 2


def test_homogeneous_quotient_rewrites_to_one_piece(R1):
    union = rewrite_union(el(R1, "x/y"), R1)
    assert len(union.pieces) == 1
    assert union.pieces[0].elements[0].same_as(el(R1, "x/y"))


def test_preimage_needs_a_sample(R1):
    with pytest.raises(InputError):
        preimage_rewrites(el(R1, "x"), [])


def test_phi_preimage(R1, valuations):
    for text in ("x/y", "y^2/x", "1/x"):
        report = phi_preimage_check(el(R1, text), valuations)
        assert report.verdict.is_true, text


def test_preimage_rewrites_on_random_pairs(R1):
    elements = sample_elements(R1, seed=23, count=20)
    sample = random_valuations(R1, seed=23, count=10)
    checked = 0
    for alpha in elements:
        _, report = preimage_rewrites(alpha, sample)
        assert report.verdict.is_true, alpha.format()
        checked += report.checks_run
    assert checked == 200


def test_phi_preimage_on_random_pairs(R1):
    units = generate_corpus(R1, seed=29, count=1, scalar_count=20).scalars
    sample = random_valuations(R1, seed=29, count=10)
    checked = 0
    for u in units:
        report = phi_preimage_check(u, sample)
        assert report.verdict.is_true, u.format()
        checked += report.checks_run
    assert checked == 200


def test_valuation_sample_is_t0(R1, valuations):
    sample = PointSample(GR_VALUATION, valuations)
    family = [ZarOpen((el(R1, "x/y"),)), ZarOpen((el(R1, "y/x"),))]
    preorder, t0 = specialization_and_t0(sample, family)
    assert t0.is_true
    assert preorder.le("V12", "V11")
    assert not preorder.le("V11", "V12")
    assert preorder.is_reflexive()
    assert preorder.is_transitive()


def test_star_sample_is_t0(R1):
    sample = PointSample(SEMISTAR, [Identity(), Divisorial()], ["d", "v"])
    report = specialization_report(sample, [StarOpen(frac(R1, "x", "y"))], StarContext(R1))
    assert report.verdict.is_true
    assert report.details["preorder"]["d"] == ["d", "v"]
    assert report.details["preorder"]["v"] == ["v"]


def test_indistinguishable_points_fail_t0(R1, valuations):
    twin = GrValuation.of([[2, 2]], R1, name="V22")
    sample = PointSample(GR_VALUATION, [valuations[0], twin])
    report = specialization_report(sample, [ZarOpen((el(R1, "x/y"),))])
    assert report.verdict.is_false
    assert report.witnesses == [("V11", "V22")]


def test_singleton_sample_is_t0(R1, valuations):
    _, t0 = specialization_and_t0(PointSample(GR_VALUATION, valuations[:1]), [ZarOpen(())])
    assert t0.is_true


def test_sample_validation(R1, valuations):
    with pytest.raises(InputError):
        PointSample("patch", valuations)
    with pytest.raises(InputError):
        PointSample(HOMOGENEOUS_PRIME, valuations)
    with pytest.raises(InputError):
        PointSample(GR_VALUATION, valuations, ["a", "a"])
    with pytest.raises(InputError):
        homogeneous_prime_sample([R1.ideal("x + y^2")], R1)


def test_retraction_for_divisorial(R1):
    report = retraction_checks([], [Divisorial()], [el(R1, "x/y")], StarContext(R1))
    assert report.verdict.is_true


def test_retraction_for_overring(R1):
    T = Adjoin((el(R1, "x/y"),))
    report = retraction_checks([T], [ExtendToOverring(T)], [el(R1, "x/y")], StarContext(R1))
    assert not report.verdict.is_false
    assert report.details["overrings"] == [T.describe()]


def test_retraction_on_random_overrings(R1):
    units = generate_corpus(R1, seed=31, count=1, scalar_count=20).scalars
    overrings = [Adjoin((u,)) for u in units]
    report = retraction_checks(overrings, [], [], StarContext(R1))
    assert not report.verdict.is_false, report.witnesses[:1]
    assert len(report.details["overrings"]) == 20
    assert report.checks_run >= 40


def test_retraction_rejects_zero(R1):
    with pytest.raises(InputError):
        retraction_checks([], [Identity()], [el(R1, "0")], StarContext(R1))


def test_prime_ultrafilter(R1):
    sample = PointSample(HOMOGENEOUS_PRIME, [R1.ideal("x"), R1.ideal("y")], ["(x)", "(y)"])
    built, report = ultrafilter_finite(sample, "(x)", StarContext(R1))
    assert built.contains(R1.poly("x"))
    assert not built.contains(R1.poly("y"))
    assert report.verdict.is_true


def test_prime_ultrafilter_singleton(R1):
    sample = PointSample(HOMOGENEOUS_PRIME, [R1.ideal("x", "y")], ["m"])
    built, report = ultrafilter_finite(sample, "m", StarContext(R1))
    assert built.contains_ideal(R1.ideal("x", "y"))
    assert report.verdict.is_true


def test_star_ultrafilter_matches_profile(R1):
    ctx = StarContext(R1)
    sample = PointSample(SEMISTAR, [Identity(), Divisorial()], ["d", "v"])
    built, report = ultrafilter_finite(sample, "v", ctx, family=[StarOpen(frac(R1, "x", "y"))])
    assert isinstance(built, Join)
    assert not report.verdict.is_false


def test_star_ultrafilter_outside_every_open(R1):
    ctx = StarContext(R1)
    sample = PointSample(SEMISTAR, [Identity(), Divisorial()], ["d", "v"])
    built, report = ultrafilter_finite(sample, "d", ctx, family=[StarOpen(frac(R1, "x", "y"))])
    assert isinstance(built, Identity)
    assert report.verdict.is_true


def test_ultrafilter_errors(R1, valuations):
    with pytest.raises(InputError):
        ultrafilter_finite(PointSample(GR_VALUATION, valuations), "V11", StarContext(R1))
    sample = PointSample(SEMISTAR, [Identity()], ["d"])
    with pytest.raises(InputError):
        ultrafilter_finite(sample, "d", StarContext(R1))
    with pytest.raises(InputError):
        ultrafilter_finite(sample, "missing", StarContext(R1), family=[StarOpen(frac(R1, "x"))])
