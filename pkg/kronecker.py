# kronecker.py
# Homogeneous (KR) and classical (Kr) Kronecker function rings: membership,
# K-function-ring axioms, the F*KR ∩ R_H closure oracle, Gauss extensions
# V -> V_{M_V}(X) and the graded-part round trip back to V.

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from algebra_core import Ideal, Polynomial, ideal_product
from config import DEFAULT_CAPS, Caps
from corpus import TestCorpus, random_polynomial
from fractional import FractionalIdeal, KElement, homogeneous_components, rh_membership
from grading import AuxPolynomial, GradedRing, content_A, content_c, is_homogeneous
from grvaluation import GrValuation, Value
from semistar import MeetValuations, NewtonClosure, Star, StarContext, eab_checks, eval_star
from utils import InputError, exponent_vectors, format_vector
from verdict import CheckReport, CheckTally, Verdict

logger = logging.getLogger(__name__)

HOMOGENEOUS_KR = "homogeneous-KR"
CLASSICAL_KR = "classical-Kr"


# -----------------------------
# Elements of K(X)
# -----------------------------
@dataclass(frozen=True)
class FunctionRingElement:
    """f/g with f, g ∈ R[X] (coefficient i is the X^i coefficient)."""

    num: AuxPolynomial
    den: AuxPolynomial

    def __post_init__(self) -> None:
        if self.den.is_zero():
            raise InputError("function ring element with zero denominator")

    @classmethod
    def of(cls, num: Sequence[Polynomial], den: Sequence[Polynomial]) -> "FunctionRingElement":
        return cls(AuxPolynomial.of(num), AuxPolynomial.of(den))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __mul__(self, other: "FunctionRingElement") -> "FunctionRingElement":
        return FunctionRingElement(self.num * other.num, self.den * other.den)

    def format(self) -> str:
        return f"[{self.num.format()}] / [{self.den.format()}]"

    def __str__(self) -> str:
        return self.format()


def x_element(ring: GradedRing) -> FunctionRingElement:
    pr = ring.poly_ring
    return FunctionRingElement.of([pr.zero, pr.one], [pr.one])


def x_inverse_element(ring: GradedRing) -> FunctionRingElement:
    pr = ring.poly_ring
    return FunctionRingElement.of([pr.one], [pr.zero, pr.one])


# -----------------------------
# Handles
# -----------------------------
@dataclass
class KroneckerHandle:
    ring: GradedRing
    star: Star
    mode: str = HOMOGENEOUS_KR
    eab_verified: bool = False
    caps: Caps = DEFAULT_CAPS
    notes: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.mode not in (HOMOGENEOUS_KR, CLASSICAL_KR):
            raise InputError(f"unknown Kronecker mode {self.mode!r}")
        # wedge_Y of gr-valuation overrings and b are graded-e.a.b.
        if isinstance(self.star, (MeetValuations, NewtonClosure)):
            self.eab_verified = True

    @classmethod
    def verified(cls, ring: GradedRing, star: Star, corpus: TestCorpus, mode: str = HOMOGENEOUS_KR,
                 caps: Caps = DEFAULT_CAPS) -> "KroneckerHandle":
        """Run the graded e.a.b. check on `corpus`; only a pass enables the content fast path."""
        report = eab_checks(star, corpus, StarContext(ring, caps), "graded-eab")
        handle = cls(ring, star, mode, report.verdict.is_true, caps)
        handle.notes.append(f"graded-eab on corpus: {report.verdict.label()}")
        return handle

    @property
    def ctx(self) -> StarContext:
        return StarContext(self.ring, self.caps)

    def content(self, F: AuxPolynomial) -> Ideal:
        return content_A(F, self.ring) if self.mode == HOMOGENEOUS_KR else content_c(F)

    def star_contains(self, target: Ideal, closed: Ideal) -> Verdict:
        """target ⊆ closed^*."""
        try:
            handle = eval_star(self.star, FractionalIdeal.integral(closed), self.ctx)
        except InputError as e:
            logger.debug("star not evaluable on %s: %s", closed.format(), e)
            return Verdict.unknown(self.caps.ascent)
        return handle.contains_ideal(FractionalIdeal.integral(target))


def default_kr_witnesses(elt: FunctionRingElement) -> list[AuxPolynomial]:
    """1, X, f, g and the content carrier f*g."""
    pr = elt.den.coefficients[0].ring
    out = [AuxPolynomial.of([pr.one]), AuxPolynomial.of([pr.zero, pr.one]), elt.den]
    if not elt.num.is_zero():
        out += [elt.num, elt.num * elt.den]
    return out


def _classical_exact_rule(elt: FunctionRingElement, handle: KroneckerHandle) -> Verdict | None:
    """For b and principal c(g): membership is exactly c(f) ⊆ c(g) (principal ideals are integrally closed)."""
    if not isinstance(handle.star, NewtonClosure):
        return None
    cg = content_c(elt.den)
    if cg.principal_generator() is None:
        return None
    return Verdict.of(cg.contains_ideal(content_c(elt.num)))


def kr_membership(elt: FunctionRingElement, handle: KroneckerHandle,
                  family: Sequence[AuxPolynomial] | None = None) -> Verdict:
    if elt.is_zero():
        return Verdict.true()
    cf, cg = handle.content(elt.num), handle.content(elt.den)
    if handle.mode == HOMOGENEOUS_KR and handle.eab_verified:
        return handle.star_contains(cf, cg)
    if handle.mode == CLASSICAL_KR:
        exact = _classical_exact_rule(elt, handle)
        if exact is not None:
            return exact
    witnesses = list(family) if family is not None else default_kr_witnesses(elt)
    for h in witnesses:
        if h.is_zero():
            continue
        ch = handle.content(h)
        if handle.star_contains(ideal_product(cf, ch), ideal_product(cg, ch)).is_true:
            return Verdict.true()
    logger.debug("no Kronecker witness among %d candidates for %s", len(witnesses), elt.format())
    return Verdict.unknown(len(witnesses))


# -----------------------------
# Axioms and closure oracle
# -----------------------------
def _clear_denominators(coeffs: Sequence[KElement]) -> AuxPolynomial:
    pr = coeffs[0].ring
    common = pr.one
    for c in coeffs:
        common = common.lcm(c.den)
    return AuxPolynomial.of([c.num * common.exquo(c.den) for c in coeffs])


def k_function_ring_axioms_check(handle: KroneckerHandle, sample: Sequence[Sequence[KElement]]) -> CheckReport:
    """X, X^-1 and f(0)/f(X) for each sampled f ∈ K[X] lie in the ring."""
    tally = CheckTally("k_function_ring_axioms")
    tally.add(kr_membership(x_element(handle.ring), handle), "X")
    tally.add(kr_membership(x_inverse_element(handle.ring), handle), "X^-1")
    for coeffs in sample:
        f = _clear_denominators(list(coeffs))
        if f.is_zero():
            continue
        f0 = f.coefficients[0]
        if not f0:
            tally.note("f(0) = 0 skipped")
            continue
        elt = FunctionRingElement(AuxPolynomial.of([f0]), f)
        tally.add(kr_membership(elt, handle), "f(0)/f", elt.format())
    return tally.report(star=handle.star.describe(), mode=handle.mode)


def kronecker_polynomial(gens: Sequence[Polynomial]) -> AuxPolynomial:
    """f_F = sum_i a_i X^i."""
    return AuxPolynomial.of(list(gens))


def kr_ideal_closure(F: FractionalIdeal, handle: KroneckerHandle, u: KElement,
                     notes: list[str] | None = None) -> Verdict:
    """u ∈ F*KR(R,*) ∩ R_H, decided through u*h / f_I with f_I the Kronecker polynomial of I.

    An element of R_H that is not a ratio of homogeneous polynomials is split into its
    homogeneous components; it is a member when every component is, otherwise unknown.
    """
    ring = handle.ring
    cap = handle.caps.subideal_degree
    if u.is_zero():
        return Verdict.true()
    if not (is_homogeneous(u.num, ring) and is_homogeneous(u.den, ring)):
        graded = rh_membership(u, ring, cap)
        if graded.is_false:
            raise InputError(f"{u.format()} is not in R_H")
        comps = homogeneous_components(u, ring, cap) if graded.is_true else None
        if comps is None:
            reason = f"{u.format()}: no homogeneous clearing element up to degree {cap}"
        else:
            parts = [kr_ideal_closure(F, handle, c) for _, c in comps]
            if all(p.is_true for p in parts):
                return Verdict.true()
            reason = f"{u.format()}: a homogeneous component is not a member, the sum is undecided"
        logger.info("kr_ideal_closure unknown: %s", reason)
        if notes is not None:
            notes.append(reason)
        return Verdict.unknown(cap)
    if not is_homogeneous(F.den, ring):
        raise InputError(f"{F.format()} needs a homogeneous denominator")
    gens = [g for g in F.numerator.generators if g]
    if not gens:
        raise InputError("closure of the zero ideal")
    elt = FunctionRingElement(
        AuxPolynomial.of([u.num * F.den]),
        kronecker_polynomial([u.den * g for g in gens]),
    )
    return kr_membership(elt, handle)


# -----------------------------
# Gauss extension V_{M_V}(X)
# -----------------------------
@dataclass(frozen=True)
class GaussExtension:
    valuation: GrValuation

    def value(self, F: AuxPolynomial) -> Value:
        if F.is_zero():
            raise InputError("valuation of zero")
        return min(self.valuation.poly_value(c) for c in F.coefficients if c)

    def element_value(self, elt: FunctionRingElement) -> Value:
        a, b = self.value(elt.num), self.value(elt.den)
        return tuple(x - y for x, y in zip(a, b))

    def contains(self, elt: FunctionRingElement) -> bool:
        if elt.is_zero():
            return True
        return self.element_value(elt) >= self.valuation.zero_value


def gauss_extension(V: GrValuation) -> GaussExtension:
    return GaussExtension(V)


def _degree_fractions(ring: GradedRing, max_exponent: int) -> dict[tuple[int, ...], list[KElement]]:
    """Homogeneous monomial and binomial quotients grouped by degree."""
    monos = list(exponent_vectors(ring.arity, max_exponent))
    by_degree: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for e in monos:
        by_degree.setdefault(ring.degree_of(e), []).append(e)
    out: dict[tuple[int, ...], list[KElement]] = {}
    for a in monos:
        for b in monos:
            if any(x and y for x, y in zip(a, b)):
                continue
            alpha = tuple(p - q for p, q in zip(ring.degree_of(a), ring.degree_of(b)))
            num = ring.monomial(a)
            out.setdefault(alpha, []).append(KElement(num, ring.monomial(b)))
            partner = next((c for c in by_degree[ring.degree_of(a)] if c != a), None)
            if partner is not None:
                out[alpha].append(KElement(num - ring.monomial(partner), ring.monomial(b)))
    return out


def graded_parts_roundtrip(V: GrValuation, window: int = 4, max_exponent: int = 4) -> CheckReport:
    """Graded parts W ∩ (R_H)_alpha of the Gauss extension W agree with V, for |alpha| <= window."""
    W = gauss_extension(V)
    tally = CheckTally("gauss_roundtrip")
    ring = V.ring
    one = AuxPolynomial.of([ring.poly_ring.one])
    for alpha, fractions in sorted(_degree_fractions(ring, max_exponent).items()):
        if sum(abs(a) for a in alpha) > window:
            continue
        for z in fractions:
            in_W = W.contains(FunctionRingElement(AuxPolynomial.of([z.num]), AuxPolynomial.of([z.den])))
            in_V = V.in_ring(z)
            if not isinstance(in_V, Verdict) or in_V.is_unknown:
                tally.add(Verdict.unknown(V.ring.arity * max_exponent))
                continue
            tally.add(Verdict.of(in_V.is_true == in_W), format_vector(alpha), z.format(), f"W: {in_W}", f"V: {in_V}")
    tally.add(Verdict.of(W.contains(FunctionRingElement(AuxPolynomial.of([ring.poly_ring.zero, ring.poly_ring.one]), one)), "X not in W")
    return tally.report(valuation=V.describe())


def valuation_meet_kr_check(Y: Sequence[GrValuation], sample: Sequence[FunctionRingElement],
                            caps: Caps = DEFAULT_CAPS) -> CheckReport:
    """For * = wedge_Y: KR membership equals membership in every V_{M_V}(X)."""
    if not Y:
        raise InputError("valuation_meet_kr_check needs at least one valuation")
    handle = KroneckerHandle(Y[0].ring, MeetValuations(tuple(Y)), HOMOGENEOUS_KR, True, caps)
    extensions = [gauss_extension(V) for V in Y]
    tally = CheckTally("valuation_meet_kr")
    for elt in sample:
        kr = kr_membership(elt, handle)
        gauss = all(W.contains(elt) for W in extensions)
        if kr.is_unknown:
            tally.add(kr)
            continue
        tally.add(Verdict.of(kr.is_true == gauss), elt.format(), f"KR: {kr.label()}", f"Gauss: {gauss}")
    return tally.report(valuations=[V.name for V in Y])


def classical_in_homogeneous_check(ring: GradedRing, star: Star, sample: Sequence[FunctionRingElement],
                                   caps: Caps = DEFAULT_CAPS) -> CheckReport:
    """Kr(R,*) ⊆ KR(R,*) on the sample."""
    classical = KroneckerHandle(ring, star, CLASSICAL_KR, caps=caps)
    graded = KroneckerHandle(ring, star, HOMOGENEOUS_KR, caps=caps)
    tally = CheckTally("kr_containment")
    for elt in sample:
        if not kr_membership(elt, classical).is_true:
            continue
        tally.add(kr_membership(elt, graded), elt.format())
    if not tally.verdicts:
        tally.note("no classical member in the sample")
    return tally.report(star=star.describe())


def sample_elements(ring: GradedRing, seed: int, count: int = 50, max_degree: int = 3,
                    max_x_degree: int = 2) -> list[FunctionRingElement]:
    """Random f/g in K(X) with coefficients in R."""
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    out = []
    for _ in range(count):
        num = [random_polynomial(rng, ring, max_degree) for _ in range(int(rng.integers(1, max_x_degree + 2)))]
        den = [random_polynomial(rng, ring, max_degree) for _ in range(int(rng.integers(1, max_x_degree + 2)))]
        out.append(FunctionRingElement.of(num, den))
    return out

