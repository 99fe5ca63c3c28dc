# grvaluation.py
# Gauss-type valuations from lexicographic weight stacks, their
# gr-valuation overrings V, principalization F*V = a*V, the wedge_Y
# closure, and the Newton-polyhedron closure of monomial ideals.

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np
from sympy.solvers.simplex import InfeasibleLPError, linprog

from algebra_core import Ideal, Polynomial, format_poly, is_term
from config import DEFAULT_CAPS, SUBIDEAL_DEGREE, Caps
from fractional import (
    ClosureHandle,
    FractionalIdeal,
    KElement,
    homogeneous_components,
    rh_membership,
)
from grading import GradedRing, content_C, is_homogeneous
from utils import InputError, exponent_vectors, format_vector
from verdict import CheckReport, CheckTally, Verdict, all_of

logger = logging.getLogger(__name__)

Value = tuple[int, ...]


class _NotGraded:
    """Result of an in-ring query for an element outside R_H."""

    def __repr__(self) -> str:
        return "NOT_GRADED"

    def label(self) -> str:
        return "not-graded"


NOT_GRADED = _NotGraded()


# -----------------------------
# Weight stacks
# -----------------------------
@dataclass(frozen=True)
class WeightStack:
    """Rows compared lexicographically; every variable's column must be lex >= 0."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        if not rows or not rows[0]:
            raise InputError("a weight stack needs at least one nonempty row")
        if any(len(r) != len(rows[0]) for r in rows):
            raise InputError("weight rows must have equal length")
        zero = (0,) * len(rows)
        for j in range(len(rows[0])):
            column = tuple(r[j] for r in rows)
            if column < zero:
                raise InputError(f"variable {j} has negative value {format_vector(column)}")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "WeightStack":
        return cls(tuple(tuple(r) for r in rows))

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.rows, dtype=np.int64)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def arity(self) -> int:
        return len(self.rows[0])

    def monomial_value(self, exps: Sequence[int]) -> Value:
        return tuple(int(v) for v in self.matrix @ np.asarray(exps, dtype=np.int64))


@dataclass(frozen=True)
class GrValuation:
    stack: WeightStack
    ring: GradedRing
    name: str = "V"

    def __post_init__(self) -> None:
        if self.stack.arity != self.ring.arity:
            raise InputError(f"weight rows have {self.stack.arity} entries, ring has {self.ring.arity} variables")

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]], ring: GradedRing, name: str = "V") -> "GrValuation":
        return cls(WeightStack.of(rows), ring, name)

    @property
    def zero_value(self) -> Value:
        return (0,) * self.stack.rank

    def poly_value(self, f: Polynomial) -> Value:
        if not f:
            raise InputError("valuation of zero")
        return min(self.stack.monomial_value(m) for m in f.keys())

    def value(self, z: KElement | Polynomial) -> Value:
        """Gauss value: lex-min over monomials of the numerator minus that of the denominator."""
        if not isinstance(z, KElement):
            return self.poly_value(z)
        if z.is_zero():
            raise InputError("valuation of zero")
        a, b = self.poly_value(z.num), self.poly_value(z.den)
        return tuple(x - y for x, y in zip(a, b))

    def in_ring(self, z: KElement, cap: int = SUBIDEAL_DEGREE):
        """z ∈ V: every homogeneous component of z has value >= 0.

        Returns a Verdict, or NOT_GRADED when z is outside R_H.
        """
        if z.is_zero():
            return Verdict.true()
        graded = rh_membership(z, self.ring, cap)
        if graded.is_false:
            return NOT_GRADED
        comps = homogeneous_components(z, self.ring, cap)
        if comps is None:
            return Verdict.unknown(cap)
        return Verdict.of(all(self.value(c) >= self.zero_value for _, c in comps))

    def in_maximal_ideal(self, z: KElement) -> bool:
        """Homogeneous z ∈ M_V (strictly positive value)."""
        return self.value(z) > self.zero_value

    def describe(self) -> str:
        return f"{self.name}: weights {[list(r) for r in self.stack.rows]}"


def gauss_valuation(z: KElement | Polynomial, V: GrValuation, query: str = "value", cap: int = SUBIDEAL_DEGREE):
    query = (query or "").strip().lower()
    if query == "value":
        return V.value(z)
    if query == "in-ring":
        if not isinstance(z, KElement):
            z = KElement.of(z)
        return V.in_ring(z, cap)
    raise InputError(f"unknown valuation query {query!r}")


def in_ring_verdict(result) -> Verdict:
    # V ⊆ R_H, so elements outside R_H are not in V
    return Verdict.false() if result is NOT_GRADED else result


# -----------------------------
# F * V
# -----------------------------
def _homogeneous_generators(F: FractionalIdeal, ring: GradedRing) -> list[KElement] | None:
    if not is_homogeneous(F.den, ring):
        return None
    gens = [g for g in F.generators() if not g.is_zero()]
    if all(is_homogeneous(g.num, ring) for g in gens):
        return gens
    return None


@dataclass(frozen=True)
class FVExtension:
    """F*V = a*V for the minimal-value generator a."""

    valuation: GrValuation
    generator: KElement
    index: int
    certificates: tuple[tuple[str, Value], ...]

    @property
    def threshold(self) -> Value:
        return self.valuation.value(self.generator)

    def member(self, z: KElement, cap: int = SUBIDEAL_DEGREE) -> Verdict:
        """z ∈ aV iff z ∈ R_H and every component of z has value >= v(a)."""
        if z.is_zero():
            return Verdict.true()
        return in_ring_verdict(self.valuation.in_ring(z / self.generator, cap))


def extend_FV(F: FractionalIdeal, V: GrValuation) -> FVExtension:
    ring = V.ring
    gens = _homogeneous_generators(F, ring)
    if gens is None:
        raise InputError(f"{F.format()} does not have a homogeneous generator list")
    if not gens:
        raise InputError("extension of the zero ideal")
    values = [V.value(g) for g in gens]
    best = min(range(len(gens)), key=lambda i: (values[i], i))
    a = gens[best]
    certs = []
    for g, val in zip(gens, values):
        diff = tuple(x - y for x, y in zip(val, values[best]))
        if diff < V.zero_value:
            raise AssertionError("minimal generator is not minimal")
        certs.append((f"{g.format()} / {a.format()}", diff))
    return FVExtension(V, a, best, tuple(certs))


def _monomial_quotients(ring: GradedRing, degree: int) -> list[tuple[int, KElement]]:
    """(|a| + |b|, x^a / x^b) with disjoint supports and |a| + |b| <= degree."""
    out = []
    for a in exponent_vectors(ring.arity, degree):
        for b in exponent_vectors(ring.arity, degree - sum(a)):
            if not any(a) and not any(b):
                continue
            if any(x and y for x, y in zip(a, b)):
                continue
            out.append((sum(a) + sum(b), KElement(ring.monomial(a), ring.monomial(b))))
    return out


def fv_membership(F: FractionalIdeal, z: KElement, V: GrValuation, caps: Caps = DEFAULT_CAPS) -> Verdict:
    """z ∈ F*V, exactly for homogeneous or principal F, otherwise bounded from both sides."""
    if z.is_zero():
        return Verdict.true()
    ring = V.ring
    gens = [g for g in F.generators() if not g.is_zero()]
    if not gens:
        return Verdict.false()
    if _homogeneous_generators(F, ring) is not None:
        return extend_FV(F, V).member(z, caps.subideal_degree)
    if len(gens) == 1:
        return in_ring_verdict(V.in_ring(z / gens[0], caps.subideal_degree))

    # lower approximation F * V_m
    quotients = [(size, q) for size, q in _monomial_quotients(ring, caps.ascent) if V.value(q) >= V.zero_value]
    for m in range(1, caps.ascent + 1):
        step = [q for size, q in quotients if size <= m]
        Fm = FractionalIdeal.from_generators(gens + [g * q for g in gens for q in step])
        if Fm.member(z):
            return Verdict.true()
    # upper bound C(F) * V
    if is_homogeneous(F.den, ring):
        parts = [c for g in F.numerator.nonzero_generators for c in content_C(g, ring).generators]
        upper = FractionalIdeal(F.den, Ideal(F.ring, tuple(parts)))
        if extend_FV(upper, V).member(z, caps.subideal_degree).is_false:
            return Verdict.false()
    logger.debug("F*V membership undecided at ascent cap %d", caps.ascent)
    return Verdict.unknown(caps.ascent)


# -----------------------------
# wedge_Y
# -----------------------------
def wedge_Y_closure(F: FractionalIdeal, Y: Sequence[GrValuation], caps: Caps = DEFAULT_CAPS) -> ClosureHandle:
    """F^{∧_Y} = ⋂_{V ∈ Y} F*V as a membership oracle."""
    if not Y:
        raise InputError("wedge_Y needs at least one valuation")
    ring = Y[0].ring

    def oracle(z: KElement) -> Verdict:
        return all_of(fv_membership(F, z, V, caps) for V in Y)

    def enumerate_members() -> list[KElement]:
        found = []
        gens = [g for g in F.generators() if not g.is_zero()]
        for _, q in _monomial_quotients(ring, caps.sample_degree):
            inside = all(V.value(q) >= V.zero_value for V in Y)
            for g in gens:
                z = g * q
                if inside or oracle(z).is_true:
                    found.append(z)
        return found

    return ClosureHandle(
        source=F,
        label="meet_valuations(" + ", ".join(V.name for V in Y) + ")",
        oracle=oracle,
        enumerate=enumerate_members,
        within_rh=True,
    )


# -----------------------------
# Newton polyhedron closure (b on monomial ideals)
# -----------------------------
def _term_exponents(f: Polynomial) -> tuple[int, ...]:
    (exps,) = f.keys()
    return exps


def in_newton_polyhedron(u: Sequence[int], points: Sequence[Sequence[int]]) -> bool:
    """u ∈ conv(points) + R^n_{>=0}, decided by exact rational feasibility."""
    if any(all(a <= b for a, b in zip(p, u)) for p in points):
        return True
    k = len(points)
    A = [[int(p[j]) for p in points] for j in range(len(u))]
    try:
        linprog([0] * k, A, [int(x) for x in u], [[1] * k], [1])
    except InfeasibleLPError:
        return False
    return True


def b_closure_monomial(I: Ideal) -> Ideal:
    """Integral closure of a monomial ideal: lattice points of its Newton polyhedron."""
    gens = I.nonzero_generators
    if not gens:
        return I
    if not all(is_term(g) for g in gens):
        bad = next(format_poly(g) for g in gens if not is_term(g))
        raise InputError(f"Newton closure needs monomial generators, got {bad}")
    points = [_term_exponents(g) for g in gens]
    box = [max(p[j] for p in points) for j in range(len(points[0]))]
    inside = [u for u in product(*(range(b + 1) for b in box)) if in_newton_polyhedron(u, points)]
    minimal = [
        u for u in inside
        if not any(v != u and all(a <= b for a, b in zip(v, u)) for v in inside)
    ]
    ring = I.ring
    monos = sorted((ring.from_dict({u: ring.domain.one}) for u in minimal), key=lambda m: ring.order(m.LM), reverse=True)
    return Ideal(ring, tuple(monos))


def is_monomial_fractional(F: FractionalIdeal) -> bool:
    return is_term(F.den) and all(is_term(g) for g in F.numerator.nonzero_generators)


def b_closure_fractional(F: FractionalIdeal) -> FractionalIdeal:
    """(1/m)*I  ->  (1/m)*b(I) for a monomial denominator m."""
    if not is_monomial_fractional(F):
        raise InputError(f"Newton closure needs a monomial fractional ideal, got {F.format()}")
    return FractionalIdeal(F.den, b_closure_monomial(F.numerator))


# -----------------------------
# gr-*-valuation criterion
# -----------------------------
def gr_star_valuation_check(V: GrValuation, star, corpus, caps: Caps = DEFAULT_CAPS, approx=None) -> CheckReport:
    """F^* ⊆ F*V on the homogeneous corpus; with `approx` (an e.a.b. approximation of the
    same star) also checks that its failures are matched by failures of the star."""
    from semistar import StarContext, eval_star  # semistar builds on this module

    ctx = StarContext(V.ring, caps)
    tally = CheckTally("gr_star_valuation")
    approx_failed: list[str] = []
    star_failed: list[str] = []
    for F in corpus.homogeneous_ideals():
        ext = extend_FV(F, V)
        handle = eval_star(star, F, ctx)
        for z in handle.samples():
            got = tally.add(ext.member(z, caps.subideal_degree), F.format(), z.format(),
                            f"v = {format_vector(V.value(z))} < {format_vector(ext.threshold)}" if not z.is_zero() else "")
            if got.is_false:
                star_failed.append(F.format())
                break
        if approx is not None:
            ahandle = eval_star(approx, F, ctx)
            if any(ext.member(z, caps.subideal_degree).is_false for z in ahandle.samples()):
                approx_failed.append(F.format())
    details = {}
    if approx is not None:
        inconsistent = [f for f in approx_failed if f not in star_failed]
        consistency = Verdict.false() if inconsistent else Verdict.true()
        details["consistency"] = consistency.label()
        details["approx_failures"] = approx_failed
        if inconsistent:
            tally.note(f"approximation fails but the star passes on {inconsistent}")
    logger.info("gr-star check on %s: %d instances", V.name, len(tally.verdicts))
    return tally.report(**details)
