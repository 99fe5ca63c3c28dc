# fractional.py
# Finitely generated fractional ideals (1/h)*I of K = Frac(R), the divisorial
# closure, and membership in the homogeneous quotient ring R_H.

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

from sympy import fraction, together

from algebra_core import (
    Ideal,
    Polynomial,
    equal as ideals_equal,
    format_poly,
    ideal_colon,
    ideal_intersection,
    ideal_product,
    parse_expression,
    scale_ideal,
)
from config import SUBIDEAL_DEGREE
from grading import (
    Degree,
    GradedRing,
    decompose,
    homogeneous_core_nonzero,
    homogeneous_element,
    is_homogeneous,
    is_homogeneous_ideal,
)
from utils import InputError, dedupe
from verdict import Verdict, all_of

logger = logging.getLogger(__name__)

__all__ = [
    "KElement",
    "FractionalIdeal",
    "Verdict",
    "parse_k_element",
    "frac_arithmetic",
    "v_closure",
    "rh_membership",
    "homogeneous_components",
    "is_homogeneous_fractional",
    "ClosureHandle",
]


# -----------------------------
# Elements of K
# -----------------------------
@dataclass(frozen=True)
class KElement:
    """z = num/den; never reduced (no gcd), so compare with `same_as`."""

    num: Polynomial
    den: Polynomial

    def __post_init__(self) -> None:
        if not self.den:
            raise InputError("zero denominator")
        if self.num.ring.symbols != self.den.ring.symbols:
            raise InputError("numerator and denominator live in different rings")

    @classmethod
    def of(cls, f: Polynomial) -> "KElement":
        return cls(f, f.ring.one)

    @property
    def ring(self):
        return self.num.ring

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.as_polynomial() is not None

    def as_polynomial(self) -> Polynomial | None:
        q, r = self.num.div(self.den)
        return None if r else q

    def __mul__(self, other: "KElement | Polynomial") -> "KElement":
        if isinstance(other, KElement):
            return KElement(self.num * other.num, self.den * other.den)
        return KElement(self.num * other, self.den)

    def __truediv__(self, other: "KElement | Polynomial") -> "KElement":
        if isinstance(other, KElement):
            return self * other.inverse()
        if not other:
            raise InputError("division by zero")
        return KElement(self.num, self.den * other)

    def __add__(self, other: "KElement") -> "KElement":
        if self.den == other.den:
            return KElement(self.num + other.num, self.den)
        return KElement(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "KElement":
        return KElement(-self.num, self.den)

    def __sub__(self, other: "KElement") -> "KElement":
        return self + (-other)

    def inverse(self) -> "KElement":
        if self.is_zero():
            raise InputError("inverse of zero")
        return KElement(self.den, self.num)

    def same_as(self, other: "KElement") -> bool:
        return self.num * other.den == other.num * self.den

    def format(self) -> str:
        if self.den == self.ring.one:
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"

    def __str__(self) -> str:
        return self.format()


def parse_k_element(ring: GradedRing, text: str | int) -> KElement:
    """Parse `p/q` style text (any rational expression) into num/den."""
    expr = parse_expression(ring.poly_ring, str(text))
    p, q = fraction(together(expr))
    num, den = ring.poly(str(p)), ring.poly(str(q))
    return KElement(num, den)


# -----------------------------
# Fractional ideals
# -----------------------------
@dataclass(frozen=True)
class FractionalIdeal:
    """(1/den) * numerator. Equality is semantic; use `equals`."""

    den: Polynomial
    numerator: Ideal

    def __post_init__(self) -> None:
        if not self.den:
            raise InputError("fractional ideal with zero denominator")
        if self.den.ring.symbols != self.numerator.ring.symbols:
            raise InputError("denominator and numerator ideal live in different rings")

    # constructors
    @classmethod
    def integral(cls, ideal: Ideal) -> "FractionalIdeal":
        return cls(ideal.ring.one, ideal)

    @classmethod
    def unit(cls, ring: GradedRing) -> "FractionalIdeal":
        return cls.integral(Ideal.unit(ring.poly_ring))

    @classmethod
    def principal(cls, z: KElement) -> "FractionalIdeal":
        return cls(z.den, Ideal(z.ring, (z.num,)))

    @classmethod
    def from_generators(cls, elements: Sequence[KElement]) -> "FractionalIdeal":
        if not elements:
            raise InputError("a fractional ideal needs at least one generator")
        common = elements[0].ring.one
        for d in dedupe(e.den.monic() for e in elements):
            common = common.lcm(d)
        gens = tuple(e.num * common.exquo(e.den) for e in elements)
        return cls(common, Ideal(common.ring, gens))

    # queries
    @property
    def ring(self):
        return self.numerator.ring

    def generators(self) -> list[KElement]:
        return [KElement(g, self.den) for g in self.numerator.generators]

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def is_integral(self) -> bool:
        return all(not g.rem(self.den) for g in self.numerator.generators)

    def integral_ideal(self) -> Ideal:
        """F ∩ R = (I ∩ (h)) / h."""
        if self.den == self.ring.one:
            return self.numerator
        meet = ideal_intersection(self.numerator, Ideal(self.ring, (self.den,)))
        return Ideal(self.ring, tuple(g.exquo(self.den) if g else g for g in meet.generators))

    # arithmetic
    def __add__(self, other: "FractionalIdeal") -> "FractionalIdeal":
        if self.den == other.den:
            return FractionalIdeal(self.den, Ideal(self.ring, self.numerator.generators + other.numerator.generators))
        gens = tuple(g * other.den for g in self.numerator.generators) + tuple(
            g * self.den for g in other.numerator.generators
        )
        return FractionalIdeal(self.den * other.den, Ideal(self.ring, gens))

    def __mul__(self, other: "FractionalIdeal") -> "FractionalIdeal":
        return FractionalIdeal(self.den * other.den, ideal_product(self.numerator, other.numerator))

    def scale(self, z: KElement) -> "FractionalIdeal":
        if z.is_zero():
            return FractionalIdeal(self.den, Ideal.zero(self.ring))
        return FractionalIdeal(self.den * z.den, scale_ideal(self.numerator, z.num))

    def power(self, k: int) -> "FractionalIdeal":
        out = FractionalIdeal(self.ring.one, Ideal.unit(self.ring))
        for _ in range(k):
            out = out * self
        return out

    def colon(self, other: "FractionalIdeal") -> "FractionalIdeal":
        """(E :_K F) = (1/(h*g1)) * ((g1*k*I) :_R J) for E = I/h, F = J/k."""
        gens = other.numerator.nonzero_generators
        if not gens:
            raise InputError("colon by the zero fractional ideal")
        g1 = gens[0]
        lifted = scale_ideal(self.numerator, g1 * other.den)
        return FractionalIdeal(self.den * g1, ideal_colon(lifted, other.numerator))

    def intersect(self, other: "FractionalIdeal") -> "FractionalIdeal":
        a = scale_ideal(self.numerator, other.den)
        b = scale_ideal(other.numerator, self.den)
        return FractionalIdeal(self.den * other.den, ideal_intersection(a, b))

    # membership
    def member(self, z: KElement) -> bool:
        """p/q ∈ (1/h)I  <=>  p*h ∈ q*I."""
        if z.ring.symbols != self.ring.symbols:
            raise InputError("arity mismatch")
        if z.is_zero():
            return True
        if self.is_zero():
            return False
        if z.den.is_ground:
            return self.numerator.contains(z.num * self.den)
        return scale_ideal(self.numerator, z.den).contains(z.num * self.den)

    def contains(self, other: "FractionalIdeal") -> bool:
        return all(self.member(g) for g in other.generators())

    def equals(self, other: "FractionalIdeal") -> bool:
        if self.den == other.den:
            return ideals_equal(self.numerator, other.numerator)
        return self.contains(other) and other.contains(self)

    def format(self) -> str:
        inner = ", ".join(format_poly(g) for g in self.numerator.generators)
        if self.den == self.ring.one:
            return f"({inner})"
        return f"(1/({format_poly(self.den)}))*({inner})"

    def as_dict(self) -> dict:
        return {"den": format_poly(self.den), "gens": [format_poly(g) for g in self.numerator.generators]}

    def __repr__(self) -> str:
        return f"FractionalIdeal{self.format()}"


def frac_arithmetic(E: FractionalIdeal, F: FractionalIdeal | None, op: str, z: KElement | None = None):
    """Dispatcher: sum, product, scale, colon, intersect, member, equal, contains."""
    op = (op or "").strip().lower()
    if op in ("member", "scale", "scale-by-k-element"):
        if z is None:
            raise InputError(f"operation {op!r} needs an element")
        return E.member(z) if op == "member" else E.scale(z)
    if F is None:
        raise InputError(f"operation {op!r} needs two fractional ideals")
    if op == "sum":
        return E + F
    if op == "product":
        return E * F
    if op == "colon":
        return E.colon(F)
    if op in ("intersect", "intersection"):
        return E.intersect(F)
    if op == "equal":
        return E.equals(F)
    if op == "contains":
        return E.contains(F)
    raise InputError(f"unknown fractional operation {op!r}")


# -----------------------------
# Divisorial closure
# -----------------------------
def v_closure(F: FractionalIdeal) -> FractionalIdeal:
    """F^v = (R :_K (R :_K F))."""
    if F.is_zero():
        raise InputError("divisorial closure of the zero ideal")
    R = FractionalIdeal(F.ring.one, Ideal.unit(F.ring))
    return R.colon(R.colon(F))


# -----------------------------
# Homogeneous quotient ring R_H
# -----------------------------
def clearing_ideal(z: KElement) -> Ideal:
    """((q) :_R p) for z = p/q: the elements s with s*z ∈ R."""
    return ideal_colon(Ideal(z.ring, (z.den,)), Ideal(z.ring, (z.num,)))


def rh_membership(z: KElement, ring: GradedRing, cap: int = SUBIDEAL_DEGREE) -> Verdict:
    """z ∈ R_H iff some nonzero homogeneous s has s*z ∈ R."""
    if z.is_zero():
        raise InputError("R_H membership of zero")
    if is_homogeneous(z.den, ring):
        return Verdict.true()
    return homogeneous_core_nonzero(clearing_ideal(z), ring, cap)


def homogeneous_components(z: KElement, ring: GradedRing, cap: int = SUBIDEAL_DEGREE) -> list[tuple[Degree, KElement]] | None:
    """Components of z ∈ R_H as K-elements with their (possibly negative) degrees.

    None when no homogeneous clearing element is found up to the cap.
    """
    if z.is_zero():
        return []
    if is_homogeneous(z.den, ring):
        s, w = z.den, z.num
    else:
        s = homogeneous_element(clearing_ideal(z), ring, cap)
        if s is None:
            return None
        w = (z.num * s).exquo(z.den)
    s_deg = decompose(s, ring)[0].degree
    return [
        (tuple(a - b for a, b in zip(c.degree, s_deg)), KElement(c.part, s))
        for c in decompose(w, ring)
    ]


def is_homogeneous_fractional(F: FractionalIdeal, ring: GradedRing, cap: int = SUBIDEAL_DEGREE) -> Verdict:
    """Some homogeneous s with sF ⊆ R makes sF a homogeneous ideal.

    Any one such s decides the question, so the answer is exact once s is found.
    """
    if F.is_zero():
        return Verdict.true()
    if is_homogeneous(F.den, ring):
        return Verdict.of(is_homogeneous_ideal(F.numerator, ring))
    clearing = ideal_colon(Ideal(F.ring, (F.den,)), F.numerator)
    s = homogeneous_element(clearing, ring, cap)
    if s is None:
        exists = homogeneous_core_nonzero(clearing, ring, cap)
        return Verdict.false() if exists.is_false else Verdict.unknown(cap)
    scaled = Ideal(F.ring, tuple((s * g).exquo(F.den) if g else g for g in F.numerator.generators))
    return Verdict.of(is_homogeneous_ideal(scaled, ring))


def is_homogeneous_element(z: KElement, ring: GradedRing) -> bool:
    """Ratio of homogeneous polynomials (a sufficient, representation-level test)."""
    return not z.is_zero() and is_homogeneous(z.num, ring) and is_homogeneous(z.den, ring)


# -----------------------------
# Closures
# -----------------------------
@dataclass
class ClosureHandle:
    """F^* for some star: a finitely generated value, or a membership oracle.

    `finite` answers exactly. Oracles answer with Verdicts and expose a capped
    enumeration of known members for sampled checks.
    """

    source: FractionalIdeal
    label: str
    finite: FractionalIdeal | None = None
    oracle: Callable[[KElement], Verdict] | None = None
    enumerate: Callable[[], list[KElement]] | None = None
    within_rh: bool | None = None
    lower: bool = False
    notes: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.finite is None and self.oracle is None:
            raise InputError(f"closure {self.label} has neither a value nor an oracle")

    @property
    def is_finite(self) -> bool:
        return self.finite is not None

    def contains(self, z: KElement) -> Verdict:
        if self.finite is not None:
            return Verdict.of(self.finite.member(z))
        return self.oracle(z)  # type: ignore[misc]

    def contains_ideal(self, G: FractionalIdeal) -> Verdict:
        return all_of(self.contains(g) for g in G.generators() if not g.is_zero())

    def samples(self) -> list[KElement]:
        """Known members: the generators for finite values, the capped enumeration otherwise."""
        if self.finite is not None:
            return [g for g in self.finite.generators() if not g.is_zero()]
        found = list(self.source.generators())
        if self.enumerate is not None:
            found += self.enumerate()
        out: list[KElement] = []
        for z in found:
            if z.is_zero() or any(z.same_as(w) for w in out):
                continue
            out.append(z)
        return out

    def lower_bound(self) -> FractionalIdeal:
        if self.finite is not None:
            return self.finite
        return FractionalIdeal.from_generators(self.samples())

    def describe(self) -> str:
        if self.finite is not None:
            kind = "lower approximation" if self.lower else "finite"
            return f"{self.label}: {kind} {self.finite.format()}"
        return f"{self.label}: oracle ({len(self.samples())} known members)"
