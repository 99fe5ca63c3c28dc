# grading.py
# Z^d-gradings of Q[x1..xn] by a nonnegative degree matrix: homogeneous
# decomposition, content ideals C(f) / A_F, homogeneity tests, and the
# Dedekind-Mertens machinery used to build homogeneous witnesses.

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyRing

from algebra_core import (
    Ideal,
    Polynomial,
    format_poly,
    ideal_power,
    ideal_product,
    ideal_sum,
    make_ring,
    monomial,
    parse_poly,
)
from config import DM_BOUND, SUBIDEAL_DEGREE
from utils import InputError, dedupe, exponent_vectors, format_vector
from verdict import Verdict

logger = logging.getLogger(__name__)

Degree = tuple[int, ...]


# -----------------------------
# Graded ring
# -----------------------------
@dataclass(frozen=True)
class GradedRing:
    """Q[variables] graded by the columns of `degrees` (d rows, one column per variable)."""

    variables: tuple[str, ...]
    degrees: tuple[tuple[int, ...], ...]
    name: str = field(default="R", compare=False)

    def __post_init__(self) -> None:
        variables = tuple(str(v) for v in self.variables)
        rows = tuple(tuple(int(x) for x in row) for row in self.degrees)
        if not rows:
            rows = (tuple(0 for _ in variables),)
        if any(len(r) != len(variables) for r in rows):
            raise InputError(
                f"degree matrix rows must have {len(variables)} entries, got {[len(r) for r in rows]}"
            )
        if any(x < 0 for r in rows for x in r):
            raise InputError("degree matrix entries must be nonnegative")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "degrees", rows)
        make_ring(variables)  # validates names

    @classmethod
    def of(cls, variables: Sequence[str], degrees: Sequence[Sequence[int]], name: str = "R") -> "GradedRing":
        return cls(tuple(variables), tuple(tuple(r) for r in degrees), name)

    @cached_property
    def poly_ring(self) -> PolyRing:
        return make_ring(self.variables)

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.degrees, dtype=np.int64)

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def arity(self) -> int:
        return len(self.variables)

    @property
    def is_trivially_graded(self) -> bool:
        return not self.matrix.any()

    def degree_of(self, exps: Sequence[int]) -> Degree:
        return tuple(int(v) for v in self.matrix @ np.asarray(exps, dtype=np.int64))

    def variable_degree(self, i: int) -> Degree:
        return tuple(int(v) for v in self.matrix[:, i])

    # text helpers
    def poly(self, text: str | int) -> Polynomial:
        return parse_poly(self.poly_ring, text)

    def ideal(self, *texts: str | int) -> Ideal:
        return Ideal(self.poly_ring, tuple(self.poly(t) for t in texts))

    def monomial(self, exps: Sequence[int]) -> Polynomial:
        return monomial(self.poly_ring, exps)

    def owns(self, f: Polynomial) -> bool:
        return f.ring.symbols == self.poly_ring.symbols

    def describe(self) -> str:
        degs = ", ".join(f"deg {v} = {format_vector(self.variable_degree(i))}" for i, v in enumerate(self.variables))
        return f"{self.name} = Q[{', '.join(self.variables)}] ({degs})"


# -----------------------------
# Decomposition
# -----------------------------
@dataclass(frozen=True)
class HomogeneousComponent:
    degree: Degree
    part: Polynomial

    def format(self) -> str:
        return f"{format_vector(self.degree)}: {format_poly(self.part)}"


def decompose(f: Polynomial, ring: GradedRing) -> list[HomogeneousComponent]:
    """Homogeneous components of f sorted lexicographically by degree (zero -> [])."""
    buckets: dict[Degree, dict] = {}
    for exps, c in f.items():
        buckets.setdefault(ring.degree_of(exps), {})[exps] = c
    return [
        HomogeneousComponent(deg, f.ring.from_dict(terms))
        for deg, terms in sorted(buckets.items())
    ]


def components(f: Polynomial, ring: GradedRing) -> list[Polynomial]:
    return [c.part for c in decompose(f, ring)]


def homogeneous_degree(f: Polynomial, ring: GradedRing) -> Degree | None:
    comps = decompose(f, ring)
    return comps[0].degree if len(comps) == 1 else None


def is_homogeneous(f: Polynomial, ring: GradedRing) -> bool:
    """Zero counts as homogeneous (it lies in every R_alpha)."""
    return len(decompose(f, ring)) <= 1


# -----------------------------
# Content ideals
# -----------------------------
def content_C(f: Polynomial, ring: GradedRing) -> Ideal:
    """C(f): the ideal generated by the homogeneous components of f."""
    if not f:
        raise InputError("content of the zero polynomial")
    return Ideal(f.ring, tuple(components(f, ring)))


@dataclass(frozen=True)
class AuxPolynomial:
    """F = sum_i coefficients[i] * X^i in R[X]; trailing zeros trimmed."""

    coefficients: tuple[Polynomial, ...]

    def __post_init__(self) -> None:
        coeffs = list(self.coefficients)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def of(cls, coeffs: Iterable[Polynomial]) -> "AuxPolynomial":
        return cls(tuple(coeffs))

    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __mul__(self, other: "AuxPolynomial") -> "AuxPolynomial":
        if self.is_zero() or other.is_zero():
            return AuxPolynomial(())
        ring = self.coefficients[0].ring
        out = [ring.zero] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return AuxPolynomial(tuple(out))

    def format(self) -> str:
        terms = []
        for i, c in enumerate(self.coefficients):
            if c:
                terms.append(f"({format_poly(c)})" + ("" if i == 0 else f"*X^{i}"))
        return " + ".join(terms) or "0"


def content_A(F: AuxPolynomial, ring: GradedRing) -> Ideal:
    """A_F = sum_i C(f_i), the homogeneous content of F in R[X]."""
    parts = [content_C(c, ring) for c in F.coefficients if c]
    if not parts:
        raise InputError("homogeneous content of the zero polynomial")
    out = parts[0]
    for p in parts[1:]:
        out = ideal_sum(out, p)
    return out


def content_c(F: AuxPolynomial) -> Ideal:
    """Classical coefficient ideal c(F) = (f_0, ..., f_n)."""
    gens = tuple(c for c in F.coefficients if c)
    if not gens:
        raise InputError("content of the zero polynomial")
    return Ideal(gens[0].ring, gens)


# -----------------------------
# Homogeneity tests
# -----------------------------
def is_homogeneous_ideal(ideal: Ideal, ring: GradedRing) -> bool:
    return all(ideal.contains(c) for g in ideal.nonzero_generators for c in components(g, ring))


def in_homogeneous_core(f: Polynomial, ideal: Ideal, ring: GradedRing) -> bool:
    """f lies in the largest homogeneous subideal of I iff all its components lie in I."""
    return all(ideal.contains(c) for c in components(f, ring))


def _group_monomials(ring: GradedRing, cap: int) -> dict[Degree, list[tuple[int, ...]]]:
    groups: dict[Degree, list[tuple[int, ...]]] = {}
    for e in exponent_vectors(ring.arity, cap):
        groups.setdefault(ring.degree_of(e), []).append(e)
    return groups


def _homogeneous_members(ideal: Ideal, ring: GradedRing, exps: list[tuple[int, ...]]) -> list[Polynomial]:
    """A basis of span(monomials) ∩ I, by linear algebra on normal forms."""
    basis = ideal.basis()
    monos = [ring.monomial(e) for e in exps]
    forms = [basis.normal_form(m) for m in monos]
    support = sorted({m for nf in forms for m in nf.keys()})
    if not support:
        return monos
    index = {m: i for i, m in enumerate(support)}
    rows = [[QQ.zero] * len(monos) for _ in support]
    for j, nf in enumerate(forms):
        for m, c in nf.items():
            rows[index[m]][j] = c
    null = DomainMatrix(rows, (len(support), len(monos)), QQ).nullspace().to_Matrix()
    out = []
    for r in range(null.rows):
        vec = [QQ.from_sympy(null[r, j]) for j in range(null.cols)]
        f = ring.poly_ring.zero
        for c, m in zip(vec, monos):
            if c:
                f += m * c
        if f:
            out.append(f.monic())
    return out


def homogeneous_core_generators(ideal: Ideal, ring: GradedRing, cap: int = SUBIDEAL_DEGREE) -> Ideal:
    """Generators of I^h found among elements of total degree <= cap.

    Sound, but only complete up to the cap. Returns the zero ideal when nothing is found.
    """
    found: list[Polynomial] = []
    if ideal.is_zero():
        return Ideal.zero(ring.poly_ring)
    for deg, exps in sorted(_group_monomials(ring, cap).items()):
        for h in _homogeneous_members(ideal, ring, exps):
            if found and Ideal(ring.poly_ring, tuple(found)).contains(h):
                continue
            found.append(h)
    logger.debug("homogeneous core: %d generators up to total degree %d", len(found), cap)
    return Ideal(ring.poly_ring, tuple(found) or (ring.poly_ring.zero,))


def homogeneous_core_nonzero(ideal: Ideal, ring: GradedRing, cap: int = SUBIDEAL_DEGREE) -> Verdict:
    """Does I contain a nonzero homogeneous element?"""
    if ideal.is_zero():
        return Verdict.false()
    if ring.is_trivially_graded:
        return Verdict.true()
    if any(is_homogeneous(g, ring) for g in ideal.nonzero_generators):
        return Verdict.true()
    gen = ideal.principal_generator()
    if gen is not None:
        # homogeneous multiples of g force g homogeneous
        return Verdict.of(is_homogeneous(gen, ring))
    if any(is_homogeneous(g, ring) for g in ideal.reduced_generators()):
        return Verdict.true()
    if not homogeneous_core_generators(ideal, ring, cap).is_zero():
        return Verdict.true()
    logger.debug("homogeneous core search exhausted at total degree %d", cap)
    return Verdict.unknown(cap)


def homogeneous_element(ideal: Ideal, ring: GradedRing, cap: int = SUBIDEAL_DEGREE) -> Polynomial | None:
    """Some nonzero homogeneous member of I, or None when none is found up to the cap."""
    if ideal.is_zero():
        return None
    for g in ideal.nonzero_generators:
        if is_homogeneous(g, ring):
            return g
    for g in ideal.reduced_generators():
        if g and is_homogeneous(g, ring):
            return g
    if ideal.principal_generator() is not None:
        return None
    core = homogeneous_core_generators(ideal, ring, cap)
    return None if core.is_zero() else core.generators[0]


def homogeneity_tests(target, ring: GradedRing, mode: str, *, element: Polynomial | None = None,
                      cap: int = SUBIDEAL_DEGREE):
    """Dispatcher over the four homogeneity modes."""
    mode = (mode or "").strip().lower()
    if mode == "ideal-is-homogeneous":
        return is_homogeneous_ideal(target, ring)
    if mode == "element-in-largest-homogeneous-subideal":
        if element is None:
            raise InputError("element mode needs an element")
        return in_homogeneous_core(element, target, ring)
    if mode == "capped-subideal-generators":
        return homogeneous_core_generators(target, ring, cap)
    if mode == "subideal-nonzero":
        return homogeneous_core_nonzero(target, ring, cap)
    raise InputError(f"unknown homogeneity mode {mode!r}")


# -----------------------------
# Dedekind-Mertens
# -----------------------------
@dataclass(frozen=True)
class DedekindMertens:
    exponent: int | None
    bound: int

    @property
    def found(self) -> bool:
        return self.exponent is not None

    def describe(self) -> str:
        return f"m = {self.exponent}" if self.found else f"no exponent <= {self.bound}"


def dedekind_mertens_exponent(f: Polynomial, g: Polynomial, ring: GradedRing, bound: int = DM_BOUND) -> DedekindMertens:
    """Least m in [2, bound] with C(g)^m C(f) = C(g)^(m-1) C(fg)."""
    if not f or not g:
        raise InputError("Dedekind-Mertens exponent needs nonzero polynomials")
    if bound < 2:
        raise InputError(f"Dedekind-Mertens bound must be >= 2, got {bound}")
    cf, cg, cfg = content_C(f, ring), content_C(g, ring), content_C(f * g, ring)
    # C(g)^(m-1) C(fg) ⊆ C(g)^m C(f) always holds; only the other inclusion is tested
    power = cg  # C(g)^(m-1)
    for m in range(2, bound + 1):
        lhs = ideal_product(ideal_product(power, cg), cf)
        rhs = ideal_product(power, cfg)
        if rhs.contains_ideal(lhs):
            return DedekindMertens(m, bound)
        power = Ideal(ring.poly_ring, tuple(ideal_product(power, cg).reduced_generators()))
    logger.debug("Dedekind-Mertens bound %d exhausted for f=%s g=%s", bound, format_poly(f), format_poly(g))
    return DedekindMertens(None, bound)


@dataclass(frozen=True)
class WitnessJ0:
    J0: Ideal | None
    exponent: int | None
    generators: int
    homogeneous: bool
    contained: bool
    bound: int

    @property
    def ok(self) -> bool:
        return self.J0 is not None and self.homogeneous and self.contained

    def as_dict(self) -> dict:
        return {
            "J0": self.J0.format() if self.J0 is not None else None,
            "m": self.exponent,
            "n": self.generators,
            "J0_homogeneous": self.homogeneous,
            "CfJ0_in_I": self.contained,
            "bound": self.bound,
        }


def homogeneous_witness_J0(f: Polynomial, J: Ideal, I: Ideal, ring: GradedRing,
                           bound: int = DM_BOUND) -> WitnessJ0:
    """J0 = (C(g_1) + ... + C(g_n))^(n*m) with the homogeneity and containment certificate."""
    if not is_homogeneous_ideal(I, ring):
        raise InputError(f"I = {I.format()} is not homogeneous")
    gens = J.nonzero_generators
    if not gens or not f:
        raise InputError("witness J0 needs nonzero f and J")
    if not all(I.contains(f * g) for g in gens):
        raise InputError(f"f*J is not contained in I = {I.format()}")

    exps = [dedekind_mertens_exponent(f, g, ring, bound) for g in gens]
    if not all(e.found for e in exps):
        return WitnessJ0(None, None, len(gens), False, False, bound)
    m = max(e.exponent for e in exps)  # type: ignore[type-var]
    n = len(gens)
    total = content_C(gens[0], ring)
    for g in gens[1:]:
        total = ideal_sum(total, content_C(g, ring))
    J0 = Ideal(ring.poly_ring, tuple(dedupe(ideal_power(total, n * m).reduced_generators())))
    homogeneous = is_homogeneous_ideal(J0, ring)
    contained = I.contains_ideal(ideal_product(content_C(f, ring), J0))
    return WitnessJ0(J0, m, n, homogeneous, contained, bound)
