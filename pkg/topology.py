# topology.py
# Finite samples of Zar_h(R), Spec_h(R) and SStar(R): subbasic open membership,
# rewritten preimages of opens, specialization preorders, the overring
# retraction and principal-ultrafilter constructions.
# Every statement here is checked pointwise on the given sample only.

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Sequence, Union

import networkx as nx

from algebra_core import Ideal, Polynomial, equal as ideals_equal, format_poly
from fractional import FractionalIdeal, KElement, clearing_ideal, is_homogeneous_element
from grading import AuxPolynomial, GradedRing, components, homogeneous_core_generators, is_homogeneous
from grvaluation import GrValuation, in_ring_verdict
from kronecker import FunctionRingElement, gauss_extension
from semistar import (
    Adjoin,
    ExtendToOverring,
    Identity,
    Join,
    LocalizeComplement,
    Meet,
    Star,
    StarContext,
    eval_star,
)
from utils import InputError, dedupe, exponent_vectors
from verdict import CheckReport, CheckTally, Verdict, all_of, any_of

logger = logging.getLogger(__name__)

GR_VALUATION = "gr-valuation"
HOMOGENEOUS_PRIME = "homogeneous-prime"
SEMISTAR = "semistar"
POINT_KINDS = (GR_VALUATION, HOMOGENEOUS_PRIME, SEMISTAR)


# -----------------------------
# Points and subbasic opens
# -----------------------------
def point_kind(point: Any) -> str:
    if isinstance(point, GrValuation):
        return GR_VALUATION
    if isinstance(point, Ideal):
        return HOMOGENEOUS_PRIME
    if isinstance(point, Star):
        return SEMISTAR
    raise InputError(f"not a point of any sampled space: {point!r}")


def point_name(point: Any) -> str:
    kind = point_kind(point)
    if kind == GR_VALUATION:
        return point.name
    if kind == HOMOGENEOUS_PRIME:
        return point.format()
    return point.describe()


@dataclass
class PointSample:
    kind: str
    points: list[Any]
    names: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.kind not in POINT_KINDS:
            raise InputError(f"unknown point kind {self.kind!r} (expected one of {', '.join(POINT_KINDS)})")
        for p in self.points:
            if point_kind(p) != self.kind:
                raise InputError(f"{point_name(p)} is not a {self.kind} point")
        if not self.names:
            self.names = [point_name(p) for p in self.points]
        if len(self.names) != len(self.points):
            raise InputError("point names must match the point list")
        if len(set(self.names)) != len(self.names):
            raise InputError(f"duplicate point names in sample: {self.names}")

    def __len__(self) -> int:
        return len(self.points)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"no point named {name!r} in the sample") from None


def homogeneous_prime_sample(primes: Sequence[Ideal], ring: GradedRing) -> PointSample:
    for P in primes:
        if not all(is_homogeneous(g, ring) for g in P.nonzero_generators):
            raise InputError(f"homogeneous prime {P.format()} must be declared by homogeneous generators")
    return PointSample(HOMOGENEOUS_PRIME, list(primes))


@dataclass(frozen=True, eq=False)
class ZarOpen:
    """Zar_h(R[u_1, ..., u_k]); the empty tuple is the whole space."""

    elements: tuple[KElement, ...]
    kind = GR_VALUATION

    def describe(self) -> str:
        return "Zar_h(R[" + ", ".join(u.format() for u in self.elements) + "])"


@dataclass(frozen=True, eq=False)
class DhOpen:
    """D_h(f) = homogeneous primes not containing f."""

    f: Polynomial
    kind = HOMOGENEOUS_PRIME

    def describe(self) -> str:
        return f"D_h({format_poly(self.f)})"


@dataclass(frozen=True, eq=False)
class StarOpen:
    """V_E = {* : 1 ∈ E^*} (written W_E on the finite-type part)."""

    E: FractionalIdeal
    kind = SEMISTAR

    def describe(self) -> str:
        return f"W_{self.E.format()}"


SubbasicOpen = Union[ZarOpen, DhOpen, StarOpen]


def point_open_membership(point: Any, open_set: SubbasicOpen, ctx: StarContext | None = None) -> Verdict:
    kind = point_kind(point)
    if kind != open_set.kind:
        raise InputError(f"cannot test a {kind} point against {open_set.describe()}")
    if isinstance(open_set, ZarOpen):
        for u in open_set.elements:
            if not u.is_zero() and not is_homogeneous_element(u, point.ring):
                raise InputError(f"{u.format()} is not homogeneous")
        return all_of(in_ring_verdict(point.in_ring(u)) for u in open_set.elements)
    if isinstance(open_set, DhOpen):
        return Verdict.of(not point.contains(open_set.f))
    if ctx is None:
        raise InputError("semistar membership needs a ring context")
    one = KElement.of(ctx.ring.poly_ring.one)
    return eval_star(point, open_set.E, ctx).contains(one)


# -----------------------------
# Preimages of Zar_h opens
# -----------------------------
@dataclass
class RewrittenUnion:
    """Finite union of Zar_h(R[S]) pieces."""

    pieces: list[ZarOpen]

    def contains(self, V: GrValuation) -> Verdict:
        return any_of(point_open_membership(V, piece) for piece in self.pieces)

    def describe(self) -> str:
        return " ∪ ".join(p.describe() for p in self.pieces) or "∅"


def _as_function_element(x: KElement | FunctionRingElement) -> FunctionRingElement:
    if isinstance(x, FunctionRingElement):
        return x
    return FunctionRingElement(AuxPolynomial.of([x.num]), AuxPolynomial.of([x.den]))


def rewrite_union(x: KElement | FunctionRingElement, ring: GradedRing) -> RewrittenUnion:
    """Union over (i, j) of Zar_h(R[{a_l/a_i} ∪ {b_m/b_j} ∪ {a_i/b_j}]).

    a_l, b_m range over the homogeneous components of all numerator and
    denominator coefficients.
    """
    alpha = _as_function_element(x)
    a = [c for coeff in alpha.num.coefficients if coeff for c in components(coeff, ring)]
    b = [c for coeff in alpha.den.coefficients if coeff for c in components(coeff, ring)]
    if not a:
        return RewrittenUnion([ZarOpen(())])
    pieces = []
    for ai in a:
        for bj in b:
            elements = [KElement(al, ai) for al in a if al != ai]
            elements += [KElement(bm, bj) for bm in b if bm != bj]
            elements.append(KElement(ai, bj))
            pieces.append(ZarOpen(tuple(elements)))
    return RewrittenUnion(pieces)


def preimage_rewrites(x: KElement | FunctionRingElement, sample: Sequence[GrValuation]) -> tuple[RewrittenUnion, CheckReport]:
    """Rewrite {V : x ∈ V_{M_V}(X)} as a union of Zar_h opens and compare both sides on the sample."""
    if not sample:
        raise InputError("preimage_rewrites needs at least one valuation")
    ring = sample[0].ring
    alpha = _as_function_element(x)
    union = rewrite_union(alpha, ring)
    tally = CheckTally("preimage_rewrite")
    for V in sample:
        left = gauss_extension(V).contains(alpha)
        right = union.contains(V)
        if right.is_unknown:
            tally.add(right)
            continue
        tally.add(Verdict.of(left == right.is_true), V.name, f"Gauss: {left}", f"union: {right.label()}")
    logger.debug("%s rewritten into %d pieces", alpha.format(), len(union.pieces))
    return union, tally.report(element=alpha.format(), pieces=len(union.pieces))


def phi_preimage_check(u: KElement, sample: Sequence[GrValuation]) -> CheckReport:
    """V ∈ Zar_h(R[u]) exactly when u ∈ V_{M_V}(X), for homogeneous u."""
    tally = CheckTally("phi_preimage")
    opened = ZarOpen((u,))
    constant = _as_function_element(u)
    for V in sample:
        left = point_open_membership(V, opened)
        right = gauss_extension(V).contains(constant)
        if left.is_unknown:
            tally.add(left)
            continue
        tally.add(Verdict.of(left.is_true == right), V.name, f"Zar_h: {left.label()}", f"Gauss: {right}")
    return tally.report(element=u.format())


# -----------------------------
# Specialization preorder
# -----------------------------
@dataclass
class Preorder:
    """p <= q iff every open of the family containing p contains q."""

    names: list[str]
    graph: nx.DiGraph
    unknown_pairs: list[tuple[str, str]] = field(default_factory=list)

    def le(self, p: str, q: str) -> bool:
        return self.graph.has_edge(p, q)

    def is_reflexive(self) -> bool:
        return all(self.graph.has_edge(n, n) for n in self.names)

    def is_transitive(self) -> bool:
        closure = nx.transitive_closure(self.graph, reflexive=True)
        return set(closure.edges) == set(self.graph.edges)

    def adjacency(self) -> dict[str, list[str]]:
        return {n: sorted(qs, key=self.names.index) for n, qs in nx.to_dict_of_lists(self.graph).items()}


def membership_matrix(sample: PointSample, family: Sequence[SubbasicOpen],
                      ctx: StarContext | None = None) -> list[list[Verdict]]:
    return [[point_open_membership(p, O, ctx) for O in family] for p in sample.points]


def specialization_and_t0(sample: PointSample, family: Sequence[SubbasicOpen],
                          ctx: StarContext | None = None) -> tuple[Preorder, Verdict]:
    matrix = membership_matrix(sample, family, ctx)
    graph = nx.DiGraph()
    graph.add_nodes_from(sample.names)
    unknown: list[tuple[str, str]] = []
    relation: dict[tuple[int, int], Verdict] = {}
    for i, p in enumerate(sample.names):
        for j, q in enumerate(sample.names):
            # p in O implies q in O, for every O
            le = all_of(any_of([matrix[i][k].negate(), matrix[j][k]]) for k in range(len(family)))
            relation[i, j] = le
            if le.is_true:
                graph.add_edge(p, q)
            elif le.is_unknown:
                unknown.append((p, q))
    t0 = all_of(
        all_of([relation[i, j], relation[j, i]]).negate()
        for i, j in combinations(range(len(sample)), 2)
    )
    preorder = Preorder(list(sample.names), graph, unknown)
    logger.debug("specialization on %d points: %d relations, T0 %s", len(sample), graph.number_of_edges(), t0.label())
    return preorder, t0


def specialization_report(sample: PointSample, family: Sequence[SubbasicOpen],
                          ctx: StarContext | None = None) -> CheckReport:
    preorder, t0 = specialization_and_t0(sample, family, ctx)
    witnesses = []
    if t0.is_false:
        witnesses = [(p, q) for p, q in combinations(preorder.names, 2) if preorder.le(p, q) and preorder.le(q, p)][:5]
    return CheckReport(
        "specialization_t0",
        t0,
        witnesses=witnesses,
        checks_run=len(sample) * len(family),
        notes=[f"undecided relation {p} <= {q}" for p, q in preorder.unknown_pairs],
        details={"family": [O.describe() for O in family], "preorder": preorder.adjacency()},
    )


# -----------------------------
# Overrings and stars
# -----------------------------
def iota(T: Adjoin | LocalizeComplement) -> ExtendToOverring:
    """Overring T -> the extension star F -> FT."""
    return ExtendToOverring(T)


def pi(star: Star, ctx: StarContext):
    """Star -> R^* (as a closure handle of the unit ideal)."""
    return eval_star(star, FractionalIdeal.unit(ctx.ring), ctx)


def overring_contains(T: Adjoin | LocalizeComplement, z: KElement, ctx: StarContext) -> Verdict:
    """z ∈ T, decided from T's own description."""
    if z.is_zero():
        return Verdict.true()
    if isinstance(T, Adjoin):
        one = KElement.of(ctx.ring.poly_ring.one)
        for m in range(ctx.caps.ascent + 1):
            words = []
            for e in exponent_vectors(len(T.elements), m):
                w = one
                for u, k in zip(T.elements, e):
                    for _ in range(k):
                        w = w * u
                words.append(w)
            if FractionalIdeal.from_generators(words).member(z):
                return Verdict.true()
        return Verdict.unknown(ctx.caps.ascent)
    # some admissible s outside P has s*z ∈ R
    P, ring = T.prime, ctx.ring
    A = clearing_ideal(z)
    if P.contains_ideal(A):
        return Verdict.false()
    if not T.homogeneous:
        return Verdict.true()
    if any(is_homogeneous(g, ring) and not P.contains(g) for g in A.reduced_generators()):
        return Verdict.true()
    core = homogeneous_core_generators(A, ring, ctx.caps.subideal_degree)
    if any(not P.contains(g) for g in core.nonzero_generators):
        return Verdict.true()
    return Verdict.unknown(ctx.caps.subideal_degree)


def retraction_checks(overrings: Sequence[Adjoin | LocalizeComplement], stars: Sequence[Star],
                      us: Sequence[KElement], ctx: StarContext) -> CheckReport:
    """pi(iota(T)) = T on samples, and u ∈ R^sigma <=> 1 ∈ (u^-1 R)^sigma."""
    tally = CheckTally("retraction")
    one = KElement.of(ctx.ring.poly_ring.one)
    for T in overrings:
        if isinstance(T, ExtendToOverring):
            T = T.overring
        back = pi(iota(T), ctx)
        declared = list(T.elements) if isinstance(T, Adjoin) else []
        for u in [one, *declared]:
            tally.add(back.contains(u), T.describe(), f"{u.format()} missing from R^iota(T)")
        for z in back.samples():
            tally.add(overring_contains(T, z, ctx), T.describe(), f"{z.format()} in R^iota(T) but not in T")
    for sigma in stars:
        for u in us:
            if u.is_zero():
                raise InputError("retraction check needs nonzero u")
            left = pi(sigma, ctx).contains(u)
            right = eval_star(sigma, FractionalIdeal.principal(u.inverse()), ctx).contains(one)
            if left.is_unknown or right.is_unknown:
                tally.add(Verdict.unknown(max(v.cap or 0 for v in (left, right))))
                continue
            tally.add(Verdict.of(left.is_true == right.is_true), sigma.describe(), u.format(),
                      f"u in R^*: {left.label()}", f"1 in (u^-1 R)^*: {right.label()}")
    return tally.report(overrings=[T.describe() for T in overrings], stars=[s.describe() for s in stars])


# -----------------------------
# Principal ultrafilters on finite samples
# -----------------------------
def _default_h_sample(sample: PointSample, ring: GradedRing) -> list[Polynomial]:
    cands = list(ring.poly_ring.gens)
    for P in sample.points:
        cands += P.nonzero_generators
    return [f for f in dedupe(cands) if is_homogeneous(f, ring)]


def ultrafilter_finite(sample: PointSample, principal: str, ctx: StarContext,
                       family: Sequence[StarOpen] = (), h_sample: Sequence[Polynomial] | None = None):
    """Object built from the principal ultrafilter at `principal` (finite analog) and its check."""
    p = sample.points[sample.index(principal)]
    if sample.kind == HOMOGENEOUS_PRIME:
        return _prime_from_ultrafilter(sample, p, principal, ctx, h_sample)
    if sample.kind == SEMISTAR:
        return _star_from_ultrafilter(sample, p, principal, ctx, family)
    raise InputError(f"ultrafilter construction is not defined for {sample.kind} samples")


def _prime_from_ultrafilter(sample: PointSample, p: Ideal, name: str, ctx: StarContext,
                            h_sample: Sequence[Polynomial] | None) -> tuple[Ideal, CheckReport]:
    ring = ctx.ring
    hs = list(h_sample) if h_sample is not None else _default_h_sample(sample, ring)
    # V_h(f) ∩ Y lies in the principal ultrafilter iff p ∈ V_h(f)
    chosen = [f for f in hs if is_homogeneous(f, ring) and p.contains(f)]
    built = Ideal(ring.poly_ring, tuple(chosen)) if chosen else Ideal.zero(ring.poly_ring)
    tally = CheckTally("ultrafilter_prime")
    tally.add(Verdict.of(ideals_equal(built, p)), name, f"built {built.format()}")
    return built, tally.report(principal=name, built=built.format(), kind="finite analog")


def _star_from_ultrafilter(sample: PointSample, p: Star, name: str, ctx: StarContext,
                           family: Sequence[StarOpen]) -> tuple[Star, CheckReport]:
    if not family:
        raise InputError("semistar ultrafilter construction needs a subbasis family")
    matrix = membership_matrix(sample, family, ctx)
    i = sample.index(name)
    tally = CheckTally("ultrafilter_star")
    meets: list[Star] = []
    for k, W in enumerate(family):
        if matrix[i][k].is_unknown:
            tally.note(f"membership of {name} in {W.describe()} undecided; skipped")
            continue
        if not matrix[i][k].is_true:
            continue
        members = [s for j, s in enumerate(sample.points) if matrix[j][k].is_true]
        meets.append(Meet(tuple(members)))
    if meets:
        built: Star = Join(tuple(meets))
    else:
        built = Identity()
    for k, W in enumerate(family):
        got = point_open_membership(built, W, ctx)
        want = matrix[i][k]
        if got.is_unknown or want.is_unknown:
            tally.add(Verdict.unknown(ctx.caps.join))
            continue
        tally.add(Verdict.of(got.is_true == want.is_true), W.describe(), f"built: {got.label()}", f"{name}: {want.label()}")
    return built, tally.report(principal=name, built=built.describe(), kind="finite analog")
