# semistar.py
# Semistar operation descriptors, their finite-type evaluation on finitely
# generated fractional ideals, and the property checks / approximations
# built on top (axioms, comparison, homogeneity, e.a.b., stability, ...).

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Sequence

from algebra_core import (
    Ideal,
    Polynomial,
    equal as ideals_equal,
    ideal_colon,
    ideal_power,
    is_term,
    scale_ideal,
    total_degree,
)
from config import DEFAULT_CAPS, Caps
from corpus import TestCorpus
from fractional import (
    ClosureHandle,
    FractionalIdeal,
    KElement,
    homogeneous_components,
    is_homogeneous_fractional,
    is_homogeneous_element,
    rh_membership,
    v_closure,
)
from grading import (
    GradedRing,
    components,
    homogeneous_core_generators,
    is_homogeneous,
    is_homogeneous_ideal,
)
from grvaluation import GrValuation, b_closure_fractional, wedge_Y_closure
from utils import InputError, dedupe, exponent_vectors
from verdict import CheckReport, CheckTally, Verdict, all_of

logger = logging.getLogger(__name__)

# =========================
# CONFIG
# =========================
# a join ascent stops (reporting unknown) once a lower bound grows past this many generators
JOIN_GENERATOR_LIMIT = 48


@dataclass(frozen=True)
class StarContext:
    ring: GradedRing
    caps: Caps = DEFAULT_CAPS

    def with_caps(self, overrides) -> "StarContext":
        return StarContext(self.ring, self.caps.override(overrides))


# -----------------------------
# Descriptors
# -----------------------------
class Star:
    tag = "star"

    def describe(self) -> str:
        return self.tag


@dataclass(frozen=True, eq=False)
class Identity(Star):
    tag = "identity"

    def describe(self) -> str:
        return "d"


@dataclass(frozen=True, eq=False)
class Divisorial(Star):
    tag = "divisorial"

    def describe(self) -> str:
        return "v"


@dataclass(frozen=True, eq=False)
class NewtonClosure(Star):
    """b on monomial fractional ideals (Newton polyhedron closure)."""

    tag = "b_monomial"

    def describe(self) -> str:
        return "b"


@dataclass(frozen=True, eq=False)
class Adjoin:
    """Overring R[u_1, ..., u_k]."""

    elements: tuple[KElement, ...]

    def describe(self) -> str:
        return "R[" + ", ".join(u.format() for u in self.elements) + "]"


@dataclass(frozen=True, eq=False)
class LocalizeComplement:
    """R_{H \\ p} when homogeneous, else R_p."""

    prime: Ideal
    homogeneous: bool = True

    def describe(self) -> str:
        return ("R_{H\\" if self.homogeneous else "R_{") + self.prime.format() + "}"


@dataclass(frozen=True, eq=False)
class ExtendToOverring(Star):
    overring: Adjoin | LocalizeComplement
    tag = "extend"

    def describe(self) -> str:
        return f"extend({self.overring.describe()})"


@dataclass(frozen=True, eq=False)
class MeetValuations(Star):
    valuations: tuple[GrValuation, ...]
    tag = "meet_valuations"

    def describe(self) -> str:
        return "wedge(" + ", ".join(V.name for V in self.valuations) + ")"


@dataclass(frozen=True, eq=False)
class LocalizeAtPrimes(Star):
    primes: tuple[Ideal, ...]
    tag = "localize"

    def describe(self) -> str:
        return "h(" + ", ".join(p.format() for p in self.primes) + ")"


@dataclass(frozen=True, eq=False)
class Meet(Star):
    stars: tuple[Star, ...]
    tag = "meet"

    def describe(self) -> str:
        return "meet(" + ", ".join(s.describe() for s in self.stars) + ")"


@dataclass(frozen=True, eq=False)
class Join(Star):
    stars: tuple[Star, ...]
    cap: int | None = None
    tag = "join"

    def describe(self) -> str:
        return "join(" + ", ".join(s.describe() for s in self.stars) + ")"


@dataclass(frozen=True, eq=False)
class StableApprox(Star):
    star: Star
    family: tuple[Ideal, ...] | None = None
    tag = "stable_approx"

    def describe(self) -> str:
        return f"stable({self.star.describe()})"


@dataclass(frozen=True, eq=False)
class EabHApprox(Star):
    star: Star
    family: tuple[Ideal, ...] | None = None
    tag = "eab_h_approx"

    def describe(self) -> str:
        return f"a_h({self.star.describe()})"


@dataclass(frozen=True, eq=False)
class Custom(Star):
    """Arbitrary finite map F -> F^*, used for negative controls."""

    label: str
    fn: Callable[[FractionalIdeal], FractionalIdeal]
    tag = "custom"

    def describe(self) -> str:
        return self.label


# -----------------------------
# Evaluation
# -----------------------------
def eval_star(star: Star, F: FractionalIdeal, ctx: StarContext) -> ClosureHandle:
    if F.is_zero():
        raise InputError("semistar operations are evaluated on nonzero ideals")
    label = star.describe()
    if isinstance(star, Identity):
        return ClosureHandle(F, label, finite=F)
    if isinstance(star, Divisorial):
        return ClosureHandle(F, label, finite=v_closure(F))
    if isinstance(star, NewtonClosure):
        return ClosureHandle(F, label, finite=b_closure_fractional(F))
    if isinstance(star, Custom):
        return ClosureHandle(F, label, finite=star.fn(F))
    if isinstance(star, ExtendToOverring):
        if isinstance(star.overring, Adjoin):
            return _adjoin_handle(star.overring, F, ctx, label)
        return _localization_handle(star.overring, F, ctx, label)
    if isinstance(star, MeetValuations):
        handle = wedge_Y_closure(F, star.valuations, ctx.caps)
        handle.label = label
        return handle
    if isinstance(star, LocalizeAtPrimes):
        if not star.primes:
            raise InputError("localize needs at least one prime")
        parts = [_localization_handle(LocalizeComplement(p, True), F, ctx, label) for p in star.primes]
        return meet_handles(F, parts, label)
    if isinstance(star, Meet):
        if not star.stars:
            raise InputError("meet of an empty family")
        return meet_handles(F, [eval_star(s, F, ctx) for s in star.stars], label)
    if isinstance(star, Join):
        return _join_handle(star, F, ctx, label)
    if isinstance(star, StableApprox):
        return _stable_handle(star, F, ctx, label)
    if isinstance(star, EabHApprox):
        return _eab_h_handle(star, F, ctx, label)
    raise InputError(f"unknown semistar descriptor {star!r}")


def _adjoin_handle(T: Adjoin, F: FractionalIdeal, ctx: StarContext, label: str) -> ClosureHandle:
    us = list(T.elements)
    if all(u.is_polynomial() for u in us):
        return ClosureHandle(F, label, finite=F)
    gens = [g for g in F.generators() if not g.is_zero()]
    ring = ctx.ring

    def module(m: int) -> list[KElement]:
        out = []
        for e in exponent_vectors(len(us), m):
            w = KElement.of(ring.poly_ring.one)
            for u, k in zip(us, e):
                for _ in range(k):
                    w = w * u
            out += [g * w for g in gens]
        return out

    steps: dict[int, FractionalIdeal] = {}

    def oracle(z: KElement) -> Verdict:
        if z.is_zero():
            return Verdict.true()
        for m in range(ctx.caps.ascent + 1):
            if m not in steps:
                steps[m] = FractionalIdeal.from_generators(module(m))
            if steps[m].member(z):
                return Verdict.true()
        logger.debug("overring ascent exhausted at cap %d for %s", ctx.caps.ascent, z.format())
        return Verdict.unknown(ctx.caps.ascent)

    within = True if all(is_homogeneous_element(u, ring) for u in us) else None
    return ClosureHandle(F, label, oracle=oracle, enumerate=lambda: module(ctx.caps.sample_degree), within_rh=within)


def _check_prime(P: Ideal, homogeneous: bool, ring: GradedRing) -> None:
    gens = P.nonzero_generators
    if not gens:
        raise InputError("the zero ideal is not a declared prime here")
    if homogeneous and not all(is_homogeneous(g, ring) for g in gens):
        raise InputError(f"prime {P.format()} must have homogeneous generators")
    if all(is_term(g) for g in gens) and any(total_degree(g) != 1 for g in gens):
        raise InputError(f"monomial ideal {P.format()} is not prime")
    if P.is_unit():
        raise InputError(f"{P.format()} is the unit ideal")


def _sample_denominators(P: Ideal, homogeneous: bool, F: FractionalIdeal, ring: GradedRing) -> list[Polynomial]:
    pr = ring.poly_ring
    cands: list[Polynomial] = []
    for x in pr.gens:
        cands.append(x)
    for x in pr.gens:
        for c in (1, -1, 2, -2):
            cands.append(x + c)
    for i, x in enumerate(pr.gens):
        for y in pr.gens[i:]:
            cands.append(x * y)
    for g in F.numerator.nonzero_generators:
        cands += components(g, ring)
    out = []
    for s in dedupe(cands):
        if not s or P.contains(s):
            continue
        if homogeneous and not is_homogeneous(s, ring):
            continue
        out.append(s)
    return out


def _localization_handle(L: LocalizeComplement, F: FractionalIdeal, ctx: StarContext, label: str) -> ClosureHandle:
    ring, P, cap = ctx.ring, L.prime, ctx.caps.subideal_degree
    _check_prime(P, L.homogeneous, ring)

    def oracle(z: KElement) -> Verdict:
        if z.is_zero():
            return Verdict.true()
        # s*z ∈ F  <=>  s ∈ (q*I : p*h)
        A = ideal_colon(scale_ideal(F.numerator, z.den), Ideal(F.ring, (z.num * F.den,)))
        if P.contains_ideal(A):
            return Verdict.false()
        if not L.homogeneous or is_homogeneous_ideal(A, ring):
            return Verdict.true()
        gen = A.principal_generator()
        if gen is not None and not is_homogeneous(gen, ring):
            return Verdict.false()
        if any(is_homogeneous(g, ring) and not P.contains(g) for g in A.reduced_generators()):
            return Verdict.true()
        core = homogeneous_core_generators(A, ring, cap)
        if any(not P.contains(g) for g in core.nonzero_generators):
            return Verdict.true()
        return Verdict.unknown(cap)

    def enumerate_members() -> list[KElement]:
        return [g / s for s in _sample_denominators(P, L.homogeneous, F, ring) for g in F.generators() if not g.is_zero()]

    return ClosureHandle(F, label, oracle=oracle, enumerate=enumerate_members, within_rh=True if L.homogeneous else None)


def meet_handles(F: FractionalIdeal, parts: Sequence[ClosureHandle], label: str) -> ClosureHandle:
    """Intersection of closures: exact when every part is finite."""
    if all(h.is_finite for h in parts):
        value = parts[0].finite
        for h in parts[1:]:
            value = value.intersect(h.finite)  # type: ignore[union-attr]
        return ClosureHandle(F, label, finite=value, lower=any(h.lower for h in parts))

    def oracle(z: KElement) -> Verdict:
        return all_of(h.contains(z) for h in parts)

    def enumerate_members() -> list[KElement]:
        cands = [z for h in parts for z in h.samples()]
        return [z for z in cands if oracle(z).is_true]

    within = True if any(h.within_rh for h in parts) else None
    return ClosureHandle(F, label, oracle=oracle, enumerate=enumerate_members, within_rh=within)


def _join_handle(star: Join, F: FractionalIdeal, ctx: StarContext, label: str) -> ClosureHandle:
    """Ascending G_{k+1} = sigma_n(...sigma_1(G_k)) until a round adds nothing."""
    if not star.stars:
        raise InputError("join of an empty family")
    cap = star.cap or ctx.caps.join
    G = F
    stable = exact = False
    rounds = 0
    notes: list[str] = []
    for rounds in range(1, cap + 1):
        previous, all_finite = G, True
        for s in star.stars:
            h = eval_star(s, G, ctx)
            all_finite = all_finite and h.is_finite and not h.lower
            G = h.lower_bound()
        if previous.contains(G):
            stable, exact, G = True, all_finite, previous
            break
        if len(G.numerator.generators) > JOIN_GENERATOR_LIMIT:
            notes.append(f"ascent stopped after {rounds} rounds ({len(G.numerator.generators)} generators)")
            break
    logger.debug("join %s: %d rounds, stable=%s exact=%s", label, rounds, stable, exact)
    if exact:
        return ClosureHandle(F, label, finite=G, notes=[f"fixpoint after {rounds} rounds"])
    value = G

    def oracle(z: KElement) -> Verdict:
        return Verdict.true() if value.member(z) else Verdict.unknown(cap)

    return ClosureHandle(F, label, oracle=oracle, enumerate=lambda: value.generators(),
                         notes=notes or [("stable on sampled lower bounds" if stable else f"no fixpoint within {cap} rounds")])


def default_witness_family(ring: GradedRing, seeds: Sequence[Ideal] = ()) -> list[Ideal]:
    """R, the ideal of all variables, and powers (<= 3) of the given ideals."""
    pr = ring.poly_ring
    family = [Ideal.unit(pr), Ideal(pr, tuple(pr.gens))]
    for I in seeds:
        for k in (1, 2, 3):
            family.append(ideal_power(I, k))
    return family


def _stable_handle(star: StableApprox, F: FractionalIdeal, ctx: StarContext, label: str) -> ClosureHandle:
    family = list(star.family) if star.family is not None else default_witness_family(ctx.ring)
    result, notes = F, []
    one = KElement.of(ctx.ring.poly_ring.one)
    for a in family:
        if a.is_zero():
            continue
        accepted = eval_star(star.star, FractionalIdeal.integral(a), ctx).contains(one)
        if not accepted.is_true:
            notes.append(f"discarded {a.format()} ({accepted.label()})")
            continue
        result = result + F.colon(FractionalIdeal.integral(a))
    return ClosureHandle(F, label, finite=result, lower=True, notes=notes)


def _eab_h_handle(star: EabHApprox, F: FractionalIdeal, ctx: StarContext, label: str) -> ClosureHandle:
    family = list(star.family) if star.family is not None else default_witness_family(ctx.ring)
    result: FractionalIdeal | None = None
    notes = []
    for H in family:
        if H.is_zero() or not is_homogeneous_ideal(H, ctx.ring):
            raise InputError(f"witness {H.format()} must be a nonzero homogeneous ideal")
        Hf = FractionalIdeal.integral(H)
        h = eval_star(star.star, F * Hf, ctx)
        if not h.is_finite:
            notes.append(f"(F{H.format()})^* replaced by a sampled lower bound")
        part = h.lower_bound().colon(Hf)
        result = part if result is None else result + part
    if result is None:
        result = F
    return ClosureHandle(F, label, finite=result, lower=True, notes=notes)


# -----------------------------
# Derived constructions
# -----------------------------
def stable_assoc_approx(star: Star, F: FractionalIdeal, family: Sequence[Ideal] | None, ctx: StarContext) -> ClosureHandle:
    return eval_star(StableApprox(star, tuple(family) if family is not None else None), F, ctx)


def eab_h_approx(star: Star, F: FractionalIdeal, family: Sequence[Ideal] | None, ctx: StarContext) -> ClosureHandle:
    return eval_star(EabHApprox(star, tuple(family) if family is not None else None), F, ctx)


def meet_and_join(stars: Sequence[Star], mode: str, F: FractionalIdeal, ctx: StarContext,
                  cap: int | None = None) -> ClosureHandle:
    mode = (mode or "").strip().lower()
    if mode == "meet":
        return eval_star(Meet(tuple(stars)), F, ctx)
    if mode == "join":
        return eval_star(Join(tuple(stars), cap), F, ctx)
    raise InputError(f"unknown mode {mode!r} (meet | join)")


# -----------------------------
# Checks
# -----------------------------
def contained(h1: ClosureHandle, h2: ClosureHandle) -> Verdict:
    """h1 ⊆ h2, exact on finite values, sampled otherwise."""
    if h1.is_finite and h2.is_finite:
        return Verdict.of(h2.finite.contains(h1.finite))  # type: ignore[union-attr]
    return all_of(h2.contains(z) for z in h1.samples())


def axioms_check(star: Star, corpus: TestCorpus, ctx: StarContext) -> CheckReport:
    tally = CheckTally("axioms")
    logger.info("axioms_check %s on %d ideals", star.describe(), len(corpus))
    handles = [eval_star(star, F, ctx) for F in corpus.ideals]
    for F, h in zip(corpus.ideals, handles):
        # extensive
        for g in F.generators():
            tally.add(h.contains(g), "*3", F.format(), g.format())
        # homogeneous scalars
        for u in corpus.scalars:
            hu = eval_star(star, F.scale(u), ctx)
            if h.is_finite and hu.is_finite:
                tally.add(Verdict.of(hu.finite.equals(h.finite.scale(u))), "*1", F.format(), u.format())
                continue
            for z in h.samples():
                tally.add(hu.contains(z * u), "*1", F.format(), u.format(), z.format())
            for w in hu.samples():
                tally.add(h.contains(w / u), "*1", F.format(), u.format(), w.format())
        # idempotent
        if h.is_finite:
            hh = eval_star(star, h.finite, ctx)  # type: ignore[arg-type]
            tally.add(contained(hh, h), "*4", F.format(), h.finite.format())
        else:
            hh = eval_star(star, h.lower_bound(), ctx)
            for z in hh.samples():
                tally.add(h.contains(z), "*4", F.format(), z.format())
            tally.note("idempotence sampled on known members (capped)")
    # monotone: F ⊆ F + G
    for i, j in corpus.pair_indices(limit=ctx.caps.max_triples):
        F, G = corpus.ideals[i], corpus.ideals[j]
        S = F + G
        hs = eval_star(star, S, ctx)
        for z in handles[i].samples():
            tally.add(hs.contains(z), "*2", F.format(), S.format(), z.format())
    report = tally.report(star=star.describe())
    logger.info("axioms_check %s: %s", star.describe(), report.verdict.label())
    return report


def compare(star1: Star, star2: Star, corpus: TestCorpus, ctx: StarContext) -> CheckReport:
    """Relation between two stars on the corpus: "=", "<=", ">=", "incomparable" or "unknown"."""
    le, ge = CheckTally("le"), CheckTally("ge")
    for F in corpus.ideals:
        h1, h2 = eval_star(star1, F, ctx), eval_star(star2, F, ctx)
        for z in h1.samples():
            le.add(h2.contains(z), F.format(), z.format())
        for z in h2.samples():
            ge.add(h1.contains(z), F.format(), z.format())
    lv, gv = all_of(le.verdicts), all_of(ge.verdicts)
    if lv.is_true and gv.is_true:
        relation = "="
    elif lv.is_true and gv.is_false:
        relation = "<="
    elif gv.is_true and lv.is_false:
        relation = ">="
    elif lv.is_false and gv.is_false:
        relation = "incomparable"
    elif lv.is_true:
        relation = "<="
    elif gv.is_true:
        relation = ">="
    else:
        relation = "unknown"
    notes = []
    if lv.is_unknown or gv.is_unknown:
        notes.append(f"one direction is {(lv if lv.is_unknown else gv).label()}")
    determined = not (lv.is_unknown and gv.is_unknown) and relation != "unknown"
    cap = max([v.cap for v in (lv, gv) if v.is_unknown] or [0])
    return CheckReport(
        name="compare",
        verdict=Verdict.true() if determined else Verdict.unknown(cap),
        witnesses=[("not <=",) + w for w in le.witnesses[:1]] + [("not >=",) + w for w in ge.witnesses[:1]],
        checks_run=len(le.verdicts) + len(ge.verdicts),
        notes=notes,
        details={"relation": relation, "le": lv.label(), "ge": gv.label(),
                 "stars": [star1.describe(), star2.describe()]},
    )


def preserve_homogeneity_check(star: Star, corpus: TestCorpus, ctx: StarContext) -> CheckReport:
    tally = CheckTally("preserve_homogeneity")
    cap = ctx.caps.subideal_degree
    for F in corpus.homogeneous_ideals():
        h = eval_star(star, F, ctx)
        if h.is_finite:
            tally.add(is_homogeneous_fractional(h.finite, ctx.ring, cap), F.format(), h.finite.format(),  # type: ignore[arg-type]
                      "closure is not homogeneous")
            continue
        for z in h.samples():
            graded = tally.add(rh_membership(z, ctx.ring, cap), F.format(), z.format(), "not in R_H")
            if not graded.is_true:
                continue
            comps = homogeneous_components(z, ctx.ring, cap)
            if comps is None:
                tally.add(Verdict.unknown(cap))
                continue
            for _, c in comps:
                tally.add(h.contains(c), F.format(), z.format(), f"component {c.format()} not a member")
    if not tally.verdicts:
        tally.note("no homogeneous ideals in the corpus")
    return tally.report(star=star.describe())


def eab_checks(star: Star, corpus: TestCorpus, ctx: StarContext, mode: str = "graded-eab") -> CheckReport:
    mode = (mode or "").strip().lower()
    if mode not in ("graded-eab", "eab"):
        raise InputError(f"unknown e.a.b. mode {mode!r}")
    tally = CheckTally(mode)
    cache: dict[int, ClosureHandle] = {}

    def closure(F: FractionalIdeal) -> ClosureHandle:
        if id(F) not in cache:
            cache[id(F)] = eval_star(star, F, ctx)
        return cache[id(F)]

    for E, F, G in corpus.triples(mode == "graded-eab", ctx.caps.max_triples):
        premise = contained(eval_star(star, E * F, ctx), eval_star(star, E * G, ctx))
        if premise.is_false:
            tally.add(Verdict.true())
            continue
        conclusion = contained(closure(F), closure(G))
        if premise.is_unknown and not conclusion.is_true:
            tally.add(premise)
            continue
        tally.add(conclusion, E.format(), F.format(), G.format())
    return tally.report(star=star.describe(), mode=mode)


def stability_check(star: Star, corpus: TestCorpus, ctx: StarContext) -> CheckReport:
    tally = CheckTally("stability")
    for E, F in corpus.pairs(limit=ctx.caps.max_triples):
        hE, hF = eval_star(star, E, ctx), eval_star(star, F, ctx)
        hI = eval_star(star, E.intersect(F), ctx)
        for z in hI.samples():
            tally.add(all_of([hE.contains(z), hF.contains(z)]), "(E∩F)* ⊄ E*∩F*", E.format(), F.format(), z.format())
        both = meet_handles(E, [hE, hF], "E*∩F*")
        for z in both.samples():
            tally.add(hI.contains(z), "E*∩F* ⊄ (E∩F)*", E.format(), F.format(), z.format())
    return tally.report(star=star.describe())


def quasi_star_ideal_check(I: Ideal, star: Star, ctx: StarContext) -> CheckReport:
    """I^* ∩ R = I."""
    tally = CheckTally("quasi_star_ideal")
    h = eval_star(star, FractionalIdeal.integral(I), ctx)
    if h.is_finite:
        meet = h.finite.integral_ideal()  # type: ignore[union-attr]
        verdict = Verdict.of(ideals_equal(meet, I))
        tally.add(verdict, I.format(), f"I* ∩ R = {meet.format()}")
        return tally.report(star=star.describe())
    for z in h.samples():
        p = z.as_polynomial()
        if p is not None and not I.contains(p):
            tally.add(Verdict.false(), I.format(), z.format())
    for e in exponent_vectors(ctx.ring.arity, ctx.caps.sample_degree):
        m = ctx.ring.monomial(e)
        if I.contains(m):
            continue
        if h.contains(KElement.of(m)).is_true:
            tally.add(Verdict.false(), I.format(), KElement.of(m).format())
    if not tally.failed:
        tally.add(Verdict.unknown(ctx.caps.sample_degree))
        tally.note("no element of (I* ∩ R) \\ I found among sampled members")
    return tally.report(star=star.describe())
