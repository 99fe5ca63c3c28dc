# runner.py
# Executes the check directives of a parsed session, in declaration order,
# and turns each into a flat record. `expect` turns a computed value into
# a pass/fail assertion.
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

from algebra_core import (
    GREVLEX,
    LEX,
    Ideal,
    equal as ideals_equal,
    format_poly,
    groebner_kernel,
    ideal_arithmetic,
    member,
)
from data_loader import Directive, SessionConfig, SessionError, parse_session, resolve_literal
from fractional import FractionalIdeal, KElement, frac_arithmetic, is_homogeneous_fractional, rh_membership, v_closure
from grading import AuxPolynomial, content_A, content_C, decompose, dedekind_mertens_exponent, homogeneity_tests, homogeneous_witness_J0
from grvaluation import b_closure_monomial, extend_FV, fv_membership, gauss_valuation, gr_star_valuation_check, in_ring_verdict, wedge_Y_closure
from kronecker import (
    HOMOGENEOUS_KR,
    KroneckerHandle,
    classical_in_homogeneous_check,
    k_function_ring_axioms_check,
    kr_ideal_closure,
    kr_membership,
    sample_elements,
    graded_parts_roundtrip,
    valuation_meet_kr_check,
)
from report import build_record
from semistar import (
    EabHApprox,
    StableApprox,
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
from topology import (
    phi_preimage_check,
    point_open_membership,
    preimage_rewrites,
    retraction_checks,
    specialization_report,
    ultrafilter_finite,
)
from utils import InputError, format_vector
from verdict import CheckReport, Verdict, all_of

logger = logging.getLogger(__name__)

# value kinds understood by `expect`
REPORT, VERDICT, IDEAL, FRACTIONAL, ELEMENT, POLYS, CLOSURE, PLAIN = (
    "report", "verdict", "ideal", "fractional", "element", "polys", "closure", "plain",
)


# -----------------------------
# Outcomes
# -----------------------------
@dataclass
class Outcome:
    verdict: Verdict
    kind: str = PLAIN
    value: Any = None
    raw: Any = None  # library object behind `value`, used by expect
    witnesses: list[tuple[str, ...]] = field(default_factory=list)
    checks_run: int = 1
    notes: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_report(cls, report: CheckReport, value: Any = None, kind: str = REPORT) -> "Outcome":
        return cls(report.verdict, kind, value, None, list(report.witnesses), report.checks_run,
                   list(report.notes), dict(report.details))


def verdict_value(v: Verdict) -> str:
    if v.is_true:
        return "true"
    if v.is_false:
        return "false"
    return v.label()


def _verdict_outcome(v: Verdict, **details: Any) -> Outcome:
    return Outcome(Verdict.true() if not v.is_unknown else v, VERDICT, verdict_value(v), v, details=details)


def _ideal_outcome(I: Ideal) -> Outcome:
    return Outcome(Verdict.true(), IDEAL, I.format(), I)


def _fractional_outcome(F: FractionalIdeal) -> Outcome:
    return Outcome(Verdict.true(), FRACTIONAL, F.format(), F)


def _closure_outcome(handle) -> Outcome:
    if handle.is_finite:
        out = _fractional_outcome(handle.finite)
        out.kind = CLOSURE
        out.raw = handle
        if handle.lower:
            out.notes.append("lower approximation")
    else:
        out = Outcome(Verdict.true(), CLOSURE, handle.describe(), handle)
        out.details["known_members"] = [z.format() for z in handle.samples()]
    out.notes += handle.notes
    return out


# -----------------------------
# Handlers
# -----------------------------
Handler = Callable[[dict[str, Any], StarContext, SessionConfig], Outcome]
HANDLERS: dict[str, Handler] = {}


def directive(name: str) -> Callable[[Handler], Handler]:
    def register(fn: Handler) -> Handler:
        HANDLERS[name] = fn
        return fn
    return register


@directive("groebner")
def _groebner(p, ctx, cfg):
    order = {"lex": LEX, "grevlex": GREVLEX}.get(p.get("order", "grevlex"))
    if order is None:
        raise InputError(f"unknown monomial order {p['order']!r} (lex | grevlex)")
    basis = groebner_kernel(p["ideal"], order)
    return Outcome(Verdict.true(), POLYS, [format_poly(g) for g in basis.elements], list(basis.elements))


@directive("member")
def _member(p, ctx, cfg):
    return _verdict_outcome(Verdict.of(member(p["poly"], p["ideal"])))


@directive("ideal_equal")
def _ideal_equal(p, ctx, cfg):
    return _verdict_outcome(Verdict.of(ideals_equal(p["ideal"], p["other"])))


@directive("ideal_arithmetic")
def _ideal_arithmetic(p, ctx, cfg):
    other = p.get("other")
    if other is None and "poly" in p:
        other = Ideal(ctx.ring.poly_ring, (p["poly"],))
    if other is None:
        raise InputError("ideal_arithmetic needs 'other' or 'poly'")
    return _ideal_outcome(ideal_arithmetic(p["ideal"], other, p["op"]))


@directive("decompose")
def _decompose(p, ctx, cfg):
    parts = decompose(p["poly"], ctx.ring)
    return Outcome(Verdict.true(), PLAIN, [[format_vector(c.degree), format_poly(c.part)] for c in parts])


@directive("content_C")
def _content_C(p, ctx, cfg):
    return _ideal_outcome(content_C(p["poly"], ctx.ring))


@directive("content_A")
def _content_A(p, ctx, cfg):
    return _ideal_outcome(content_A(AuxPolynomial.of(p["coefficients"]), ctx.ring))


@directive("homogeneity")
def _homogeneity(p, ctx, cfg):
    result = homogeneity_tests(p["ideal"], ctx.ring, p["mode"], element=p.get("poly"),
                               cap=ctx.caps.subideal_degree)
    if isinstance(result, Ideal):
        return _ideal_outcome(result)
    if isinstance(result, bool):
        result = Verdict.of(result)
    return _verdict_outcome(result)


@directive("dedekind_mertens")
def _dedekind_mertens(p, ctx, cfg):
    bound = p.get("bound", ctx.caps.dm_bound)
    dm = dedekind_mertens_exponent(p["f"], p["g"], ctx.ring, bound)
    verdict = Verdict.true() if dm.found else Verdict.unknown(bound)
    return Outcome(verdict, PLAIN, dm.exponent, dm, details={"bound": bound})


@directive("witness_J0")
def _witness_J0(p, ctx, cfg):
    w = homogeneous_witness_J0(p["f"], p["J"], p["I"], ctx.ring, ctx.caps.dm_bound)
    if w.J0 is None:
        return Outcome(Verdict.unknown(w.bound), IDEAL, None, None, details=w.as_dict())
    witnesses = [] if w.ok else [(w.J0.format(), f"homogeneous: {w.homogeneous}", f"C(f)J0 in I: {w.contained}")]
    return Outcome(Verdict.of(w.ok), IDEAL, w.J0.format(), w.J0, witnesses, details=w.as_dict())


@directive("frac_arithmetic")
def _frac_arithmetic(p, ctx, cfg):
    result = frac_arithmetic(p["E"], p.get("F"), p["op"], p.get("element"))
    if isinstance(result, bool):
        return _verdict_outcome(Verdict.of(result))
    return _fractional_outcome(result)


@directive("v_closure")
def _v_closure(p, ctx, cfg):
    return _fractional_outcome(v_closure(p["fractional"]))


@directive("rh_membership")
def _rh_membership(p, ctx, cfg):
    return _verdict_outcome(rh_membership(p["element"], ctx.ring, ctx.caps.subideal_degree))


@directive("is_homogeneous_fractional")
def _is_homogeneous_fractional(p, ctx, cfg):
    return _verdict_outcome(is_homogeneous_fractional(p["fractional"], ctx.ring, ctx.caps.subideal_degree))


@directive("eval")
def _eval(p, ctx, cfg):
    return _closure_outcome(eval_star(p["star"], p["fractional"], ctx))


@directive("star_member")
def _star_member(p, ctx, cfg):
    handle = eval_star(p["star"], p["fractional"], ctx)
    return _verdict_outcome(handle.contains(p["element"]), closure=handle.describe())


@directive("axioms")
def _axioms(p, ctx, cfg):
    return Outcome.from_report(axioms_check(p["star"], p["corpus"], ctx))


@directive("compare")
def _compare(p, ctx, cfg):
    report = compare(p["star"], p["other"], p["corpus"], ctx)
    return Outcome.from_report(report, report.details["relation"], PLAIN)


@directive("preserve_homogeneity")
def _preserve_homogeneity(p, ctx, cfg):
    return Outcome.from_report(preserve_homogeneity_check(p["star"], p["corpus"], ctx))


@directive("eab")
def _eab(p, ctx, cfg):
    return Outcome.from_report(eab_checks(p["star"], p["corpus"], ctx, p.get("mode", "graded-eab")))


@directive("stability")
def _stability(p, ctx, cfg):
    return Outcome.from_report(stability_check(p["star"], p["corpus"], ctx))


@directive("quasi_star_ideal")
def _quasi_star_ideal(p, ctx, cfg):
    return Outcome.from_report(quasi_star_ideal_check(p["ideal"], p["star"], ctx))


@directive("stable_approx")
def _stable_approx(p, ctx, cfg):
    return _closure_outcome(stable_assoc_approx(p["star"], p["fractional"], p.get("family"), ctx))


@directive("eab_h_approx")
def _eab_h_approx(p, ctx, cfg):
    return _closure_outcome(eab_h_approx(p["star"], p["fractional"], p.get("family"), ctx))


@directive("meet_join")
def _meet_join(p, ctx, cfg):
    return _closure_outcome(meet_and_join(p["stars"], p["mode"], p["fractional"], ctx, p.get("cap")))


@directive("gauss_valuation")
def _gauss_valuation(p, ctx, cfg):
    query = p.get("query", "value")
    result = gauss_valuation(p["element"], p["valuation"], query, ctx.caps.subideal_degree)
    if query == "value":
        return Outcome(Verdict.true(), PLAIN, format_vector(result), result)
    return _verdict_outcome(in_ring_verdict(result))


@directive("extend_FV")
def _extend_FV(p, ctx, cfg):
    ext = extend_FV(p["fractional"], p["valuation"])
    certs = [[label, format_vector(diff)] for label, diff in ext.certificates]
    return Outcome(Verdict.true(), ELEMENT, ext.generator.format(), ext.generator,
                   details={"threshold": format_vector(ext.threshold), "certificates": certs})


@directive("fv_member")
def _fv_member(p, ctx, cfg):
    return _verdict_outcome(fv_membership(p["fractional"], p["element"], p["valuation"], ctx.caps))


@directive("gr_star_valuation")
def _gr_star_valuation(p, ctx, cfg):
    approx = {"stable": StableApprox, "eab_h": EabHApprox}.get(p.get("approx", ""))
    if "approx" in p and approx is None:
        raise InputError(f"unknown approximation {p['approx']!r} (stable | eab_h)")
    report = gr_star_valuation_check(p["valuation"], p["star"], p["corpus"], ctx.caps,
                                     approx(p["star"]) if approx else None)
    return Outcome.from_report(report)


@directive("b_closure")
def _b_closure(p, ctx, cfg):
    return _ideal_outcome(b_closure_monomial(p["ideal"]))


@directive("wedge_member")
def _wedge_member(p, ctx, cfg):
    handle = wedge_Y_closure(p["fractional"], p["valuations"], ctx.caps)
    return _verdict_outcome(handle.contains(p["element"]))


def _kr_handle(p, ctx) -> KroneckerHandle:
    mode = p.get("mode", HOMOGENEOUS_KR)
    if "corpus" in p:
        return KroneckerHandle.verified(ctx.ring, p["star"], p["corpus"], mode, ctx.caps)
    return KroneckerHandle(ctx.ring, p["star"], mode, caps=ctx.caps)


@directive("kr_member")
def _kr_member(p, ctx, cfg):
    handle = _kr_handle(p, ctx)
    out = _verdict_outcome(kr_membership(p["function_element"], handle))
    out.notes += handle.notes
    return out


def _default_coefficient_lists(ctx: StarContext) -> list[list[KElement]]:
    pr = ctx.ring.poly_ring
    one = KElement.of(pr.one)
    lists = []
    for x in pr.gens:
        lists += [[KElement.of(x), one], [one, KElement.of(x)]]
    lists.append([KElement.of(sum(pr.gens, pr.zero)), one, one])
    return lists


@directive("k_function_ring_axioms")
def _k_function_ring_axioms(p, ctx, cfg):
    sample = p.get("sample") or _default_coefficient_lists(ctx)
    return Outcome.from_report(k_function_ring_axioms_check(_kr_handle(p, ctx), sample))


@directive("kr_ideal_closure")
def _kr_ideal_closure(p, ctx, cfg):
    handle = KroneckerHandle(ctx.ring, p["star"], HOMOGENEOUS_KR, caps=ctx.caps)
    notes: list[str] = []
    outcome = _verdict_outcome(kr_ideal_closure(p["fractional"], handle, p["element"], notes))
    outcome.notes = notes
    return outcome


@directive("gauss_roundtrip")
def _gauss_roundtrip(p, ctx, cfg):
    return Outcome.from_report(graded_parts_roundtrip(p["valuation"], p.get("window", 4), p.get("max_exponent", 4)))


def _function_sample(p, ctx):
    if "function_elements" in p:
        return p["function_elements"]
    return sample_elements(ctx.ring, p["seed"], p.get("count", 50))


@directive("valuation_meet_kr")
def _valuation_meet_kr(p, ctx, cfg):
    return Outcome.from_report(valuation_meet_kr_check(p["valuations"], _function_sample(p, ctx), ctx.caps))


@directive("kr_containment")
def _kr_containment(p, ctx, cfg):
    return Outcome.from_report(classical_in_homogeneous_check(ctx.ring, p["star"], _function_sample(p, ctx), ctx.caps))


@directive("point_open")
def _point_open(p, ctx, cfg):
    sample = p["sample"]
    point = sample.points[sample.index(p["point"])]
    return _verdict_outcome(point_open_membership(point, p["open"], ctx), open=p["open"].describe())


@directive("preimage_rewrites")
def _preimage_rewrites(p, ctx, cfg):
    x = p.get("function_element", p.get("element"))
    if x is None:
        raise InputError("preimage_rewrites needs 'element' or 'function_element'")
    union, report = preimage_rewrites(x, p["valuations"])
    return Outcome.from_report(report, union.describe())


@directive("phi_preimage")
def _phi_preimage(p, ctx, cfg):
    return Outcome.from_report(phi_preimage_check(p["element"], p["valuations"]))


@directive("specialization")
def _specialization(p, ctx, cfg):
    report = specialization_report(p["sample"], p["opens"], ctx)
    return Outcome.from_report(report, report.details["preorder"])


@directive("retraction")
def _retraction(p, ctx, cfg):
    return Outcome.from_report(retraction_checks(p["overrings"], p["stars"], p["elements"], ctx))


@directive("ultrafilter")
def _ultrafilter(p, ctx, cfg):
    built, report = ultrafilter_finite(p["sample"], p["principal"], ctx, p.get("opens", ()), p.get("h_sample"))
    value = built.format() if isinstance(built, Ideal) else built.describe()
    return Outcome.from_report(report, value)


# -----------------------------
# Expectations
# -----------------------------
def _expect_verdict(outcome: Outcome, expect: Any, cfg: SessionConfig) -> Verdict:
    kind = outcome.kind
    if kind == REPORT:
        want = str(expect).strip().lower()
        got = outcome.verdict.label()
        return Verdict.of(got == want or (want == "unknown" and outcome.verdict.is_unknown))
    if kind == VERDICT:
        got: Verdict = outcome.raw
        if isinstance(expect, bool):
            return got if expect else got.negate()
        if str(expect).strip().lower() == "unknown":
            return Verdict.of(got.is_unknown)
        raise InputError(f"expect for a membership query must be true, false or \"unknown\", got {expect!r}")
    if kind == IDEAL:
        if outcome.raw is None:
            return Verdict.unknown(1)
        return Verdict.of(ideals_equal(outcome.raw, resolve_literal(cfg, "ideal", expect)))
    if kind == FRACTIONAL:
        return Verdict.of(outcome.raw.equals(resolve_literal(cfg, "fractional", expect)))
    if kind == ELEMENT:
        return Verdict.of(outcome.raw.same_as(resolve_literal(cfg, "element", expect)))
    if kind == POLYS:
        want = resolve_literal(cfg, "polys", expect)
        return Verdict.of(set(want) == set(outcome.raw))
    if kind == CLOSURE:
        want = resolve_literal(cfg, "fractional", expect)
        handle = outcome.raw
        if handle.is_finite:
            return Verdict.of(handle.finite.equals(want))
        # want ⊆ F^* through the oracle, F^* ⊆ want on known members
        return all_of([handle.contains_ideal(want), Verdict.of(all(want.member(z) for z in handle.samples()))])
    return Verdict.of(outcome.value == expect)


def apply_expect(outcome: Outcome, expect: Any, cfg: SessionConfig) -> Outcome:
    verdict = _expect_verdict(outcome, expect, cfg)
    if outcome.kind != REPORT and verdict.is_true and outcome.verdict.is_unknown:
        verdict = outcome.verdict
    outcome.verdict = verdict
    if verdict.is_false:
        shown = outcome.verdict.label() if outcome.kind == REPORT else outcome.value
        outcome.witnesses = [(f"expected {expect}", f"got {shown}")] + outcome.witnesses
    elif outcome.kind == REPORT:
        # an expected failure is not a failure of the run
        outcome.witnesses = []
    return outcome


# -----------------------------
# Execution
# -----------------------------
def execute(d: Directive, cfg: SessionConfig, timing: bool = False) -> dict[str, Any]:
    """Run one directive; returns its report record."""
    ctx = StarContext(cfg.ring, d.caps)
    logger.info("check %s (%s)", d.label, d.check)
    start = time.perf_counter()
    try:
        outcome = HANDLERS[d.check](d.params, ctx, cfg)
        if d.expect is not None:
            outcome = apply_expect(outcome, d.expect, cfg)
    except SessionError:
        raise
    except InputError as e:
        raise SessionError(f"{d.label}: {e}", d.line) from e
    elapsed = time.perf_counter() - start if timing else None
    logger.debug("check %s -> %s", d.label, outcome.verdict.label())
    return build_record(d, outcome, elapsed)


def _execute_in_worker(text: str, source: str, seed_override: int | None, index: int, timing: bool) -> dict[str, Any]:
    cfg = parse_session(text, source, seed_override)
    return execute(cfg.checks[index], cfg, timing)


def run_session(cfg: SessionConfig, jobs: int = 1, timing: bool = False) -> list[dict[str, Any]]:
    """Records for every directive, in declaration order."""
    if jobs <= 1 or len(cfg.checks) <= 1:
        return [execute(d, cfg, timing) for d in cfg.checks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [
            pool.submit(_execute_in_worker, cfg.text, cfg.source, cfg.seed_override, d.index, timing)
            for d in cfg.checks
        ]
        return [f.result() for f in futures]
