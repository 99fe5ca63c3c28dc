# data_loader.py
# Session files: UTF-8 JSON declaring a ring, named objects and a list of
# check directives. Everything is resolved here, so the runner only sees
# library objects; any problem becomes a SessionError with a line position.
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from algebra_core import Ideal, Polynomial, parse_poly
from config import DEFAULT_CAPS, Caps
from corpus import TestCorpus, generate_corpus, monomial_corpus
from fractional import FractionalIdeal, KElement, parse_k_element
from grading import GradedRing
from grvaluation import GrValuation
from kronecker import FunctionRingElement
from semistar import (
    Adjoin,
    Divisorial,
    EabHApprox,
    ExtendToOverring,
    Identity,
    Join,
    LocalizeAtPrimes,
    LocalizeComplement,
    Meet,
    MeetValuations,
    NewtonClosure,
    StableApprox,
    Star,
)
from topology import POINT_KINDS, DhOpen, PointSample, StarOpen, ZarOpen
from utils import InputError, safe_int


class SessionError(InputError):
    """Input error located in a session file (1-based line/column)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        where = f"line {self.line}" + (f", column {self.column}" if self.column else "")
        return f"{where}: {self.message}"


# -----------------------------
# Directive table
# -----------------------------
# param -> kind; a trailing "?" marks optional params
DIRECTIVES: dict[str, dict[str, str]] = {
    # algebra-core / grading
    "groebner": {"ideal": "ideal", "order": "str?"},
    "member": {"poly": "poly", "ideal": "ideal"},
    "ideal_equal": {"ideal": "ideal", "other": "ideal"},
    "ideal_arithmetic": {"ideal": "ideal", "other": "ideal?", "op": "str", "poly": "poly?"},
    "decompose": {"poly": "poly"},
    "content_C": {"poly": "poly"},
    "content_A": {"coefficients": "polys"},
    "homogeneity": {"ideal": "ideal", "mode": "str", "poly": "poly?"},
    "dedekind_mertens": {"f": "poly", "g": "poly", "bound": "int?"},
    "witness_J0": {"f": "poly", "J": "ideal", "I": "ideal"},
    # fractional
    "frac_arithmetic": {"E": "fractional", "F": "fractional?", "op": "str", "element": "element?"},
    "v_closure": {"fractional": "fractional"},
    "rh_membership": {"element": "element"},
    "is_homogeneous_fractional": {"fractional": "fractional"},
    # semistar
    "eval": {"star": "star", "fractional": "fractional"},
    "star_member": {"star": "star", "fractional": "fractional", "element": "element"},
    "axioms": {"star": "star", "corpus": "corpus"},
    "compare": {"star": "star", "other": "star", "corpus": "corpus"},
    "preserve_homogeneity": {"star": "star", "corpus": "corpus"},
    "eab": {"star": "star", "corpus": "corpus", "mode": "str?"},
    "stability": {"star": "star", "corpus": "corpus"},
    "quasi_star_ideal": {"ideal": "ideal", "star": "star"},
    "stable_approx": {"star": "star", "fractional": "fractional", "family": "ideals?"},
    "eab_h_approx": {"star": "star", "fractional": "fractional", "family": "ideals?"},
    "meet_join": {"stars": "stars", "mode": "str", "fractional": "fractional", "cap": "int?"},
    # grvaluation
    "gauss_valuation": {"element": "element", "valuation": "valuation", "query": "str?"},
    "extend_FV": {"fractional": "fractional", "valuation": "valuation"},
    "fv_member": {"fractional": "fractional", "valuation": "valuation", "element": "element"},
    "gr_star_valuation": {"valuation": "valuation", "star": "star", "corpus": "corpus", "approx": "str?"},
    "b_closure": {"ideal": "ideal"},
    "wedge_member": {"fractional": "fractional", "valuations": "valuations", "element": "element"},
    # kronecker
    "kr_member": {"function_element": "function_element", "star": "star", "mode": "str?", "corpus": "corpus?"},
    "k_function_ring_axioms": {"star": "star", "mode": "str?", "sample": "coefficient_lists?"},
    "kr_ideal_closure": {"fractional": "fractional", "star": "star", "element": "element"},
    "gauss_roundtrip": {"valuation": "valuation", "window": "int?", "max_exponent": "int?"},
    "valuation_meet_kr": {"valuations": "valuations", "function_elements": "function_elements?",
                          "seed": "int?", "count": "int?"},
    "kr_containment": {"star": "star", "function_elements": "function_elements?", "seed": "int?", "count": "int?"},
    # topology
    "point_open": {"sample": "sample", "point": "str", "open": "open"},
    "preimage_rewrites": {"valuations": "valuations", "element": "element?", "function_element": "function_element?"},
    "phi_preimage": {"valuations": "valuations", "element": "element"},
    "specialization": {"sample": "sample", "opens": "opens"},
    "retraction": {"overrings": "overrings", "stars": "stars", "elements": "elements"},
    "ultrafilter": {"sample": "sample", "principal": "str", "opens": "opens?", "h_sample": "polys?"},
}

RESERVED_KEYS = ("check", "label", "caps", "expect")
TOP_LEVEL_KEYS = ("description", "ring", "caps", "ideals", "elements", "valuations", "stars", "corpora",
                  "function_elements", "samples", "checks")
SEEDED_DIRECTIVES = ("valuation_meet_kr", "kr_containment")


# -----------------------------
# Parsed session
# -----------------------------
@dataclass
class Directive:
    index: int
    check: str
    label: str
    line: int | None
    params: dict[str, Any]
    caps: Caps
    expect: Any = None
    raw: dict[str, Any] = field(default_factory=dict)


@dataclass
class SessionConfig:
    source: str
    ring: GradedRing
    caps: Caps
    ideals: dict[str, FractionalIdeal] = field(default_factory=dict)
    elements: dict[str, KElement] = field(default_factory=dict)
    valuations: dict[str, GrValuation] = field(default_factory=dict)
    stars: dict[str, Star] = field(default_factory=dict)
    corpora: dict[str, TestCorpus] = field(default_factory=dict)
    function_elements: dict[str, FunctionRingElement] = field(default_factory=dict)
    samples: dict[str, PointSample] = field(default_factory=dict)
    checks: list[Directive] = field(default_factory=list)
    seed_override: int | None = None
    echo: dict[str, Any] = field(default_factory=dict)
    text: str = ""


# -----------------------------
# Positions
# -----------------------------
class _Locator:
    """Best-effort line lookup for keys of an already-parsed JSON text."""

    def __init__(self, text: str) -> None:
        self.text = text

    def line_of(self, key: str, after: int = 0) -> int | None:
        m = re.compile(r'"' + re.escape(key) + r'"\s*:').search(self.text, after)
        if not m:
            return None
        return self.text.count("\n", 0, m.start()) + 1

    def directive_lines(self, count: int) -> list[int | None]:
        start = self.text.find('"checks"')
        lines: list[int | None] = []
        pos = max(start, 0)
        pattern = re.compile(r'"check"\s*:')
        for _ in range(count):
            m = pattern.search(self.text, pos)
            if not m:
                lines.append(None)
                continue
            lines.append(self.text.count("\n", 0, m.start()) + 1)
            pos = m.end()
        return lines


# -----------------------------
# Literal parsers
# -----------------------------
class _Resolver:
    def __init__(self, cfg: SessionConfig) -> None:
        self.cfg = cfg

    @property
    def ring(self) -> GradedRing:
        return self.cfg.ring

    def poly(self, raw: Any) -> Polynomial:
        if not isinstance(raw, (str, int)) or isinstance(raw, bool):
            raise InputError(f"polynomial literal must be a string, got {raw!r}")
        return parse_poly(self.ring.poly_ring, raw)

    def polys(self, raw: Any) -> list[Polynomial]:
        return [self.poly(r) for r in _as_list(raw, "polynomial list")]

    def element(self, raw: Any) -> KElement:
        if isinstance(raw, str) and raw in self.cfg.elements:
            return self.cfg.elements[raw]
        if not isinstance(raw, (str, int)) or isinstance(raw, bool):
            raise InputError(f"K-element literal must be a string, got {raw!r}")
        return parse_k_element(self.ring, raw)

    def elements(self, raw: Any) -> list[KElement]:
        return [self.element(r) for r in _as_list(raw, "element list")]

    def fractional(self, raw: Any) -> FractionalIdeal:
        if isinstance(raw, str):
            if raw not in self.cfg.ideals:
                raise InputError(f"unknown ideal {raw!r}")
            return self.cfg.ideals[raw]
        pr = self.ring.poly_ring
        if isinstance(raw, list):
            return FractionalIdeal(pr.one, Ideal(pr, tuple(self.polys(raw))))
        if isinstance(raw, dict):
            _check_keys(raw, ("den", "gens"), "fractional ideal")
            den = self.poly(raw.get("den", "1"))
            return FractionalIdeal(den, Ideal(pr, tuple(self.polys(raw.get("gens", [])))))
        raise InputError(f"ideal literal must be a name, a list or {{den, gens}}, got {raw!r}")

    def ideal(self, raw: Any) -> Ideal:
        F = self.fractional(raw)
        if not F.is_integral():
            raise InputError(f"{F.format()} is not an integral ideal")
        return F.integral_ideal()

    def ideals(self, raw: Any) -> list[Ideal]:
        return [self.ideal(r) for r in _as_list(raw, "ideal list")]

    def valuation(self, raw: Any, name: str = "V") -> GrValuation:
        if isinstance(raw, str):
            if raw not in self.cfg.valuations:
                raise InputError(f"unknown valuation {raw!r}")
            return self.cfg.valuations[raw]
        if not isinstance(raw, dict) or "weights" not in raw:
            raise InputError(f"valuation literal must be {{\"weights\": [[...], ...]}}, got {raw!r}")
        _check_keys(raw, ("weights", "name"), "valuation")
        return GrValuation.of(raw["weights"], self.ring, name=str(raw.get("name", name)))

    def valuations(self, raw: Any) -> list[GrValuation]:
        return [self.valuation(r, f"V{i + 1}") for i, r in enumerate(_as_list(raw, "valuation list"))]

    def function_element(self, raw: Any) -> FunctionRingElement:
        if isinstance(raw, str):
            if raw not in self.cfg.function_elements:
                raise InputError(f"unknown function ring element {raw!r}")
            return self.cfg.function_elements[raw]
        if not isinstance(raw, dict):
            raise InputError(f"function ring element literal must be {{num, den}}, got {raw!r}")
        _check_keys(raw, ("num", "den"), "function ring element")
        return FunctionRingElement.of(self.polys(raw.get("num", [])), self.polys(raw.get("den", ["1"])))

    def function_elements(self, raw: Any) -> list[FunctionRingElement]:
        return [self.function_element(r) for r in _as_list(raw, "function element list")]

    def coefficient_lists(self, raw: Any) -> list[list[KElement]]:
        return [self.elements(r) for r in _as_list(raw, "coefficient lists")]

    def overring(self, raw: Any) -> Adjoin | LocalizeComplement:
        if not isinstance(raw, dict):
            raise InputError(f"overring literal must be {{adjoin}} or {{localize}}, got {raw!r}")
        if "adjoin" in raw:
            _check_keys(raw, ("adjoin",), "overring")
            return Adjoin(tuple(self.elements(raw["adjoin"])))
        if "localize" in raw:
            _check_keys(raw, ("localize", "homogeneous"), "overring")
            return LocalizeComplement(self.ideal(raw["localize"]), bool(raw.get("homogeneous", True)))
        raise InputError(f"overring literal needs 'adjoin' or 'localize': {raw!r}")

    def overrings(self, raw: Any) -> list[Adjoin | LocalizeComplement]:
        return [self.overring(r) for r in _as_list(raw, "overring list")]

    def star(self, raw: Any) -> Star:
        if isinstance(raw, str):
            if raw not in self.cfg.stars:
                raise InputError(f"unknown star {raw!r}")
            return self.cfg.stars[raw]
        if not isinstance(raw, dict) or "tag" not in raw:
            raise InputError(f"star literal must be a name or a tagged record, got {raw!r}")
        tag = str(raw["tag"]).strip().lower()
        if tag not in _STAR_BUILDERS:
            raise InputError(f"unknown star tag {tag!r} (expected one of {', '.join(_STAR_BUILDERS)})")
        return _STAR_BUILDERS[tag](self, raw)

    def stars(self, raw: Any) -> list[Star]:
        return [self.star(r) for r in _as_list(raw, "star list")]

    def sample(self, raw: Any) -> PointSample:
        if isinstance(raw, str):
            if raw not in self.cfg.samples:
                raise InputError(f"unknown sample {raw!r}")
            return self.cfg.samples[raw]
        if not isinstance(raw, dict):
            raise InputError(f"sample literal must be {{kind, points}}, got {raw!r}")
        _check_keys(raw, ("kind", "points", "names"), "sample")
        kind = str(raw.get("kind", ""))
        if kind not in POINT_KINDS:
            raise InputError(f"unknown sample kind {kind!r} (expected one of {', '.join(POINT_KINDS)})")
        parse = {"gr-valuation": self.valuation, "homogeneous-prime": self.ideal, "semistar": self.star}[kind]
        points = [parse(p) for p in _as_list(raw.get("points"), "sample points")]
        names = [str(n) for n in raw.get("names", [])]
        if kind == "semistar" and not names:
            # named stars keep their session names
            names = [p if isinstance(p, str) else self.star(p).describe() for p in raw["points"]]
        if kind == "gr-valuation" and not names:
            names = [p if isinstance(p, str) else v.name for p, v in zip(raw["points"], points)]
        return PointSample(kind, points, names)

    def open(self, raw: Any) -> ZarOpen | DhOpen | StarOpen:
        if not isinstance(raw, dict) or len(raw) != 1:
            raise InputError(f"open literal must be one of {{zar}}, {{dh}}, {{W}}, got {raw!r}")
        key, value = next(iter(raw.items()))
        if key == "zar":
            return ZarOpen(tuple(self.elements(value)))
        if key == "dh":
            return DhOpen(self.poly(value))
        if key == "W":
            return StarOpen(self.fractional(value))
        raise InputError(f"unknown open kind {key!r} (zar | dh | W)")

    def opens(self, raw: Any) -> list[ZarOpen | DhOpen | StarOpen]:
        return [self.open(r) for r in _as_list(raw, "open list")]

    def corpus(self, raw: Any) -> TestCorpus:
        if not isinstance(raw, str) or raw not in self.cfg.corpora:
            raise InputError(f"unknown corpus {raw!r}")
        return self.cfg.corpora[raw]

    def scalar(self, kind: str, raw: Any) -> Any:
        if kind == "int":
            value = safe_int(raw)
            if value is None or isinstance(raw, bool):
                raise InputError(f"expected an integer, got {raw!r}")
            return value
        if kind == "bool":
            if not isinstance(raw, bool):
                raise InputError(f"expected true/false, got {raw!r}")
            return raw
        if not isinstance(raw, str):
            raise InputError(f"expected a string, got {raw!r}")
        return raw

    def resolve(self, kind: str, raw: Any) -> Any:
        if kind in ("int", "bool", "str"):
            return self.scalar(kind, raw)
        return getattr(self, kind)(raw)


def _as_list(raw: Any, what: str) -> list:
    if not isinstance(raw, list):
        raise InputError(f"{what} must be a JSON list, got {raw!r}")
    return raw


def _check_keys(raw: dict, allowed: tuple[str, ...], what: str) -> None:
    extra = sorted(set(raw) - set(allowed) - {"tag"})
    if extra:
        raise InputError(f"unknown key(s) {extra} in {what}")


def _family(res: _Resolver, raw: dict) -> tuple[Ideal, ...] | None:
    return tuple(res.ideals(raw["family"])) if "family" in raw else None


def _extend_star(res: _Resolver, raw: dict) -> Star:
    if "overring" in raw:
        return ExtendToOverring(res.overring(raw["overring"]))
    return ExtendToOverring(res.overring({k: v for k, v in raw.items() if k != "tag"}))


_STAR_BUILDERS: dict[str, Callable[[_Resolver, dict], Star]] = {
    "identity": lambda res, raw: Identity(),
    "divisorial": lambda res, raw: Divisorial(),
    "b_monomial": lambda res, raw: NewtonClosure(),
    "extend": _extend_star,
    "meet_valuations": lambda res, raw: MeetValuations(tuple(res.valuations(raw.get("valuations")))),
    "localize": lambda res, raw: LocalizeAtPrimes(tuple(res.ideals(raw.get("primes")))),
    "meet": lambda res, raw: Meet(tuple(res.stars(raw.get("stars")))),
    "join": lambda res, raw: Join(tuple(res.stars(raw.get("stars"))), safe_int(raw.get("cap"))),
    "stable_approx": lambda res, raw: StableApprox(res.star(raw.get("star")), _family(res, raw)),
    "eab_h_approx": lambda res, raw: EabHApprox(res.star(raw.get("star")), _family(res, raw)),
}


# -----------------------------
# Sections
# -----------------------------
def _parse_ring(raw: Any) -> GradedRing:
    if not isinstance(raw, dict) or "variables" not in raw:
        raise InputError("session needs a ring: {\"variables\": [...], \"degrees\": [[...]]}")
    _check_keys(raw, ("name", "variables", "degrees"), "ring")
    return GradedRing.of(_as_list(raw["variables"], "variables"), raw.get("degrees", []),
                         name=str(raw.get("name", "R")))


def _parse_corpus(res: _Resolver, name: str, raw: Any, seed_override: int | None) -> TestCorpus:
    if not isinstance(raw, dict):
        raise InputError(f"corpus {name!r} must be an object")
    _check_keys(raw, ("ideals", "scalars", "seed", "count", "max_degree", "max_generators", "kind"), "corpus")
    ring = res.ring
    if "ideals" in raw:
        ideals = [res.fractional(r) for r in _as_list(raw["ideals"], "corpus ideals")]
        scalars = res.elements(raw.get("scalars", []))
        names = [r if isinstance(r, str) else f"{name}[{i}]" for i, r in enumerate(raw["ideals"])]
        return TestCorpus.explicit(ring, ideals, scalars, names)
    seed = seed_override if seed_override is not None else raw.get("seed")
    if seed is None:
        raise InputError(f"corpus {name!r} uses randomness and needs a seed")
    seed = res.scalar("int", seed)
    count = res.scalar("int", raw.get("count", 20))
    max_degree = res.scalar("int", raw.get("max_degree", 4))
    max_generators = res.scalar("int", raw.get("max_generators", 3))
    kind = str(raw.get("kind", "mixed"))
    if kind == "monomial":
        return monomial_corpus(ring, seed, count, max_degree, max_generators)
    if kind != "mixed":
        raise InputError(f"unknown corpus kind {kind!r} (mixed | monomial)")
    return generate_corpus(ring, seed, count, max_degree, max_generators)


def _parse_directive(res: _Resolver, index: int, raw: Any, line: int | None, session_caps: Caps,
                     seed_override: int | None) -> Directive:
    if not isinstance(raw, dict) or "check" not in raw:
        raise SessionError("each check directive needs a 'check' field", line)
    check = str(raw["check"])
    if check not in DIRECTIVES:
        raise SessionError(f"unknown check {check!r}", line)
    signature = DIRECTIVES[check]
    extra = sorted(set(raw) - set(signature) - set(RESERVED_KEYS))
    if extra:
        raise SessionError(f"unknown parameter(s) {extra} for {check}", line)
    try:
        caps = session_caps.override(raw.get("caps"))
    except ValueError as e:
        raise SessionError(str(e), line) from e
    params: dict[str, Any] = {}
    for key, kind in signature.items():
        optional = kind.endswith("?")
        kind = kind.rstrip("?")
        if key not in raw:
            if not optional:
                raise SessionError(f"{check} needs '{key}'", line)
            continue
        try:
            params[key] = res.resolve(kind, raw[key])
        except SessionError:
            raise
        except InputError as e:
            raise SessionError(f"{check}.{key}: {e}", line) from e
    if check in SEEDED_DIRECTIVES and "function_elements" not in params:
        if seed_override is not None:
            params["seed"] = seed_override
        if "seed" not in params:
            raise SessionError(f"{check} samples random elements and needs a seed", line)
    label = str(raw.get("label", f"{check}#{index + 1}"))
    return Directive(index, check, label, line, params, caps, raw.get("expect"), dict(raw))


def parse_session(text: str, source: str = "<session>", seed_override: int | None = None) -> SessionConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise SessionError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from e
    if not isinstance(raw, dict):
        raise SessionError("a session file must hold a JSON object", 1)
    loc = _Locator(text)
    unknown = sorted(set(raw) - set(TOP_LEVEL_KEYS))
    if unknown:
        raise SessionError(f"unknown top-level key(s) {unknown}", loc.line_of(unknown[0]))

    try:
        ring = _parse_ring(raw.get("ring"))
    except InputError as e:
        raise SessionError(str(e), loc.line_of("ring")) from e
    try:
        caps = DEFAULT_CAPS.override(raw.get("caps"))
    except ValueError as e:
        raise SessionError(str(e), loc.line_of("caps")) from e

    cfg = SessionConfig(source, ring, caps, seed_override=seed_override, echo=raw, text=text)
    res = _Resolver(cfg)

    sections: list[tuple[str, dict, Callable[[str, Any], Any]]] = [
        ("ideals", cfg.ideals, lambda n, r: res.fractional(r)),
        ("elements", cfg.elements, lambda n, r: res.element(r)),
        ("valuations", cfg.valuations, lambda n, r: res.valuation(r, n)),
        ("stars", cfg.stars, lambda n, r: res.star(r)),
        ("corpora", cfg.corpora, lambda n, r: _parse_corpus(res, n, r, seed_override)),
        ("function_elements", cfg.function_elements, lambda n, r: res.function_element(r)),
        ("samples", cfg.samples, lambda n, r: res.sample(r)),
    ]
    for section, store, parse in sections:
        block = raw.get(section, {})
        if not isinstance(block, dict):
            raise SessionError(f"'{section}' must map names to declarations", loc.line_of(section))
        after = text.find(f'"{section}"')
        for name, decl in block.items():
            try:
                store[name] = parse(name, decl)
            except InputError as e:
                raise SessionError(f"{section}.{name}: {e}", loc.line_of(name, max(after, 0))) from e

    checks = raw.get("checks", [])
    if not isinstance(checks, list):
        raise SessionError("'checks' must be a list", loc.line_of("checks"))
    lines = loc.directive_lines(len(checks))
    for i, (item, line) in enumerate(zip(checks, lines)):
        cfg.checks.append(_parse_directive(res, i, item, line, caps, seed_override))
    return cfg


# -----------------------------
# Public API
# -----------------------------
def load_session(path: str | Path, seed_override: int | None = None) -> SessionConfig:
    p = Path(path)
    if not p.exists():
        raise SessionError(f"session file not found: {p.resolve()}")
    return parse_session(p.read_text(encoding="utf-8"), str(p), seed_override)


def load_ring(path: str | Path) -> GradedRing:
    """Ring file for the corpus command: a session-style {"ring": {...}} or the bare ring object."""
    p = Path(path)
    if not p.exists():
        raise SessionError(f"ring file not found: {p.resolve()}")
    text = p.read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise SessionError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from e
    if isinstance(raw, dict) and "ring" in raw:
        raw = raw["ring"]
    try:
        return _parse_ring(raw)
    except InputError as e:
        raise SessionError(str(e), 1) from e


def resolve_literal(cfg: SessionConfig, kind: str, raw: Any) -> Any:
    """Parse a literal (or a name) of the given kind against a loaded session."""
    return _Resolver(cfg).resolve(kind, raw)
