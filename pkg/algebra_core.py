# algebra_core.py
# Exact polynomial arithmetic over QQ and the Groebner-basis kernel:
# membership, equality, sum, product, power, intersection, colon, saturation.
#
# Polynomials are sympy ring elements (sympy.polys.rings.PolyElement) over QQ.
# Every GradedRing owns one base ring (grevlex); bases for other orders are
# computed in order-specific clones of that ring and mapped back on demand.

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from sympy import QQ, Symbol
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.groebnertools import groebner as _groebner
from sympy.polys.orderings import MonomialOrder, ProductOrder, grevlex, lex
from sympy.polys.rings import PolyElement, PolyRing

from utils import InputError, dedupe

logger = logging.getLogger(__name__)

Polynomial = PolyElement

_TRANSFORMS = standard_transformations + (convert_xor,)


# -----------------------------
# Rings and text format
# -----------------------------
def make_ring(variables: Sequence[str], order: MonomialOrder = grevlex) -> PolyRing:
    names = [str(v).strip() for v in variables]
    if not names or any(not n.isidentifier() for n in names):
        raise InputError(f"variable names must be identifiers, got {list(variables)}")
    if len(set(names)) != len(names):
        raise InputError(f"duplicate variable names in {names}")
    return PolyRing(names, QQ, order)


def parse_expression(ring: PolyRing, text: str):
    """Parse text into a sympy expression over the ring's variables (`^` allowed)."""
    local = {s.name: s for s in ring.symbols}
    try:
        return parse_expr(str(text), local_dict=local, transformations=_TRANSFORMS)
    except Exception as e:  # sympy raises a zoo of exception types here
        raise InputError(f"cannot parse {text!r}: {e}") from e


def parse_poly(ring: PolyRing, text: str | int) -> Polynomial:
    """Parse the session text format `c*x^a*y^b + ...` into a ring element."""
    expr = parse_expression(ring, str(text))
    unknown = sorted(str(s) for s in expr.free_symbols if s not in ring.symbols)
    if unknown:
        raise InputError(f"unknown variable(s) {unknown} in {text!r}")
    try:
        return ring.from_expr(expr)
    except ValueError as e:
        raise InputError(f"{text!r} is not a polynomial over QQ in {ring.symbols}") from e


def format_rational(c) -> str:
    p, q = int(c.numerator), int(c.denominator)
    return f"{p}" if q == 1 else f"{p}/{q}"


def _format_monomial(symbols: Sequence[Symbol], exps: Sequence[int]) -> str:
    parts = []
    for s, e in zip(symbols, exps):
        if e == 1:
            parts.append(s.name)
        elif e > 1:
            parts.append(f"{s.name}^{e}")
    return "*".join(parts)


def format_poly(f: Polynomial) -> str:
    """Bit-exact text rendering: terms in descending grevlex order."""
    if not f:
        return "0"
    symbols = f.ring.symbols
    out: list[str] = []
    for exps, c in sorted(f.items(), key=lambda t: grevlex(t[0]), reverse=True):
        mono = _format_monomial(symbols, exps)
        coeff = format_rational(c)
        if not mono:
            term = coeff
        elif coeff == "1":
            term = mono
        elif coeff == "-1":
            term = "-" + mono
        else:
            term = f"{coeff}*{mono}"
        if not out:
            out.append(term)
        elif term.startswith("-"):
            out.append(" - " + term[1:])
        else:
            out.append(" + " + term)
    return "".join(out)


def monomial(ring: PolyRing, exps: Sequence[int]) -> Polynomial:
    return ring.from_dict({tuple(int(e) for e in exps): QQ.one})


def is_term(f: Polynomial) -> bool:
    """A single nonzero term c*x^a (a monomial up to a scalar)."""
    return len(f) == 1


def total_degree(f: Polynomial) -> int:
    return max((sum(m) for m in f.keys()), default=0)


def to_ring(f: Polynomial, ring: PolyRing) -> Polynomial:
    """Move f into a ring over the same variables (possibly another order)."""
    if f.ring == ring:
        return f
    if f.ring.symbols != ring.symbols:
        raise InputError(f"arity mismatch: {f.ring.symbols} vs {ring.symbols}")
    return ring.from_dict(dict(f))


# -----------------------------
# Monomial orders
# -----------------------------
@dataclass(frozen=True)
class _Slice:
    start: int
    stop: int | None

    def __call__(self, m):
        return m[self.start:self.stop]


@dataclass(frozen=True)
class MonomialOrderSpec:
    """lex | grevlex | block(first, second, split)."""

    kind: str = "grevlex"
    first: "MonomialOrderSpec | None" = None
    second: "MonomialOrderSpec | None" = None
    split: int = 0

    def key(self) -> MonomialOrder:
        if self.kind == "lex":
            return lex
        if self.kind in ("grevlex", "degrevlex"):
            return grevlex
        if self.kind == "block":
            if self.first is None or self.second is None or self.split < 1:
                raise InputError("block order needs two sub-orders and split >= 1")
            return ProductOrder(
                (self.first.key(), _Slice(0, self.split)),
                (self.second.key(), _Slice(self.split, None)),
            )
        raise InputError(f"unknown monomial order {self.kind!r}")


LEX = MonomialOrderSpec("lex")
GREVLEX = MonomialOrderSpec("grevlex")
DEFAULT_ORDER = GREVLEX


def elimination_order(split: int) -> MonomialOrderSpec:
    return MonomialOrderSpec("block", LEX, GREVLEX, split)


# -----------------------------
# Groebner kernel
# -----------------------------
@dataclass(frozen=True)
class GroebnerBasis:
    order: MonomialOrderSpec
    ring: PolyRing  # order-specific ring the elements live in
    elements: tuple[Polynomial, ...]

    def normal_form(self, f: Polynomial) -> Polynomial:
        g = to_ring(f, self.ring)
        if not self.elements:
            return f
        return to_ring(g.rem(list(self.elements)), f.ring)

    def reduces_to_zero(self, f: Polynomial) -> bool:
        return not self.normal_form(f)

    def in_ring(self, ring: PolyRing) -> list[Polynomial]:
        return [to_ring(g, ring) for g in self.elements]


def _buchberger(polys: Sequence[Polynomial], ring: PolyRing) -> tuple[Polynomial, ...]:
    gens = [to_ring(p, ring) for p in polys if p]
    if not gens:
        return ()
    basis = _groebner(gens, ring, method="buchberger")
    return tuple(sorted(basis, key=lambda g: ring.order(g.LM), reverse=True))


@dataclass(frozen=True, eq=False)
class Ideal:
    """Integral ideal of a polynomial ring given by a generator list.

    Generators are kept as given; reduced bases are cached per monomial order.
    Equality of ideals is semantic: use `equal`.
    """

    ring: PolyRing
    generators: tuple[Polynomial, ...]
    _bases: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.generators:
            raise InputError("an ideal needs at least one generator (use 0 for the zero ideal)")
        fixed = tuple(to_ring(g, self.ring) for g in self.generators)
        object.__setattr__(self, "generators", fixed)

    @classmethod
    def of(cls, ring: PolyRing, gens: Iterable[Polynomial | int]) -> "Ideal":
        out = []
        for g in gens:
            out.append(ring.ground_new(QQ.convert(g)) if isinstance(g, int) else g)
        return cls(ring, tuple(out))

    @classmethod
    def unit(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, (ring.one,))

    @classmethod
    def zero(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, (ring.zero,))

    @property
    def nonzero_generators(self) -> tuple[Polynomial, ...]:
        return tuple(g for g in self.generators if g)

    def is_zero(self) -> bool:
        return not self.nonzero_generators

    def basis(self, order: MonomialOrderSpec = DEFAULT_ORDER) -> GroebnerBasis:
        gb = self._bases.get(order)
        if gb is None:
            oring = self.ring.clone(order=order.key())
            elements = _buchberger(self.generators, oring)
            gb = GroebnerBasis(order, oring, elements)
            self._bases[order] = gb
            logger.debug("groebner basis: %d generators -> %d elements (%s)",
                         len(self.generators), len(elements), order.kind)
        return gb

    def contains(self, f: Polynomial) -> bool:
        if not f:
            return True
        return self.basis().reduces_to_zero(f)

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.generators)

    def is_unit(self) -> bool:
        return self.contains(self.ring.one)

    def is_principal(self) -> bool:
        """Exact when the reduced basis has at most one element (otherwise unknown, reported False)."""
        return len(self.basis().elements) <= 1

    def principal_generator(self) -> Polynomial | None:
        els = self.basis().elements
        if len(els) == 1:
            return to_ring(els[0], self.ring)
        return None

    def reduced_generators(self) -> list[Polynomial]:
        return self.basis().in_ring(self.ring) or [self.ring.zero]

    def format(self) -> str:
        return "(" + ", ".join(format_poly(g) for g in self.generators) + ")"

    def __repr__(self) -> str:
        return f"Ideal{self.format()}"


def groebner_kernel(ideal: Ideal, order: MonomialOrderSpec = DEFAULT_ORDER) -> GroebnerBasis:
    return ideal.basis(order)


def normal_form(f: Polynomial, basis: GroebnerBasis) -> Polynomial:
    return basis.normal_form(f)


def member(f: Polynomial, ideal: Ideal) -> bool:
    _check_arity(ideal.ring, f.ring)
    return ideal.contains(f)


def equal(i: Ideal, j: Ideal) -> bool:
    """Semantic equality via mutual generator membership."""
    _check_arity(i.ring, j.ring)
    return i.contains_ideal(j) and j.contains_ideal(i)


def _check_arity(a: PolyRing, b: PolyRing) -> None:
    if a.symbols != b.symbols:
        raise InputError(f"arity mismatch: {a.symbols} vs {b.symbols}")


# -----------------------------
# Ideal arithmetic
# -----------------------------
def ideal_sum(i: Ideal, j: Ideal) -> Ideal:
    _check_arity(i.ring, j.ring)
    return Ideal(i.ring, i.generators + j.generators)


def ideal_product(i: Ideal, j: Ideal) -> Ideal:
    _check_arity(i.ring, j.ring)
    prods = dedupe(g * h for g in i.nonzero_generators for h in j.nonzero_generators)
    return Ideal(i.ring, tuple(prods) or (i.ring.zero,))


def ideal_power(i: Ideal, k: int) -> Ideal:
    """I^k; intermediate generator lists are replaced by reduced bases to stay small."""
    if k < 0:
        raise InputError("negative ideal power")
    out = Ideal.unit(i.ring)
    for _ in range(k):
        prod = ideal_product(out, i)
        out = Ideal(i.ring, tuple(prod.reduced_generators()))
    return out


def scale_ideal(i: Ideal, f: Polynomial) -> Ideal:
    return Ideal(i.ring, tuple(f * g for g in i.generators))


@lru_cache(maxsize=64)
def _elimination_ring(symbols: tuple[Symbol, ...]) -> tuple[PolyRing, str]:
    names = {s.name for s in symbols}
    aux = next(n for n in ("_t", "_t0", "_t1", "_elim") if n not in names)
    order = elimination_order(1).key()
    return PolyRing((aux,) + tuple(s.name for s in symbols), QQ, order), aux


def _lift(f: Polynomial, tring: PolyRing, t_power: int = 0) -> Polynomial:
    return tring.from_dict({(t_power,) + m: c for m, c in f.items()})


def ideal_intersection(i: Ideal, j: Ideal) -> Ideal:
    """I ∩ J by eliminating t from t*I + (1 - t)*J."""
    _check_arity(i.ring, j.ring)
    if i.is_zero() or j.is_zero():
        return Ideal.zero(i.ring)
    tring, _ = _elimination_ring(i.ring.symbols)
    gens = [_lift(g, tring, 1) for g in i.nonzero_generators]
    gens += [_lift(g, tring) - _lift(g, tring, 1) for g in j.nonzero_generators]
    basis = _buchberger(gens, tring)
    kept = [
        i.ring.from_dict({m[1:]: c for m, c in g.items()})
        for g in basis
        if all(m[0] == 0 for m in g.keys())
    ]
    return Ideal(i.ring, tuple(kept) or (i.ring.zero,))


def colon_by_poly(i: Ideal, g: Polynomial) -> Ideal:
    """(I : g) = (I ∩ (g)) / g."""
    if not g:
        raise InputError("colon by the zero polynomial")
    if i.is_zero():
        return Ideal.zero(i.ring)
    g = to_ring(g, i.ring)
    meet = ideal_intersection(i, Ideal(i.ring, (g,)))
    quotients = [h.exquo(g) if h else h for h in meet.generators]
    return Ideal(i.ring, tuple(quotients))


def ideal_colon(i: Ideal, j: Ideal) -> Ideal:
    """(I : J) = ⋂_j (I : g_j) over the generators of J."""
    _check_arity(i.ring, j.ring)
    gens = j.nonzero_generators
    if not gens:
        raise InputError("colon by the zero ideal")
    out: Ideal | None = None
    for g in gens:
        part = colon_by_poly(i, g)
        out = part if out is None else ideal_intersection(out, part)
    return out  # type: ignore[return-value]


def saturate(i: Ideal, g: Polynomial) -> Ideal:
    """(I : g^∞), iterating colons until two consecutive ideals are equal."""
    current = i
    while True:
        nxt = colon_by_poly(current, g)
        if equal(nxt, current):
            return current
        current = nxt


def ideal_arithmetic(i: Ideal, j: Ideal, op: str) -> Ideal:
    op = (op or "").strip().lower()
    if op == "sum":
        return ideal_sum(i, j)
    if op == "product":
        return ideal_product(i, j)
    if op in ("intersect", "intersection"):
        return ideal_intersection(i, j)
    if op == "colon":
        return ideal_colon(i, j)
    if op in ("saturate", "saturate-by-poly"):
        gens = j.nonzero_generators
        if len(gens) != 1:
            raise InputError("saturation needs a single nonzero polynomial")
        return saturate(i, gens[0])
    raise InputError(f"unknown ideal operation {op!r}")
