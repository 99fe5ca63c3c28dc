# corpus.py
# Seeded test corpora of fractional ideals and homogeneous scalars.
# PRNG: numpy PCG64, consumed in a fixed order so output is identical across platforms.

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator, Sequence

import numpy as np

from algebra_core import Ideal, Polynomial
from fractional import FractionalIdeal, KElement, is_homogeneous_fractional
from grading import GradedRing
from grvaluation import GrValuation
from utils import InputError, exponent_vectors

logger = logging.getLogger(__name__)

_COEFFS = (1, -1, 2, -2, 3)


@dataclass
class TestCorpus:
    __test__ = False  # not a pytest class

    ring: GradedRing
    seed: int | None
    ideals: list[FractionalIdeal]
    homogeneous: list[bool]
    scalars: list[KElement] = field(default_factory=list)
    names: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if len(self.homogeneous) != len(self.ideals):
            raise InputError("homogeneous flags must match the ideal list")
        if not self.names:
            self.names = [f"F{i + 1}" for i in range(len(self.ideals))]

    @classmethod
    def explicit(cls, ring: GradedRing, ideals: Sequence[FractionalIdeal],
                 scalars: Sequence[KElement] = (), names: Sequence[str] = ()) -> "TestCorpus":
        """Corpus from declared ideals; homogeneity is decided when possible, else treated as not homogeneous."""
        flags = [is_homogeneous_fractional(F, ring).is_true for F in ideals]
        return cls(ring, None, list(ideals), flags, list(scalars), list(names))

    def __len__(self) -> int:
        return len(self.ideals)

    def homogeneous_ideals(self) -> list[FractionalIdeal]:
        return [F for F, h in zip(self.ideals, self.homogeneous) if h]

    def _pool(self, homogeneous_only: bool) -> list[int]:
        return [i for i, h in enumerate(self.homogeneous) if h or not homogeneous_only]

    def _capped(self, candidates: list[tuple[int, ...]], limit: int | None) -> list[tuple[int, ...]]:
        """All candidates when they fit under the limit, else a PCG64 sample in enumeration order."""
        if limit is None or len(candidates) <= limit:
            return candidates
        rng = np.random.Generator(np.random.PCG64(self.seed or 0))
        picked = np.sort(rng.choice(len(candidates), size=max(int(limit), 0), replace=False))
        logger.debug("sampled %d of %d index tuples", len(picked), len(candidates))
        return [candidates[int(k)] for k in picked]

    def pair_indices(self, homogeneous_only: bool = False, limit: int | None = None) -> list[tuple[int, int]]:
        """Unordered pairs i < j of ideal indices."""
        return self._capped(list(combinations(self._pool(homogeneous_only), 2)), limit)  # type: ignore[return-value]

    def triple_indices(self, homogeneous_only: bool = False, limit: int | None = None) -> list[tuple[int, int, int]]:
        """Ordered (E, F, G) index triples with F != G."""
        pool = self._pool(homogeneous_only)
        candidates = [(e, f, g) for e, f, g in product(pool, repeat=3) if f != g]
        return self._capped(candidates, limit)  # type: ignore[return-value]

    def pairs(self, homogeneous_only: bool = False, limit: int | None = None) -> Iterator[tuple[FractionalIdeal, FractionalIdeal]]:
        for i, j in self.pair_indices(homogeneous_only, limit):
            yield self.ideals[i], self.ideals[j]

    def triples(self, homogeneous_only: bool = False, limit: int | None = None) -> Iterator[tuple[FractionalIdeal, ...]]:
        for e, f, g in self.triple_indices(homogeneous_only, limit):
            yield self.ideals[e], self.ideals[f], self.ideals[g]

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "ideals": [
                {"name": n, **F.as_dict(), "homogeneous": h}
                for n, F, h in zip(self.names, self.ideals, self.homogeneous)
            ],
            "scalars": [z.format() for z in self.scalars],
        }


# -----------------------------
# Generation
# -----------------------------
def _random_exponents(rng: np.random.Generator, n: int, max_degree: int) -> tuple[int, ...]:
    total = int(rng.integers(1, max_degree + 1))
    exps = [0] * n
    for _ in range(total):
        exps[int(rng.integers(0, n))] += 1
    return tuple(exps)


def _monomial_ideal(rng, ring: GradedRing, max_degree: int, max_gens: int) -> list[Polynomial]:
    k = int(rng.integers(1, max_gens + 1))
    return [ring.monomial(_random_exponents(rng, ring.arity, max_degree)) for _ in range(k)]


def _homogeneous_poly(rng, ring: GradedRing, max_degree: int) -> Polynomial:
    lead = _random_exponents(rng, ring.arity, max_degree)
    target = ring.degree_of(lead)
    same = [e for e in exponent_vectors(ring.arity, max_degree) if e != lead and ring.degree_of(e) == target]
    f = ring.monomial(lead)
    if same and rng.random() < 0.6:
        other = same[int(rng.integers(0, len(same)))]
        f += ring.monomial(other) * _COEFFS[int(rng.integers(0, len(_COEFFS)))]
    return f


def _binomial(rng, ring: GradedRing, max_degree: int) -> Polynomial:
    a = _random_exponents(rng, ring.arity, max_degree)
    b = _random_exponents(rng, ring.arity, max_degree)
    sign = 1 if rng.random() < 0.5 else -1
    f = ring.monomial(a) + ring.monomial(b) * sign
    return f if f else ring.monomial(a)


def generate_corpus(ring: GradedRing, seed: int, count: int = 20, max_degree: int = 4,
                    max_generators: int = 3, scalar_count: int = 4) -> TestCorpus:
    """Monomial, homogeneous and binomial ideals (some over monomial denominators) plus homogeneous scalars."""
    if seed is None:
        raise InputError("a generated corpus needs a seed")
    if min(count, max_degree, max_generators) < 1 or scalar_count < 0:
        raise InputError("corpus counts and bounds must be positive")
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    pr = ring.poly_ring
    ideals: list[FractionalIdeal] = []
    for _ in range(count):
        kind = int(rng.integers(0, 3))
        if kind == 0:
            gens = _monomial_ideal(rng, ring, max_degree, max_generators)
        elif kind == 1:
            k = int(rng.integers(1, max_generators + 1))
            gens = [_homogeneous_poly(rng, ring, max_degree) for _ in range(k)]
        else:
            k = int(rng.integers(1, min(max_generators, 2) + 1))
            gens = [_binomial(rng, ring, max_degree) for _ in range(k)]
        den = pr.one
        if rng.random() < 0.25:
            den = ring.monomial(_random_exponents(rng, ring.arity, 2))
        ideals.append(FractionalIdeal(den, Ideal(pr, tuple(gens))))

    scalars: list[KElement] = []
    for _ in range(scalar_count):
        num = ring.monomial(_random_exponents(rng, ring.arity, 2))
        den = ring.monomial(_random_exponents(rng, ring.arity, 2)) if rng.random() < 0.5 else pr.one
        scalars.append(KElement(num, den))

    corpus = TestCorpus(
        ring,
        int(seed),
        ideals,
        [is_homogeneous_fractional(F, ring).is_true for F in ideals],
        scalars,
    )
    logger.debug("corpus seed=%s: %d ideals (%d homogeneous), %d scalars",
                 seed, len(ideals), sum(corpus.homogeneous), len(scalars))
    return corpus


def monomial_corpus(ring: GradedRing, seed: int, count: int = 10, max_degree: int = 4,
                    max_generators: int = 3) -> TestCorpus:
    """Integral monomial ideals only (for the Newton closure properties)."""
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    pr = ring.poly_ring
    ideals = [
        FractionalIdeal(pr.one, Ideal(pr, tuple(_monomial_ideal(rng, ring, max_degree, max_generators))))
        for _ in range(count)
    ]
    return TestCorpus(ring, int(seed), ideals, [True] * count)


def random_polynomial(rng: np.random.Generator, ring: GradedRing, max_degree: int = 3) -> Polynomial:
    """One monomial, homogeneous or binomial polynomial (kinds drawn uniformly)."""
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return ring.monomial(_random_exponents(rng, ring.arity, max_degree))
    if kind == 1:
        return _homogeneous_poly(rng, ring, max_degree)
    return _binomial(rng, ring, max_degree)


def random_valuations(ring: GradedRing, seed: int, count: int = 20, max_rank: int = 2,
                      max_weight: int = 3) -> list[GrValuation]:
    """Weight stacks whose variable columns are lex >= 0."""
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    out = []
    for i in range(count):
        rank = int(rng.integers(1, max_rank + 1))
        first = [int(rng.integers(0, max_weight + 1)) for _ in range(ring.arity)]
        rows = [first]
        positive = [w > 0 for w in first]
        for _ in range(rank - 1):
            low = [-max_weight if p else 0 for p in positive]
            row = [int(rng.integers(lo, max_weight + 1)) for lo in low]
            positive = [p or w > 0 for p, w in zip(positive, row)]
            rows.append(row)
        out.append(GrValuation.of(rows, ring, name=f"V{i + 1}"))
    return out
