# utils.py
from __future__ import annotations

from itertools import product
from typing import Any, Iterable, Iterator


class InputError(ValueError):
    """Raised when an operation's precondition on its inputs is violated."""


def safe_int(x: Any, default: int | None = None) -> int | None:
    try:
        if x is None:
            return default
        return int(x)
    except (TypeError, ValueError):
        return default


def format_vector(vec: Iterable[int]) -> str:
    """Degree / value vectors are printed as bracketed integer tuples: [1, 2]."""
    return "[" + ", ".join(str(int(v)) for v in vec) + "]"


def exponent_vectors(n: int, max_total: int) -> Iterator[tuple[int, ...]]:
    """All exponent vectors of length n with total degree <= max_total, in a fixed order."""
    for total in range(max_total + 1):
        for e in product(range(total + 1), repeat=n):
            if sum(e) == total:
                yield e


def dedupe(items: Iterable[Any]) -> list[Any]:
    """Order-preserving de-duplication for hashable items."""
    seen: dict[Any, None] = {}
    for it in items:
        seen.setdefault(it, None)
    return list(seen)
