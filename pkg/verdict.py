# verdict.py
# Three-valued answers for the semi-decision procedures
# (capped searches, bounded overring ascents, sampled checks).
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable


class Truth(str, Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    value: Truth
    cap: int | None = None

    def __post_init__(self) -> None:
        if self.value is Truth.UNKNOWN and self.cap is None:
            raise ValueError("an unknown verdict must carry its cap")

    # -----------------------------
    # Constructors
    # -----------------------------
    @classmethod
    def true(cls) -> "Verdict":
        return cls(Truth.TRUE)

    @classmethod
    def false(cls) -> "Verdict":
        return cls(Truth.FALSE)

    @classmethod
    def unknown(cls, cap: int) -> "Verdict":
        return cls(Truth.UNKNOWN, int(cap))

    @classmethod
    def of(cls, flag: bool) -> "Verdict":
        return cls.true() if flag else cls.false()

    # -----------------------------
    # Queries
    # -----------------------------
    @property
    def is_true(self) -> bool:
        return self.value is Truth.TRUE

    @property
    def is_false(self) -> bool:
        return self.value is Truth.FALSE

    @property
    def is_unknown(self) -> bool:
        return self.value is Truth.UNKNOWN

    def __bool__(self) -> bool:
        raise TypeError("Verdict is three-valued; use .is_true / .is_false")

    def negate(self) -> "Verdict":
        if self.is_unknown:
            return self
        return Verdict.of(not self.is_true)

    def label(self) -> str:
        """Report label: pass / fail / unknown(cap)."""
        if self.is_true:
            return "pass"
        if self.is_false:
            return "fail"
        return f"unknown({self.cap})"

    def __str__(self) -> str:
        if self.is_unknown:
            return f"unknown(cap={self.cap})"
        return self.value.value


def all_of(verdicts: Iterable[Verdict]) -> Verdict:
    """Kleene conjunction; the first false wins, otherwise the largest cap is reported."""
    caps: list[int] = []
    for v in verdicts:
        if v.is_false:
            return v
        if v.is_unknown:
            caps.append(v.cap)  # type: ignore[arg-type]
    return Verdict.unknown(max(caps)) if caps else Verdict.true()


def any_of(verdicts: Iterable[Verdict]) -> Verdict:
    """Kleene disjunction."""
    caps: list[int] = []
    for v in verdicts:
        if v.is_true:
            return v
        if v.is_unknown:
            caps.append(v.cap)  # type: ignore[arg-type]
    return Verdict.unknown(max(caps)) if caps else Verdict.false()


# -----------------------------
# Check reports
# -----------------------------
@dataclass
class CheckReport:
    """Outcome of one property check; a false verdict always carries a witness."""

    name: str
    verdict: Verdict
    witnesses: list[tuple[str, ...]] = field(default_factory=list)
    checks_run: int = 0
    notes: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.verdict.is_false and not self.witnesses:
            raise ValueError(f"{self.name}: a failing report needs a witness")

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "verdict": self.verdict.label(),
            "witnesses": [list(w) for w in self.witnesses],
            "checks_run": self.checks_run,
            "notes": list(self.notes),
            **{k: (str(v) if isinstance(v, Verdict) else v) for k, v in self.details.items()},
        }


class CheckTally:
    """Accumulates instance verdicts for a CheckReport (first violation listed first)."""

    def __init__(self, name: str, max_witnesses: int = 5) -> None:
        self.name = name
        self.max_witnesses = max_witnesses
        self.verdicts: list[Verdict] = []
        self.witnesses: list[tuple[str, ...]] = []
        self.notes: list[str] = []

    def add(self, verdict: Verdict, *witness: str) -> Verdict:
        self.verdicts.append(verdict)
        if verdict.is_false and len(self.witnesses) < self.max_witnesses:
            self.witnesses.append(tuple(str(w) for w in witness))
        return verdict

    def note(self, text: str) -> None:
        if text not in self.notes:
            self.notes.append(text)

    @property
    def failed(self) -> bool:
        return bool(self.witnesses)

    def report(self, **details: Any) -> CheckReport:
        return CheckReport(
            name=self.name,
            verdict=all_of(self.verdicts),
            witnesses=list(self.witnesses),
            checks_run=len(self.verdicts),
            notes=list(self.notes),
            details=dict(details),
        )
