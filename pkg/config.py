# config.py
from __future__ import annotations

import os
from dataclasses import dataclass, replace
from typing import Any, Mapping

from dotenv import load_dotenv

load_dotenv()


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name, "")
    try:
        return int(raw) if raw.strip() else default
    except ValueError:
        return default


# =========================
# DEFAULT CAPS (override via env / .env)
# =========================
ASCENT_CAP = _env_int("GRADSTAR_ASCENT_CAP", 5)
JOIN_CAP = _env_int("GRADSTAR_JOIN_CAP", 6)
SUBIDEAL_DEGREE = _env_int("GRADSTAR_SUBIDEAL_DEGREE", 8)
DM_BOUND = _env_int("GRADSTAR_DM_BOUND", 10)
SAMPLE_DEGREE = _env_int("GRADSTAR_SAMPLE_DEGREE", 2)
MAX_TRIPLES = _env_int("GRADSTAR_MAX_TRIPLES", 60)

REPORT_DIR = os.getenv("GRADSTAR_REPORT_DIR", "outputs")


@dataclass(frozen=True)
class Caps:
    """Search bounds threaded through every semi-decision procedure."""

    ascent: int = ASCENT_CAP
    join: int = JOIN_CAP
    subideal_degree: int = SUBIDEAL_DEGREE
    dm_bound: int = DM_BOUND
    sample_degree: int = SAMPLE_DEGREE
    max_triples: int = MAX_TRIPLES

    def override(self, values: Mapping[str, Any] | None) -> "Caps":
        """Return a copy with the given fields replaced; unknown keys are rejected."""
        if not values:
            return self
        known = set(self.__dataclass_fields__)
        bad = sorted(set(values) - known)
        if bad:
            raise ValueError(f"unknown cap(s): {', '.join(bad)}")
        fixed = {k: int(v) for k, v in values.items()}
        for k, v in fixed.items():
            if v < 1:
                raise ValueError(f"cap '{k}' must be positive, got {v}")
        return replace(self, **fixed)

    def as_dict(self) -> dict[str, int]:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


DEFAULT_CAPS = Caps()
