# report.py
# Report records, summary counts and file export (JSON report + CSV table).
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import pandas as pd

from verdict import Verdict

RECORD_KEYS = (
    "index", "label", "check", "line", "verdict", "witnesses", "checks_run",
    "caps", "value", "expect", "notes", "details",
)


def _jsonable(x: Any) -> Any:
    if isinstance(x, Verdict):
        return x.label()
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


def build_record(directive, outcome, elapsed: float | None = None) -> dict[str, Any]:
    """One flat record per directive; key order is fixed."""
    rec = {
        "index": directive.index,
        "label": directive.label,
        "check": directive.check,
        "line": directive.line,
        "verdict": outcome.verdict.label(),
        "witnesses": [list(w) for w in outcome.witnesses],
        "checks_run": outcome.checks_run,
        "caps": directive.caps.as_dict(),
        "value": _jsonable(outcome.value),
        "expect": _jsonable(directive.expect),
        "notes": list(outcome.notes),
        "details": _jsonable(outcome.details),
    }
    if elapsed is not None:
        rec["timing_s"] = round(elapsed, 4)
    return rec


def _status(verdict_label: str) -> str:
    return "unknown" if verdict_label.startswith("unknown") else verdict_label


def summarize(records: list[dict[str, Any]]) -> dict[str, int]:
    counts = {"total": len(records), "pass": 0, "fail": 0, "unknown": 0}
    for r in records:
        counts[_status(r["verdict"])] += 1
    return counts


def exit_status(records: list[dict[str, Any]], strict_unknown: bool = False) -> int:
    """0 when no check failed (unknowns count as failures only with strict_unknown)."""
    summary = summarize(records)
    if summary["fail"] or (strict_unknown and summary["unknown"]):
        return 1
    return 0


def build_report(cfg, records: list[dict[str, Any]], strict_unknown: bool = False) -> dict[str, Any]:
    return {
        "session": cfg.source,
        "ring": cfg.ring.describe(),
        "seed_override": cfg.seed_override,
        "caps": cfg.caps.as_dict(),
        "corpora": {name: {"seed": c.seed, "ideals": len(c), "homogeneous": sum(c.homogeneous)}
                    for name, c in cfg.corpora.items()},
        "summary": summarize(records),
        "exit_status": exit_status(records, strict_unknown),
        "records": records,
        "echo": cfg.echo,
    }


def records_frame(records: list[dict[str, Any]]) -> pd.DataFrame:
    """Tabular view; nested cells become JSON strings so the CSV stays flat."""
    df = pd.DataFrame(records, columns=list(RECORD_KEYS))
    for col in ("witnesses", "caps", "value", "expect", "notes", "details"):
        if col in df.columns:
            df[col] = df[col].apply(lambda x: json.dumps(x, ensure_ascii=False) if isinstance(x, (dict, list)) else x)
    if records and "timing_s" in records[0]:
        df["timing_s"] = [r.get("timing_s") for r in records]
    return df


def write_report(report: dict[str, Any], path: str | Path) -> list[Path]:
    """Writes <path> (JSON) and a CSV table next to it; returns the written paths."""
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(report, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    table = out.with_suffix(".csv")
    records_frame(report["records"]).to_csv(table, index=False, encoding="utf-8")
    return [out, table]


def render_lines(records: list[dict[str, Any]]) -> list[str]:
    """One console line per record."""
    lines = []
    for r in records:
        line = f"{r['label']:<32} {r['verdict']}"
        if r["value"] is not None and not isinstance(r["value"], (dict, list)):
            line += f"  = {r['value']}"
        if r["witnesses"]:
            line += "  witness: " + " | ".join(r["witnesses"][0])
        lines.append(line)
    return lines
