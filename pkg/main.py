# main.py
# gradstar command line: `run` executes a session file, `corpus` prints a seeded test corpus.
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.logging import RichHandler

from config import REPORT_DIR
from corpus import generate_corpus, monomial_corpus
from data_loader import SessionError, load_ring, load_session
from report import build_report, exit_status, render_lines, summarize, write_report
from runner import run_session
from utils import InputError

# =========================
# CONFIG
# =========================
# exit codes: 0 pass, 1 a check failed, 2 input error
EXIT_INPUT = 2

app = typer.Typer(add_completion=False, help="Homogeneous semistar operations on graded polynomial rings.")
console = Console()


def _setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _input_error(e: Exception) -> typer.Exit:
    console.print(f"[red]input error[/red] {e}")
    return typer.Exit(EXIT_INPUT)


@app.command()
def run(
    session: Path = typer.Argument(..., help="Session file (UTF-8 JSON)."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override every corpus / sample seed."),
    report: Optional[Path] = typer.Option(None, "--report", help="Write the JSON report here (plus a CSV table)."),
    strict_unknown: bool = typer.Option(False, "--strict-unknown", help="Unknown verdicts fail the run."),
    jobs: int = typer.Option(1, "--jobs", min=1, help="Worker processes for the checks."),
    timing: bool = typer.Option(False, "--timing", help="Record per-check wall time in the report."),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging."),
) -> None:
    """Run every check directive of SESSION in declaration order."""
    _setup_logging(verbose)
    try:
        cfg = load_session(session, seed)
        records = run_session(cfg, jobs=jobs, timing=timing)
    except (SessionError, InputError) as e:
        raise _input_error(e)

    for line in render_lines(records):
        console.print(line, markup=False, highlight=False)
    summary = summarize(records)
    console.print(f"\n{summary['pass']} pass, {summary['fail']} fail, {summary['unknown']} unknown ({summary['total']} checks)")

    full = build_report(cfg, records, strict_unknown)
    if report is not None:
        written = write_report(full, report)
        console.print(f"✅ Saved report to: {', '.join(str(p) for p in written)}")
    raise typer.Exit(exit_status(records, strict_unknown))


@app.command()
def corpus(
    ring_file: Path = typer.Argument(..., help="Ring file: {\"variables\": [...], \"degrees\": [[...]]}."),
    seed: int = typer.Option(..., "--seed", help="PCG64 seed."),
    count: int = typer.Option(20, "--count", min=1, help="Number of ideals."),
    max_degree: int = typer.Option(4, "--max-degree", min=1),
    max_generators: int = typer.Option(3, "--max-generators", min=1),
    monomial: bool = typer.Option(False, "--monomial", help="Monomial ideals only."),
    out: Optional[Path] = typer.Option(None, "--out", help=f"Write JSON here (e.g. {REPORT_DIR}/corpus.json)."),
    verbose: bool = typer.Option(False, "--verbose", "-v"),
) -> None:
    """Print (or save) a reproducible corpus of fractional ideals."""
    _setup_logging(verbose)
    try:
        ring = load_ring(ring_file)
        if monomial:
            generated = monomial_corpus(ring, seed, count, max_degree, max_generators)
        else:
            generated = generate_corpus(ring, seed, count, max_degree, max_generators)
    except (SessionError, InputError) as e:
        raise _input_error(e)

    text = json.dumps({"ring": ring.describe(), **generated.as_dict()}, ensure_ascii=False, indent=2)
    if out is None:
        console.print(text, markup=False, highlight=False)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text + "\n", encoding="utf-8")
    console.print(f"✅ Saved corpus ({len(generated)} ideals) to: {out}")


if __name__ == "__main__":
    app()
