import json
from pathlib import Path

import pytest

from data_loader import SessionError, load_ring, load_session, parse_session, resolve_literal
from semistar import Divisorial, Identity
from topology import SEMISTAR

SESSIONS = Path(__file__).resolve().parent.parent / "sessions"

RING = {"name": "R1", "variables": ["x", "y"], "degrees": [[1, 1]]}


def session_text(**sections) -> str:
    return json.dumps({"ring": RING, **sections}, indent=2)


def test_minimal_session():
    text = session_text(
        ideals={"I": ["x^2", "y^2"]},
        checks=[{"check": "member", "poly": "x*y", "ideal": "I"}],
    )
    cfg = parse_session(text)
    assert cfg.ring.name == "R1"
    assert cfg.ideals["I"].format() == "(x^2, y^2)"
    (d,) = cfg.checks
    assert d.label == "member#1"
    assert d.params["poly"] == cfg.ring.poly("x*y")
    assert d.line == next(i for i, l in enumerate(text.splitlines(), 1) if '"check": "member"' in l)


def test_invalid_json_reports_position():
    with pytest.raises(SessionError) as err:
        parse_session('{\n  "ring": \n}')
    assert err.value.line == 3
    assert str(err.value).startswith("line 3")


def test_unknown_top_level_key():
    text = session_text(checks=[], extras={})
    with pytest.raises(SessionError, match="extras") as err:
        parse_session(text)
    assert err.value.line == text.splitlines().index('  "extras": {}') + 1


def test_ring_is_required():
    with pytest.raises(SessionError, match="needs a ring"):
        parse_session('{"checks": []}')


def test_unknown_check_is_located():
    text = session_text(checks=[
        {"check": "member", "poly": "x", "ideal": ["x"]},
        {"check": "frobnicate"},
    ])
    with pytest.raises(SessionError, match="frobnicate") as err:
        parse_session(text)
    assert err.value.line == next(i for i, l in enumerate(text.splitlines(), 1) if "frobnicate" in l)


def test_unknown_and_missing_parameters():
    with pytest.raises(SessionError, match="unknown parameter"):
        parse_session(session_text(checks=[{"check": "member", "poly": "x", "ideal": ["x"], "ring": "R"}]))
    with pytest.raises(SessionError, match="needs 'ideal'"):
        parse_session(session_text(checks=[{"check": "member", "poly": "x"}]))


def test_bad_literal_names_the_parameter():
    with pytest.raises(SessionError, match=r"member\.poly"):
        parse_session(session_text(checks=[{"check": "member", "poly": "x + z", "ideal": ["x"]}]))


def test_bad_caps_override():
    with pytest.raises(SessionError):
        parse_session(session_text(checks=[{"check": "b_closure", "ideal": ["x"], "caps": {"warp": 3}}]))


def test_random_corpus_needs_seed():
    text = session_text(corpora={"C": {"count": 3}})
    with pytest.raises(SessionError, match="needs a seed"):
        parse_session(text)
    cfg = parse_session(text, seed_override=8)
    assert cfg.corpora["C"].seed == 8
    assert len(cfg.corpora["C"]) == 3


def test_seeded_directive_needs_seed():
    check = {"check": "valuation_meet_kr", "valuations": [{"weights": [[1, 1]]}]}
    with pytest.raises(SessionError, match="needs a seed"):
        parse_session(session_text(checks=[check]))
    cfg = parse_session(session_text(checks=[check]), seed_override=5)
    assert cfg.checks[0].params["seed"] == 5


def test_unknown_star_tag_is_located():
    text = session_text(stars={"bad": {"tag": "sharp"}})
    with pytest.raises(SessionError, match="stars.bad") as err:
        parse_session(text)
    assert err.value.line is not None


def test_semistar_sample_keeps_session_names():
    cfg = parse_session(session_text(
        stars={"d": {"tag": "identity"}, "v": {"tag": "divisorial"}},
        samples={"S": {"kind": "semistar", "points": ["d", "v"]}},
    ))
    sample = cfg.samples["S"]
    assert sample.kind == SEMISTAR
    assert sample.names == ["d", "v"]
    assert isinstance(sample.points[0], Identity)
    assert isinstance(sample.points[1], Divisorial)


def test_fractional_literal_with_denominator():
    cfg = parse_session(session_text(ideals={"E": {"den": "x", "gens": ["x", "y"]}}))
    assert cfg.ideals["E"].format() == "(1/(x))*(x, y)"


def test_load_bundled_session():
    cfg = load_session(SESSIONS / "axioms.session")
    assert set(cfg.stars) == {"d", "v", "h_x", "ext", "w"}
    assert cfg.stars["ext"].describe() == "extend(R[x/y])"
    assert cfg.corpora["C42"].seed == 42
    assert len(cfg.corpora["C42"]) == 20
    assert cfg.checks[2].caps.max_triples == 30
    assert cfg.checks[-1].expect == "<="


def test_custom_maps_are_not_session_stars():
    with pytest.raises(SessionError, match="unknown star tag 'custom'"):
        parse_session(session_text(stars={"square": {"tag": "custom", "map": "square"}}))


def test_all_bundled_sessions_parse():
    for path in sorted(SESSIONS.glob("*.session")):
        assert load_session(path).checks, path.name


def test_missing_file(tmp_path):
    with pytest.raises(SessionError, match="not found"):
        load_session(tmp_path / "nope.session")


def test_load_ring_accepts_both_shapes(tmp_path):
    bare = tmp_path / "bare.json"
    bare.write_text(json.dumps(RING), encoding="utf-8")
    wrapped = tmp_path / "wrapped.json"
    wrapped.write_text(json.dumps({"ring": RING}), encoding="utf-8")
    assert load_ring(bare).name == "R1"
    assert load_ring(wrapped).variables == load_ring(bare).variables


def test_resolve_literal_uses_session_names():
    cfg = parse_session(session_text(elements={"u": "x/y"}))
    assert resolve_literal(cfg, "element", "u") is cfg.elements["u"]
    assert resolve_literal(cfg, "int", 4) == 4
