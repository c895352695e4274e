import dataclasses
import json

import pytest
from hypothesis import given, settings

from concave_forge.homology import Surface
from concave_forge.ledger import (
    LedgerFormatError,
    ledger_from_json,
    ledger_to_json,
    replay,
    replay_ledger,
    replay_result,
)
from concave_forge.rewrite import MoveKind, projected_genus, rewrite_to_boundary_form
from concave_forge.twistword import TwistLetter, TwistWord

from conftest import words

T = Surface(1, 1)


def _result(s, letters):
    return rewrite_to_boundary_form(s, TwistWord(s, letters))


@pytest.fixture(scope="module")
def mixed():
    s = Surface(1, 2)
    return _result(s, [TwistLetter.of_class((1, 1, 0)), TwistLetter.boundary(2, -1), TwistLetter.chain(2, -1)])


def test_round_trip_is_lossless(mixed):
    text = ledger_to_json(mixed)
    doc = ledger_from_json(text)
    assert doc.input_word == mixed.input_word
    assert doc.moves == mixed.ledger
    assert ledger_to_json(replay_ledger(text).result) == text


def test_one_move_per_line(mixed):
    lines = ledger_to_json(mixed).splitlines()
    assert lines[1] == '"format":"concave-forge ledger v1",'
    move_lines = [ln for ln in lines if ln.startswith('{"after"')]
    assert len(move_lines) == len(mixed.ledger)


def test_replay_all_pass(mixed):
    rep = replay_result(mixed)
    assert rep.ok
    assert rep.final == mixed.h1
    assert rep.result == mixed


def _tamper(r, index, **changes):
    moves = list(r.ledger)
    moves[index] = dataclasses.replace(moves[index], **changes)
    return replay(r.input_word, moves)


def _first(r, kind):
    return next(i for i, m in enumerate(r.ledger) if m.kind is kind)


def test_detects_wrong_resolved_class(mixed):
    i = _first(mixed, MoveKind.INSERT_RIGHT_TWIST)
    bad = tuple(x + 1 for x in mixed.ledger[i].resolved)
    rep = _tamper(mixed, i, resolved=bad)
    assert not rep.ok
    assert "resolved class mismatch" in rep.checks[i].detail


def test_detects_left_twist_insertion(mixed):
    i = _first(mixed, MoveKind.INSERT_RIGHT_TWIST)
    rep = _tamper(mixed, i, letter=mixed.ledger[i].letter.inverse())
    assert not rep.checks[i].passed


def test_detects_action_changing_rewrite():
    r = _result(T, [TwistLetter.chain(1, -1)])
    i = _first(r, MoveKind.EQUALITY_REWRITE)
    m = r.ledger[i]
    bad = m.replacement + (TwistLetter.chain(1),)
    rep = _tamper(r, i, replacement=bad)
    assert "segment action changed" in rep.checks[i].detail


def test_detects_hash_mismatch(mixed):
    rep = _tamper(mixed, 0, before="0-0000000000000000")
    assert "before-hash mismatch" in rep.checks[0].detail


def test_detects_wrong_surface(mixed):
    i = _first(mixed, MoveKind.JOIN_BOUNDARY)
    rep = _tamper(mixed, i, surface=Surface(5, 1))
    assert not rep.checks[i].passed


def test_detects_dropped_move(mixed):
    moves = list(mixed.ledger)
    del moves[3]
    assert not replay(mixed.input_word, moves).ok


@pytest.mark.parametrize(
    "text",
    ["", "{", '{"format": "other"}', '{"format": "concave-forge ledger v1"}',
     '{"format": "concave-forge ledger v1", "input": {"surface": [1, 1], "word": ["chain:9+"]}, "moves": [], "result": {}}'],
)
def test_bad_documents(text):
    with pytest.raises(LedgerFormatError):
        ledger_from_json(text)


def test_deterministic():
    s = Surface(2, 2)
    letters = [TwistLetter.of_class((1, 0, 1, 1, 0)), TwistLetter.chain(3, -1), TwistLetter.boundary(1)]
    assert ledger_to_json(_result(s, letters)) == ledger_to_json(_result(s, letters))


@settings(max_examples=25)
@given(w=words(max_len=5).filter(lambda w: projected_genus(w.surface, w) <= 6))
def test_replay_random(w):
    r = rewrite_to_boundary_form(w.surface, w)
    rep = replay_ledger(ledger_to_json(r))
    assert rep.ok, [c.line() for c in rep.checks if not c.passed]
    assert rep.final == r.h1
    json.loads(ledger_to_json(r))
