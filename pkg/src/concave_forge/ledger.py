"""Move ledgers: JSON round trip and independent replay.

The replayer does not trust the engine. It keeps its own copy of the word,
its own hashes and its own homological action ``M`` of the whole word, and
recomputes every resolved class along the prefix route
``D = M^{-1} P C`` (``P`` the action of the letters before the insertion
point) rather than the suffix route the engine uses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _intmat
from .homology import ClassKind, Surface, classify, jvec
from .rewrite import (
    DELTA,
    Move,
    MoveKind,
    RewriteResult,
    merged_genus,
    surface_move_map,
)
from .twistword import (
    HASH_BASE,
    HASH_PRIME,
    TwistLetter,
    TwistWord,
    letter_arrays,
    format_hash,
    letter_digest,
    letters_action,
    parse_letter,
    poly_hash,
)

FORMAT = "concave-forge ledger v1"


class LedgerFormatError(ValueError):
    pass


# --- serialization -------------------------------------------------------------


def _surface_json(s: Surface) -> list[int]:
    return [s.genus, s.boundary]


def move_to_json(m: Move) -> dict:
    out = {"kind": m.kind.value, "before": m.before, "after": m.after, "surface": _surface_json(m.surface)}
    if m.step is not None:
        out["step"] = m.step
    if m.kind is MoveKind.INSERT_RIGHT_TWIST:
        out["pos"] = m.position
        out["letter"] = m.letter.serialize()
        out["resolved"] = list(m.resolved)
    if m.kind is MoveKind.EQUALITY_REWRITE:
        out["rewrite"] = m.rewrite
        out["start"] = m.position
        out["stop"] = m.stop
        out["replacement"] = [x.serialize() for x in m.replacement]
    return out


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def ledger_to_json(r: RewriteResult) -> str:
    """Deterministic text: a small header, then one move per line."""
    head = {
        "format": FORMAT,
        "input": {"surface": _surface_json(r.input_word.surface), "word": r.input_word.serialize()},
        "result": {
            "surface": _surface_json(r.surface1),
            "a0": r.a0,
            "n_promoted": r.n_promoted,
            "n_right": r.n_right,
            "certification": r.certification,
            "h1": r.h1.serialize(),
            "R": r.R.serialize(),
            "h1_hash": r.h1.hash(),
        },
    }
    lines = ["{", f'"format":{_dump(head["format"])},', f'"input":{_dump(head["input"])},',
             f'"result":{_dump(head["result"])},', '"moves":[']
    moves = [_dump(move_to_json(m)) for m in r.ledger]
    lines += [m + ("," if i + 1 < len(moves) else "") for i, m in enumerate(moves)]
    lines += ["]", "}"]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class LedgerDocument:
    input_word: TwistWord
    moves: tuple[Move, ...]
    claimed: dict


def _surface(v, where: str) -> Surface:
    try:
        g, b = v
        return Surface(int(g), int(b))
    except (TypeError, ValueError) as exc:
        raise LedgerFormatError(f"{where}: bad surface {v!r} ({exc})") from None


def _letter(text, where: str) -> TwistLetter:
    try:
        return parse_letter(text)
    except (TypeError, ValueError) as exc:
        raise LedgerFormatError(f"{where}: bad letter {text!r} ({exc})") from None


def move_from_json(d: dict, where: str) -> Move:
    try:
        kind = MoveKind(d["kind"])
        common = dict(before=str(d["before"]), after=str(d["after"]), surface=_surface(d["surface"], where))
        if kind in (MoveKind.JOIN_BOUNDARY, MoveKind.STABILIZE_GENUS):
            return Move(kind, step=d.get("step"), **common)
        if kind is MoveKind.INSERT_RIGHT_TWIST:
            return Move(kind, position=int(d["pos"]), letter=_letter(d["letter"], where),
                        resolved=tuple(int(x) for x in d["resolved"]), **common)
        return Move(kind, position=int(d["start"]), stop=int(d["stop"]), rewrite=str(d["rewrite"]),
                    replacement=tuple(_letter(x, where) for x in d["replacement"]), **common)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, LedgerFormatError):
            raise
        raise LedgerFormatError(f"{where}: malformed move ({exc!r})") from None


def ledger_from_json(text: str) -> LedgerDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LedgerFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise LedgerFormatError(f"not a ledger (expected format {FORMAT!r})")
    try:
        inp = doc["input"]
        s = _surface(inp["surface"], "input")
        word = TwistWord(s, [_letter(x, f"input letter {i}") for i, x in enumerate(inp["word"])])
        moves = tuple(move_from_json(m, f"move {i}") for i, m in enumerate(doc["moves"]))
        claimed = dict(doc["result"])
    except (KeyError, TypeError) as exc:
        raise LedgerFormatError(f"missing field {exc}") from None
    except ValueError as exc:
        if isinstance(exc, LedgerFormatError):
            raise
        raise LedgerFormatError(str(exc)) from None
    return LedgerDocument(word, moves, claimed)


# --- replay --------------------------------------------------------------------


@dataclass(frozen=True)
class MoveCheck:
    index: int
    label: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.index:>6} {self.label}" + (f" ({self.detail})" if self.detail else "")


class _Replay:
    """Replay state: word, its hash, its action and a prefix cursor.

    The cursor holds the action and hash of ``letters[:_ppos]`` so runs of
    left-to-right insertions cost one update per letter passed.
    """

    def __init__(self, word: TwistWord):
        self.surface = word.surface
        self.letters = list(word.letters)
        self.h = poly_hash(self.letters)
        self._m = None
        self._minv = None
        self._ppos = 0
        self._p = None
        self._pre = 0
        self._pow = 1

    @property
    def hash(self) -> str:
        return format_hash(len(self.letters), self.h)

    def rehash(self):
        self.h = poly_hash(self.letters)

    def action(self):
        if self._m is None:
            self._m = letters_action(self.surface, self.letters)
            self._minv = _inverse_action(self.surface, self.letters)
        return self._m, self._minv

    def prefix(self, p: int):
        if self._p is None or p < self._ppos:
            self._p = _intmat.identity(self.surface.rank)
            self._ppos, self._pre, self._pow = 0, 0, 1
        q = self._p
        for x in self.letters[self._ppos : p]:
            c, jc = letter_arrays(x, self.surface)
            q = _intmat.right_transvect(q, c, jc, x.sign)
            self._pre = (self._pre + letter_digest(x) * self._pow) % HASH_PRIME
            self._pow = self._pow * HASH_BASE % HASH_PRIME
        self._p, self._ppos = q, p
        return q

    def insert(self, p: int, letter: TwistLetter):
        """Insert at the cursor position ``p`` (call :meth:`prefix` first)."""
        d = letter_digest(letter)
        self.h = (self._pre + d * self._pow + HASH_BASE * (self.h - self._pre)) % HASH_PRIME
        c, jc = letter_arrays(letter, self.surface)
        self._p = _intmat.right_transvect(self._p, c, jc, letter.sign)
        self._pre = (self._pre + d * self._pow) % HASH_PRIME
        self._pow = self._pow * HASH_BASE % HASH_PRIME
        self._ppos = p + 1
        self.letters.insert(p, letter)

    def stale(self):
        self._m = self._minv = None
        self._p = None


def _inverse_action(surface, letters):
    q = _intmat.identity(surface.rank)
    for x in reversed(letters):
        c, jc = letter_arrays(x, surface)
        q = _intmat.right_transvect(q, c, jc, -x.sign)
    return q


def _valid_insert(letter: TwistLetter, surface: Surface) -> str:
    if not letter.is_right or letter.is_boundary:
        return "inserted letter is not an interior right twist"
    try:
        letter.check(surface)
    except ValueError as exc:
        return str(exc)
    if classify(letter.class_coords(surface)) is not ClassKind.PRIMITIVE:
        return "inserted twist is homologically trivial"
    return ""


def _step(rp: _Replay, i: int, m: Move) -> MoveCheck:
    problems = []
    if rp.hash != m.before:
        problems.append("before-hash mismatch")
    label = m.kind.value
    if m.kind in (MoveKind.JOIN_BOUNDARY, MoveKind.STABILIZE_GENUS):
        label += f"/{m.step}" if m.step else ""
        try:
            new, letter_map = surface_move_map(m.kind, m.step, rp.surface)
        except ValueError as exc:
            return MoveCheck(i, label, False, str(exc))
        if new != m.surface:
            problems.append(f"surface {new} != recorded {m.surface}")
        rp.letters = [letter_map(x) for x in rp.letters]
        rp.surface = new
        rp.stale()
        rp.rehash()
    elif m.kind is MoveKind.INSERT_RIGHT_TWIST:
        label += f"@{m.position}"
        p = m.position
        if not 0 <= p <= len(rp.letters):
            return MoveCheck(i, label, False, "position out of range")
        bad = _valid_insert(m.letter, rp.surface)
        if bad:
            return MoveCheck(i, label, False, bad)
        mm, minv = rp.action()
        c, _ = letter_arrays(m.letter, rp.surface)
        d = _intmat.matmul(minv, _intmat.matmul(rp.prefix(p), c))
        if _intmat.to_tuple(d) != tuple(m.resolved):
            problems.append("resolved class mismatch")
        # appending tau_D must equal the insertion
        dvec = _intmat.vector(_intmat.to_tuple(d))
        jd = jvec(rp.surface, dvec)
        new_m = _intmat.right_transvect(mm, dvec, jd, 1)
        new_minv = _intmat.left_transvect(dvec, jd, -1, minv)
        rp.insert(p, m.letter)
        rp._m, rp._minv = new_m, new_minv
        if classify(_intmat.to_tuple(d)) is not ClassKind.PRIMITIVE:
            problems.append("resolved class is not primitive")
    else:
        label += f"/{m.rewrite}[{m.position}:{m.stop}]"
        a, b = m.position, m.stop
        if not 0 <= a <= b <= len(rp.letters):
            return MoveCheck(i, label, False, "segment out of range")
        try:
            for x in m.replacement:
                x.check(rp.surface)
        except ValueError as exc:
            return MoveCheck(i, label, False, str(exc))
        old = letters_action(rp.surface, rp.letters[a:b])
        new = letters_action(rp.surface, m.replacement)
        if not _intmat.equal(old, new):
            problems.append("segment action changed")
        if m.surface != rp.surface:
            problems.append("surface mismatch")
        rp.letters[a:b] = m.replacement
        rp.rehash()
        if rp._p is not None and a < rp._ppos:
            rp._p = None
    if rp.hash != m.after:
        problems.append("after-hash mismatch")
    return MoveCheck(i, label, not problems, "; ".join(problems))


@dataclass(frozen=True)
class ReplayReport:
    checks: tuple[MoveCheck, ...]
    final: TwistWord
    result: RewriteResult | None

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks) and self.result is not None


def replay(input_word: TwistWord, moves, claimed: dict | None = None) -> ReplayReport:
    """Re-execute ``moves`` from ``input_word`` and check every step."""
    rp = _Replay(input_word)
    checks = [_step(rp, i, m) for i, m in enumerate(moves)]
    final = TwistWord(rp.surface, rp.letters)
    n = len(checks)
    out = []

    def add(label, ok, detail=""):
        out.append(MoveCheck(n + len(out), label, bool(ok), "" if ok else detail))

    shape_ok = bool(rp.letters) and rp.letters[0] == DELTA and not any(x.is_boundary for x in rp.letters[1:]) \
        and not any(x.is_right for x in rp.letters[1:]) and rp.surface.boundary == 1
    add("final word is delta . (left twists)", shape_ok, "final word has the wrong shape")
    mm, _ = rp.action()
    fresh = letters_action(rp.surface, rp.letters)
    add("tracked action equals recomputed action", _intmat.equal(mm, fresh), "action drift")
    result = None
    if shape_ok:
        R = TwistWord(rp.surface, rp.letters[1:]).inverse()
        r_ok = all(classify(x.class_coords(rp.surface)) is ClassKind.PRIMITIVE for x in R)
        add("R consists of nontrivial right twists", r_ok, "trivial letter in R")
        inv_r = _inverse_action(rp.surface, R.letters)
        add("homology certificate action(h1) = action(R)^-1", _intmat.equal(fresh, inv_r), "certificate failed")
        claimed = claimed or {}
        a0 = int(claimed.get("a0", rp.surface.genus))
        n_right = int(claimed.get("n_right", 1))
        n_promoted = int(claimed.get("n_promoted", n_right))
        try:
            genus_ok = merged_genus(a0, n_right) == rp.surface.genus
        except (ValueError, ArithmeticError):
            genus_ok = False
        add("genus formula", genus_ok, f"a0={a0} n={n_right} G1={rp.surface.genus}")
        if "h1" in claimed:
            add("final word matches recorded h1", list(claimed["h1"]) == final.serialize(), "h1 differs")
        if "surface" in claimed:
            add("final surface matches record", list(claimed["surface"]) == _surface_json(rp.surface), "surface differs")
        if all(c.passed for c in checks + out):
            result = RewriteResult(input_word, rp.surface, final, R, tuple(moves), n_right, a0, n_promoted)
    return ReplayReport(tuple(checks + out), final, result)


def replay_ledger(text: str) -> ReplayReport:
    doc = ledger_from_json(text)
    return replay(doc.input_word, doc.moves, doc.claimed)


def replay_result(r: RewriteResult) -> ReplayReport:
    return replay(r.input_word, r.ledger, {
        "a0": r.a0, "n_right": r.n_right, "n_promoted": r.n_promoted,
        "h1": r.h1.serialize(), "surface": _surface_json(r.surface1),
    })


def insertion_factor_holds(before: np.ndarray, after: np.ndarray, move: Move) -> bool:
    """``after == before . T_D`` for the move's resolved class ``D``."""
    s = move.surface
    d = _intmat.vector(move.resolved)
    return _intmat.equal(after, _intmat.right_transvect(before, d, jvec(s, d), 1))
