"""Command line: ``fill``, ``verify``, ``lefschetz`` and ``contact-check``.

Exit codes: 0 success, 1 mathematical failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from json.decoder import JSONObject
from json.scanner import py_make_scanner
from pathlib import Path

from .cobordism import build_concave_filling, count_vector, emit_kirby_script, euler_characteristic
from .contactmodel import contact_report
from .homology import ClassKind, Surface, classify
from .lefschetz import PencilData, build_pencil_assembly, validate_pencil
from .ledger import LedgerFormatError, ledger_to_json, replay_ledger
from .rewrite import DEFAULT_MAX_LETTERS, RewriteError, RewriteResult, rewrite_to_boundary_form
from .twistword import TwistLetter, TwistWord, parse_letter

EXIT_OK, EXIT_MATH, EXIT_INPUT = 0, 1, 2
SIGNS = {"+": 1, "-": -1, "−": -1}


@dataclass(frozen=True)
class InputIssue:
    where: str
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line} column {self.column}: {self.where}: {self.message}"


class InputError(ValueError):
    def __init__(self, issues: list[InputIssue]):
        super().__init__("\n".join(str(i) for i in issues))
        self.issues = issues


@dataclass(frozen=True)
class InputDocument:
    surface: Surface
    word: TwistWord
    mode: dict = field(default_factory=dict)


class _Located:
    """JSON loader that remembers where every object literal starts."""

    def __init__(self, text: str):
        self.text = text
        self.offsets: dict[int, int] = {}
        decoder = json.JSONDecoder()

        def parse_object(s_and_end, *args):
            start = s_and_end[1] - 1
            obj, end = JSONObject(s_and_end, *args)
            self.offsets[id(obj)] = start
            return obj, end

        decoder.parse_object = parse_object
        decoder.scan_once = py_make_scanner(decoder)
        self._decoder = decoder

    def load(self):
        try:
            self.value = self._decoder.decode(self.text)
        except json.JSONDecodeError as exc:
            raise InputError([InputIssue("syntax", exc.lineno, exc.colno, exc.msg)]) from None
        return self.value

    def position(self, obj) -> tuple[int, int]:
        off = self.offsets.get(id(obj), 0)
        line = self.text.count("\n", 0, off) + 1
        col = off - (self.text.rfind("\n", 0, off) + 1) + 1
        return line, col


_TARGET = re.compile(r"^\s*(chain|class|boundary)\s*:\s*(.+?)\s*$")
MODE_KEYS = {"ledger": bool, "max_letters": int}


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _letter_record(rec, surface: Surface) -> TwistLetter:
    """Build a letter from one record; raises ValueError with a plain message."""
    if isinstance(rec, str):
        letter = parse_letter(rec)
        letter.check(surface)
        return letter
    if not isinstance(rec, dict):
        raise ValueError("letter must be an object with 'target' and 'sign'")
    unknown = set(rec) - {"target", "sign", "trivial_genus"}
    if unknown:
        raise ValueError(f"unknown field(s) {sorted(unknown)}")
    if "target" not in rec or "sign" not in rec:
        raise ValueError("letter needs both 'target' and 'sign'")
    sign_tok = rec["sign"]
    if sign_tok not in SIGNS:
        raise ValueError(f"sign must be '+' or '-', got {sign_tok!r}")
    sign = SIGNS[sign_tok]
    target = rec["target"]
    m = _TARGET.match(target) if isinstance(target, str) else None
    if not m:
        raise ValueError(f"target must look like 'chain:k', 'class:[...]' or 'boundary:j', got {target!r}")
    kind, arg = m.groups()
    tg = rec.get("trivial_genus")
    if tg is not None and (not _is_int(tg) or tg < 0):
        raise ValueError("trivial_genus must be a nonnegative integer")
    if kind in ("chain", "boundary"):
        if tg is not None:
            raise ValueError("trivial_genus only applies to class targets")
        if not re.fullmatch(r"\d+", arg):
            raise ValueError(f"{kind} index must be a positive integer, got {arg!r}")
        k = int(arg)
        if kind == "chain":
            if not 1 <= k <= 2 * surface.genus:
                raise ValueError(f"chain index {k} outside 1..{2 * surface.genus}")
            return TwistLetter.chain(k, sign)
        if not 1 <= k <= surface.boundary:
            raise ValueError(f"boundary index {k} outside 1..{surface.boundary}")
        return TwistLetter.boundary(k, sign)
    try:
        coords = json.loads(arg)
    except json.JSONDecodeError:
        raise ValueError(f"class vector {arg!r} is not a list of integers") from None
    if not isinstance(coords, list) or not all(_is_int(c) for c in coords):
        raise ValueError(f"class vector {arg!r} is not a list of integers")
    if len(coords) != surface.rank:
        raise ValueError(f"class vector has length {len(coords)}, expected {surface.rank} (= 2g+b-1)")
    kind_ = classify(tuple(coords))
    if kind_ is ClassKind.IMPRIMITIVE:
        raise ValueError(f"class {coords} is imprimitive; a simple closed curve has primitive or zero class")
    if kind_ is ClassKind.TRIVIAL and tg is None:
        raise ValueError("a null-homologous class needs 'trivial_genus'")
    if kind_ is ClassKind.PRIMITIVE and tg is not None:
        raise ValueError("trivial_genus is only allowed for the zero class")
    return TwistLetter.of_class(tuple(coords), sign, tg)


def parse_input(text: str) -> InputDocument:
    """Parse and validate a fill document; raises :class:`InputError` listing every problem."""
    loc = _Located(text)
    doc = loc.load()
    issues: list[InputIssue] = []

    def issue(obj, where, msg):
        issues.append(InputIssue(where, *loc.position(obj), msg))

    if not isinstance(doc, dict):
        raise InputError([InputIssue("document", 1, 1, "top level must be an object")])
    unknown = set(doc) - {"surface", "word", "mode"}
    if unknown:
        issue(doc, "document", f"unknown field(s) {sorted(unknown)}")
    surf = doc.get("surface")
    surface = None
    if not isinstance(surf, dict):
        issue(doc, "surface", "missing or not an object with 'genus' and 'boundary'")
    else:
        g, b = surf.get("genus"), surf.get("boundary")
        if not _is_int(g) or g < 0:
            issue(surf, "surface.genus", f"must be a nonnegative integer, got {g!r}")
        elif not _is_int(b) or b < 1:
            issue(surf, "surface.boundary", f"must be a positive integer, got {b!r}")
        else:
            surface = Surface(g, b)
    word = doc.get("word", [])
    letters = []
    if not isinstance(word, list):
        issue(doc, "word", "must be a list of letter records")
    elif surface is not None:
        for i, rec in enumerate(word):
            try:
                letters.append(_letter_record(rec, surface))
            except ValueError as exc:
                issue(rec if isinstance(rec, dict) else doc, f"word[{i}]", str(exc))
    mode = doc.get("mode", {})
    if not isinstance(mode, dict):
        issue(doc, "mode", "must be an object")
        mode = {}
    for k, v in mode.items():
        t = MODE_KEYS.get(k)
        if t is None:
            issue(mode, f"mode.{k}", f"unknown flag; known flags are {sorted(MODE_KEYS)}")
        elif (t is int and (not _is_int(v) or v < 1)) or (t is bool and not isinstance(v, bool)):
            issue(mode, f"mode.{k}", f"expected {t.__name__}, got {v!r}")
    if issues:
        raise InputError(issues)
    return InputDocument(surface, TwistWord(surface, letters), dict(mode))


def parse_pencil(text: str) -> PencilData:
    loc = _Located(text)
    doc = loc.load()
    p = doc.get("pencil") if isinstance(doc, dict) else None
    if not isinstance(p, dict):
        raise InputError([InputIssue("pencil", 1, 1, "expected an object under 'pencil'")])
    line, col = loc.position(p)
    g, n, cycles = p.get("fiber_genus"), p.get("sections"), p.get("cycles")
    problems = []
    if not _is_int(g) or g < 0:
        problems.append(("pencil.fiber_genus", "must be a nonnegative integer"))
    if not _is_int(n) or n < 1:
        problems.append(("pencil.sections", "must be a positive integer (n > 0)"))
    if not isinstance(cycles, list) or not all(isinstance(c, list) and all(_is_int(x) for x in c) for c in cycles):
        problems.append(("pencil.cycles", "must be a list of integer vectors"))
    if problems:
        raise InputError([InputIssue(w, line, col, m) for w, m in problems])
    try:
        return PencilData(g, tuple(tuple(c) for c in cycles), n)
    except ValueError as exc:
        raise InputError([InputIssue("pencil.cycles", line, col, str(exc))]) from None


# --- fill ------------------------------------------------------------------------


@dataclass(frozen=True)
class FillOutput:
    result: RewriteResult
    summary: dict
    kirby: str
    ledger: str | None


def run_fill(doc: InputDocument, with_ledger: bool | None = None) -> FillOutput:
    max_letters = doc.mode.get("max_letters", DEFAULT_MAX_LETTERS)
    r = rewrite_to_boundary_form(doc.surface, doc.word, max_letters=max_letters)
    hd = build_concave_filling(r)
    chi = euler_characteristic(hd)
    counts = count_vector(hd)
    moves = r.move_counts()
    summary = {
        "input_surface": [doc.surface.genus, doc.surface.boundary],
        "input_letters": len(doc.word),
        "G1": r.G1,
        "a0": r.a0,
        "n_right": r.n_right,
        "n_promoted": r.n_promoted,
        "R_length": len(r.R),
        "moves": {k.value: moves[k] for k in sorted(moves, key=lambda k: k.value)},
        "handles": dict(zip(("rel_1h", "rel_2h", "cap_2h", "conv_0h", "conv_1h", "conv_2h"), counts)),
        "euler_characteristic": chi,
        "certification": r.certification,
    }
    if with_ledger is None:
        with_ledger = bool(doc.mode.get("ledger", False))
    return FillOutput(r, summary, emit_kirby_script(hd), ledger_to_json(r) if with_ledger else None)


def summary_lines(summary: dict) -> list[str]:
    out = []
    for k, v in summary.items():
        if isinstance(v, dict):
            v = " ".join(f"{a}={b}" for a, b in v.items())
        elif isinstance(v, list):
            v = ",".join(str(x) for x in v)
        out.append(f"{k}={v}")
    return out


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError([InputIssue(str(path), 0, 0, exc.strerror or str(exc))]) from None


def _cmd_fill(args) -> int:
    doc = parse_input(_read(args.input))
    try:
        out = run_fill(doc, with_ledger=args.ledger or None)
    except RewriteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    lines = summary_lines(out.summary)
    (outdir / "summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (outdir / "summary.json").write_text(json.dumps(out.summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    (outdir / "filling.kirby").write_text(out.kirby, encoding="utf-8")
    if out.ledger is not None:
        (outdir / "ledger.json").write_text(out.ledger, encoding="utf-8")
    print("\n".join(lines))
    print(f"artifacts written to {outdir}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    text = _read(args.ledger)
    try:
        report = replay_ledger(text)
    except LedgerFormatError as exc:
        raise InputError([InputIssue(args.ledger, 0, 0, str(exc))]) from None
    failed = [c for c in report.checks if not c.passed]
    for c in report.checks:
        if not args.quiet or not c.passed:
            print(c.line())
    ok = report.ok
    if args.kirby:
        expected = _read(args.kirby)
        same = report.result is not None and emit_kirby_script(build_concave_filling(report.result)) == expected
        print(("PASS" if same else "FAIL") + " kirby script matches replayed ledger")
        ok = ok and same
    print(f"verify: {len(report.checks) - len(failed)}/{len(report.checks)} checks passed")
    return EXIT_OK if ok else EXIT_MATH


def _cmd_lefschetz(args) -> int:
    p = parse_pencil(_read(args.input))
    verdict = validate_pencil(p)
    print(f"pencil g_F={p.fiber_genus} m={p.m} n={p.sections}")
    print(f"verdict={verdict.label}")
    if not verdict.ok:
        rows = [[int(x) for x in row] for row in verdict.matrix]
        print(f"monodromy_matrix={json.dumps(rows)}")
        return EXIT_MATH
    asm = build_pencil_assembly(p)
    for name, v in asm.pieces:
        print(f"piece {name}: chi={v}")
    print(f"euler_characteristic={asm.chi}")
    print(f"closed_formula={asm.chi_formula}")
    if args.kirby:
        Path(args.kirby).write_text(emit_kirby_script(asm.decomposition), encoding="utf-8")
    return EXIT_OK


def _cmd_contact(args) -> int:
    if not args.K > 0:
        raise InputError([InputIssue("--K", 0, 0, "must be positive")])
    if args.grid < 2:
        raise InputError([InputIssue("--grid", 0, 0, "needs at least 2 samples per axis")])
    rep = contact_report(args.K, args.grid)
    if args.json:
        print(json.dumps(rep.as_dict(), sort_keys=True))
    else:
        print("\n".join(rep.lines()))
    return EXIT_OK if rep.ok else EXIT_MATH


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="concave-forge", description="Concave symplectic fillings from Dehn-twist open books.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    f = sub.add_parser("fill", help="rewrite the monodromy and emit the handle decomposition")
    f.add_argument("input")
    f.add_argument("--out", default="concave-forge-out", help="output directory")
    f.add_argument("--ledger", action="store_true", help="also write ledger.json")
    f.set_defaults(func=_cmd_fill)
    v = sub.add_parser("verify", help="replay a ledger and check every move")
    v.add_argument("ledger")
    v.add_argument("--kirby", help="compare against this Kirby script")
    v.add_argument("--quiet", action="store_true", help="print failures and the total only")
    v.set_defaults(func=_cmd_verify)
    lf = sub.add_parser("lefschetz", help="validate pencil data and assemble the closed manifold")
    lf.add_argument("input")
    lf.add_argument("--kirby", help="write the assembly's Kirby script here")
    lf.set_defaults(func=_cmd_lefschetz)
    c = sub.add_parser("contact-check", help="numeric checks of the model contact form")
    c.add_argument("--K", type=float, default=1.0)
    c.add_argument("--grid", type=int, default=64)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=_cmd_contact)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        for i in exc.issues:
            print(f"input error: {i}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
