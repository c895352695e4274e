"""Rewriting an open book monodromy into boundary-twist form.

Starting from a page ``S`` and a twist word ``h`` the engine reaches a page
``S1`` with one boundary component and ``h1 = delta . R^{-1}``, where
``delta`` twists about the boundary and ``R`` is a product of right twists
about homologically nontrivial curves. Only two kinds of cobordism moves
are used (attaching 1-handles to the page, inserting nontrivial right
twists); everything else is an equality of mapping classes. Every step is
logged as a :class:`Move` so the whole run can be replayed and checked.

Stages, in order: ``connect_boundary``, genus floor, ``normalize_twists``,
``promote_rights``, ``ensure_odd``, ``stabilize_and_merge``.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import _intmat
from .homology import ClassKind, HomologyClass, Surface, chain_from_basis, classify, symplectic_complete
from .twistword import (
    HASH_BASE,
    HASH_PRIME,
    TargetKind,
    TwistLetter,
    TwistWord,
    chain_letters,
    format_hash,
    letter_arrays,
    letter_digest,
    letters_inverse_action,
    poly_hash,
)

DELTA = TwistLetter.boundary(1, 1)

# refuse to materialize words longer than this many letters
DEFAULT_MAX_LETTERS = 5_000_000


class RewriteError(ValueError):
    """A stage precondition failed; ``stage`` names the stage."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


class MoveKind(enum.Enum):
    JOIN_BOUNDARY = "JoinBoundary"
    STABILIZE_GENUS = "StabilizeGenus"
    INSERT_RIGHT_TWIST = "InsertRightTwist"
    EQUALITY_REWRITE = "EqualityRewrite"


SURFACE_MOVES = (MoveKind.JOIN_BOUNDARY, MoveKind.STABILIZE_GENUS)


@dataclass(frozen=True)
class Move:
    """One ledger entry.

    ``surface`` is the page after the move. Insertions record ``position``,
    the inserted ``letter`` and the ``resolved`` class ``D`` such that the
    insertion equals appending a right twist about ``D``. Equality rewrites
    replace ``letters[position:stop]`` by ``replacement``. Stabilizations
    come in two ``step``s: ``split`` (band with both feet on the boundary)
    then ``join`` (band joining the two resulting boundary circles).
    """

    kind: MoveKind
    before: str
    after: str
    surface: Surface
    position: int | None = None
    stop: int | None = None
    letter: TwistLetter | None = None
    resolved: tuple[int, ...] | None = None
    rewrite: str | None = None
    replacement: tuple[TwistLetter, ...] | None = None
    step: str | None = None


# --- page stabilizations -------------------------------------------------------


def join_boundary_map(surface: Surface) -> tuple[Surface, callable]:
    """Attach a band joining boundary components 1 and ``b``.

    ``d_1`` becomes the new ``a_{g+1}``; the band core closes up to the dual
    ``b_{g+1}``. The remaining ``d_j`` shift down by one.
    """
    g, b = surface.genus, surface.boundary
    if b < 2:
        raise RewriteError("stabilize", f"joining boundary circles needs b >= 2, got {surface}")
    new = Surface(g + 1, b - 1)

    def coords_map(x):
        return tuple(x[: 2 * g]) + (x[2 * g], 0) + tuple(x[2 * g + 1 :])

    def letter_map(letter: TwistLetter) -> TwistLetter:
        if letter.kind is TargetKind.CHAIN:
            return letter
        if letter.kind is TargetKind.CLASS:
            return TwistLetter(letter.kind, letter.sign, coords=coords_map(letter.coords),
                               trivial_genus=letter.trivial_genus)
        j = letter.index
        if 1 < j < b:
            return TwistLetter.boundary(j - 1, letter.sign)
        return TwistLetter.of_class(coords_map(letter.class_coords(surface)), letter.sign)

    return new, letter_map


def split_boundary_map(surface: Surface) -> tuple[Surface, callable]:
    """Attach a band with both feet on the single boundary circle.

    The old boundary-parallel curve now bounds the old page, so its twist
    becomes a null-homologous class twist of that genus.
    """
    g, b = surface.genus, surface.boundary
    if b != 1:
        raise RewriteError("stabilize", f"splitting expects one boundary component, got {surface}")
    new = Surface(g, 2)

    def letter_map(letter: TwistLetter) -> TwistLetter:
        if letter.kind is TargetKind.CHAIN:
            return letter
        if letter.kind is TargetKind.CLASS:
            return TwistLetter(letter.kind, letter.sign, coords=letter.coords + (0,),
                               trivial_genus=letter.trivial_genus)
        return TwistLetter.of_class((0,) * new.rank, letter.sign, trivial_genus=g)

    return new, letter_map


def surface_move_map(kind: MoveKind, step: str | None, surface: Surface):
    if kind is MoveKind.JOIN_BOUNDARY or (kind is MoveKind.STABILIZE_GENUS and step == "join"):
        return join_boundary_map(surface)
    if kind is MoveKind.STABILIZE_GENUS and step == "split":
        return split_boundary_map(surface)
    raise RewriteError("stabilize", f"unknown surface move {kind.value}/{step}")


# --- the engine --------------------------------------------------------------


class _Engine:
    """Mutable working word that logs every change as a :class:`Move`.

    Resolved classes of insertions are computed from the suffix: inserting
    ``tau_C`` before ``B`` equals appending ``tau_D`` with
    ``D = B^{-1}(C)``. A cursor keeps ``B^{-1}`` (and the prefix hash) for a
    moving position, so left-to-right insertion runs cost one transvection
    per letter passed.
    """

    def __init__(self, surface: Surface, letters, max_letters: int = DEFAULT_MAX_LETTERS):
        self.surface = surface
        self.letters: list[TwistLetter] = list(letters)
        self.moves: list[Move] = []
        self.max_letters = max_letters
        self._h = poly_hash(self.letters)
        self._reset_cursor()

    @property
    def hash(self) -> str:
        return format_hash(len(self.letters), self._h)

    def word(self) -> TwistWord:
        return TwistWord(self.surface, self.letters)

    def _reset_cursor(self) -> None:
        self._pos = 0
        self._pre = 0
        self._pow = 1
        self._qinv = None

    def _advance(self, p: int) -> None:
        if p < self._pos:
            self._reset_cursor()
        if self._qinv is None:
            self._qinv = letters_inverse_action(self.surface, self.letters[self._pos :])
        q = self._qinv
        for i in range(self._pos, p):
            x = self.letters[i]
            c, jc = letter_arrays(x, self.surface)
            q = _intmat.right_transvect(q, c, jc, x.sign)
            self._pre = (self._pre + letter_digest(x) * self._pow) % HASH_PRIME
            self._pow = self._pow * HASH_BASE % HASH_PRIME
        self._qinv = q
        self._pos = p

    def _budget(self, extra: int) -> None:
        if len(self.letters) + extra > self.max_letters:
            raise RewriteError(
                "budget",
                f"word would exceed {self.max_letters} letters; raise max_letters to continue",
            )

    def insert(self, p: int, letter: TwistLetter) -> None:
        if not letter.is_right or letter.is_boundary:
            raise RewriteError("insert", f"only interior right twists may be inserted, got {letter}")
        if classify(letter.class_coords(self.surface)) is not ClassKind.PRIMITIVE:
            raise RewriteError("insert", f"inserted twist {letter} is not homologically nontrivial")
        self._budget(1)
        before = self.hash
        self._advance(p)
        c, _ = letter_arrays(letter, self.surface)
        resolved = _intmat.to_tuple(_intmat.matvec_sparse(self._qinv, c))
        d = letter_digest(letter)
        self._h = (self._pre + d * self._pow + HASH_BASE * (self._h - self._pre)) % HASH_PRIME
        self.letters.insert(p, letter)
        self._pre = (self._pre + d * self._pow) % HASH_PRIME
        self._pow = self._pow * HASH_BASE % HASH_PRIME
        self._pos = p + 1
        self.moves.append(Move(MoveKind.INSERT_RIGHT_TWIST, before, self.hash, self.surface,
                               position=p, letter=letter, resolved=resolved))

    def rewrite(self, start: int, stop: int, replacement, kind: str) -> None:
        replacement = tuple(replacement)
        self._budget(len(replacement) - (stop - start))
        before = self.hash
        self.letters[start:stop] = replacement
        self._h = poly_hash(self.letters)
        if start < self._pos:
            self._reset_cursor()
        # an equality rewrite at or after the cursor leaves the suffix action unchanged
        self.moves.append(Move(MoveKind.EQUALITY_REWRITE, before, self.hash, self.surface,
                               position=start, stop=stop, rewrite=kind, replacement=replacement))

    def surface_move(self, kind: MoveKind, step: str | None = None) -> None:
        before = self.hash
        new, letter_map = surface_move_map(kind, step, self.surface)
        self.letters = [letter_map(x) for x in self.letters]
        self.surface = new
        self._h = poly_hash(self.letters)
        self._reset_cursor()
        self.moves.append(Move(kind, before, self.hash, new, step=step))


# --- stages ------------------------------------------------------------------


def _connect(eng: _Engine) -> None:
    while eng.surface.boundary > 1:
        eng.surface_move(MoveKind.JOIN_BOUNDARY)


def _stabilize_to(eng: _Engine, genus: int) -> None:
    if eng.surface.boundary != 1:
        raise RewriteError("stabilize", f"genus stabilization expects one boundary component, got {eng.surface}")
    while eng.surface.genus < genus:
        eng.surface_move(MoveKind.STABILIZE_GENUS, "split")
        eng.surface_move(MoveKind.STABILIZE_GENUS, "join")


def _genus_floor(letters) -> int:
    need = 1
    for x in letters:
        if x.is_trivial_class:
            need = max(need, x.trivial_genus)
    return need


def _normalize(eng: _Engine) -> None:
    g = eng.surface.genus
    if eng.surface.boundary != 1:
        raise RewriteError("normalize", f"expects one boundary component, got {eng.surface}")
    i = 0
    while i < len(eng.letters):
        x = eng.letters[i]
        if x.is_trivial_class:
            k = x.trivial_genus
            if k is None:
                raise RewriteError("normalize", f"letter {i} lacks its trivial_genus annotation")
            if k > g:
                raise RewriteError("normalize", f"letter {i} bounds genus {k} > {g}; stabilize first")
            repl = chain_letters(k, sign=x.sign) if k else ()
            eng.rewrite(i, i + 1, repl, "substitute_trivial_twist" if k else "delete_disk_twist")
            i += len(repl)
        elif x.is_boundary and not x.is_right:
            if g < 1:
                raise RewriteError("normalize", "a boundary twist on a disk must be deleted before normalizing")
            repl = chain_letters(g, sign=-1)
            eng.rewrite(i, i + 1, repl, "expand_boundary_twist")
            i += len(repl)
        else:
            i += 1


def _chain_block(letter: TwistLetter, surface: Surface) -> tuple[TwistLetter, ...]:
    """``(tau_1 ... tau_2a)^(4a+2)`` for a chain filling the page whose first curve is ``letter``'s."""
    a = surface.genus
    if letter.kind is TargetKind.CHAIN and letter.index == 1:
        return chain_letters(a)
    basis = symplectic_complete(HomologyClass(surface, letter.class_coords(surface)))
    chain = [TwistLetter.of_class(e.coords) for e in chain_from_basis(basis)]
    block = tuple(chain) * (4 * a + 2)
    return (letter,) + block[1:]


def _leading_deltas(letters) -> int:
    n = 0
    for x in letters:
        if not (x.is_boundary and x.is_right):
            break
        n += 1
    return n


def _promote(eng: _Engine) -> int:
    s = eng.surface
    if s.boundary != 1:
        raise RewriteError("promote", f"expects one boundary component, got {s}")
    if s.genus < 1:
        raise RewriteError("promote", "the page must have genus >= 1; stabilize first")
    for i, x in enumerate(eng.letters):
        if x.is_trivial_class:
            raise RewriteError("promote", f"letter {i} is null-homologous; normalize first")
        if x.is_boundary and not x.is_right:
            raise RewriteError("promote", f"letter {i} is a left boundary twist; normalize first")
    n = _leading_deltas(eng.letters)
    while True:
        p = next((i for i in range(n, len(eng.letters)) if eng.letters[i].is_right), None)
        if p is None:
            return n
        x = eng.letters[p]
        if not x.is_boundary:
            block = _chain_block(x, eng.surface)
            for j in range(1, len(block)):
                eng.insert(p + j, block[j])
            eng.rewrite(p, p + len(block), (DELTA,), "chain_relation_collapse")
        if p > n:
            eng.rewrite(n, p + 1, (DELTA,) + tuple(eng.letters[n:p]), "commute_boundary_front")
        n += 1


def _ensure_odd(eng: _Engine, n: int) -> int:
    if n % 2 == 1:
        return n
    block = chain_letters(eng.surface.genus)
    for j, x in enumerate(block):
        eng.insert(j, x)
    eng.rewrite(0, len(block), (DELTA,), "chain_relation_collapse")
    return n + 1


def merged_genus(a: int, n: int) -> int:
    """Genus ``G`` with ``(4a+2) n == 4G + 2``; ``n`` must be odd."""
    if n < 1 or n % 2 == 0:
        raise RewriteError("merge", f"the boundary-twist exponent must be odd and positive, got {n}")
    g1 = a * n + (n - 1) // 2
    if (4 * a + 2) * n != 4 * g1 + 2:
        raise ArithmeticError(f"exponent identity failed for a={a}, n={n}")
    return g1


def projected_genus(surface: Surface, word: TwistWord) -> int:
    """Genus of ``S1`` that :func:`rewrite_to_boundary_form` will reach, without running it."""
    g0 = surface.genus + surface.boundary - 1
    a = max(g0, _genus_floor(word.letters))
    # a genus-floor stabilization turns surviving boundary twists into
    # null-homologous twists bounding the old page
    floor_split = a > g0 and surface.boundary == 1
    n = 0
    for x in word.letters:
        if not x.is_right:
            continue
        if x.is_trivial_class or (x.is_boundary and floor_split):
            k = x.trivial_genus if x.is_trivial_class else g0
            n += 2 * k * (4 * k + 2)
        else:
            n += 1
    if n % 2 == 0:
        n += 1
    return merged_genus(a, n)


def _merge(eng: _Engine, n: int) -> None:
    a = eng.surface.genus
    g1 = merged_genus(a, n)
    if g1 == a:
        return
    blocks = 4 * g1 + 2
    eng._budget(blocks * 2 * g1 - n)
    eng.rewrite(0, n, chain_letters(a, (4 * a + 2) * n), "chain_relation_expand")
    _stabilize_to(eng, g1)
    extension = tuple(TwistLetter.chain(i) for i in range(2 * a + 1, 2 * g1 + 1))
    for i in range(blocks):
        base = i * 2 * g1 + 2 * a
        for j, x in enumerate(extension):
            eng.insert(base + j, x)
    eng.rewrite(0, blocks * 2 * g1, (DELTA,), "chain_relation_collapse")


# --- results -------------------------------------------------------------------


@dataclass(frozen=True)
class RewriteResult:
    """Outcome of the rewriting: ``h1 == [delta] + R.inverse()`` on ``surface1``."""

    input_word: TwistWord
    surface1: Surface
    h1: TwistWord
    R: TwistWord
    ledger: tuple[Move, ...]
    n_right: int
    a0: int
    n_promoted: int

    @property
    def G1(self) -> int:
        return self.surface1.genus

    @property
    def certification(self) -> str:
        return self.input_word.certification

    def move_counts(self) -> Counter:
        return Counter(m.kind for m in self.ledger)


def _finish(eng: _Engine, input_word: TwistWord, n: int, a0: int, n_promoted: int) -> RewriteResult:
    s = eng.surface
    letters = eng.letters
    if not letters or letters[0] != DELTA or any(x.is_boundary for x in letters[1:]):
        raise RewriteError("merge", "final word is not of the form delta . L")
    tail = TwistWord(s, letters[1:])
    if any(x.is_right for x in tail):
        raise RewriteError("merge", "right twists remain outside the boundary twist")
    return RewriteResult(
        input_word=input_word,
        surface1=s,
        h1=TwistWord(s, letters),
        R=tail.inverse(),
        ledger=tuple(eng.moves),
        n_right=n,
        a0=a0,
        n_promoted=n_promoted,
    )


def connect_boundary(surface: Surface, w: TwistWord) -> tuple[Surface, TwistWord, list[Move]]:
    """Join all boundary circles with 1-handles; genus grows by ``b - 1``."""
    _same(surface, w)
    eng = _Engine(surface, w.letters)
    _connect(eng)
    return eng.surface, eng.word(), eng.moves


def normalize_twists(surface: Surface, w: TwistWord) -> TwistWord:
    """Replace every null-homologous twist (and left boundary twist) by chain words."""
    _same(surface, w)
    eng = _Engine(surface, w.letters)
    _normalize(eng)
    return eng.word()


def promote_rights(surface: Surface, w: TwistWord) -> tuple[TwistWord, list[Move]]:
    """Turn each right twist into a boundary twist by completing it to a chain.

    The output has the form ``delta^n . L`` with ``L`` made of left twists.
    """
    _same(surface, w)
    eng = _Engine(surface, w.letters)
    _promote(eng)
    return eng.word(), eng.moves


def leading_boundary_twists(w: TwistWord) -> int:
    return _leading_deltas(w.letters)


def ensure_odd(n: int, surface: Surface, word: TwistWord) -> tuple[TwistWord, list[Move]]:
    _same(surface, word)
    if leading_boundary_twists(word) < n:
        raise RewriteError("odd", f"word does not start with {n} boundary twists")
    eng = _Engine(surface, word.letters)
    _ensure_odd(eng, n)
    return eng.word(), eng.moves


def stabilize_and_merge(surface: Surface, word: TwistWord, n: int, max_letters: int = DEFAULT_MAX_LETTERS) -> RewriteResult:
    """Stabilize to genus ``a n + (n-1)/2`` and merge ``delta_0^n`` into one boundary twist."""
    _same(surface, word)
    if surface.boundary != 1:
        raise RewriteError("merge", f"expects one boundary component, got {surface}")
    if leading_boundary_twists(word) != n:
        raise RewriteError("merge", f"word must start with exactly {n} boundary twists")
    merged_genus(surface.genus, n)
    eng = _Engine(surface, word.letters, max_letters)
    _merge(eng, n)
    return _finish(eng, word, n, surface.genus, n)


def rewrite_to_boundary_form(surface: Surface, word: TwistWord, max_letters: int = DEFAULT_MAX_LETTERS) -> RewriteResult:
    """Run every stage and return ``(S1, h1 = delta . R^{-1})`` with the full ledger."""
    _same(surface, word)
    eng = _Engine(surface, word.letters, max_letters)
    _connect(eng)
    _stabilize_to(eng, max(eng.surface.genus, _genus_floor(eng.letters)))
    _normalize(eng)
    n_promoted = _promote(eng)
    a0 = eng.surface.genus
    n = _ensure_odd(eng, n_promoted)
    _merge(eng, n)
    return _finish(eng, word, n, a0, n_promoted)


def _same(surface: Surface, w: TwistWord) -> None:
    if w.surface != surface:
        raise RewriteError("input", f"word lives on {w.surface}, expected {surface}")


def result_violations(r: RewriteResult) -> list[str]:
    """Structural invariants of a result; empty when all hold."""
    out = []
    if r.surface1.boundary != 1:
        out.append("surface1 has more than one boundary component")
    if r.h1.letters != (DELTA,) + r.R.inverse().letters:
        out.append("h1 is not delta followed by R inverse")
    for i, x in enumerate(r.R):
        if not x.is_right or x.is_boundary:
            out.append(f"R letter {i} is not an interior right twist")
        elif classify(x.class_coords(r.surface1)) is not ClassKind.PRIMITIVE:
            out.append(f"R letter {i} is homologically trivial")
    if r.n_right % 2 != 1:
        out.append("boundary-twist exponent is even")
    elif r.G1 != r.a0 * r.n_right + (r.n_right - 1) // 2:
        out.append("genus formula violated")
    genus, boundary = r.input_word.surface.genus, r.input_word.surface.boundary
    for m in r.ledger:
        if m.surface.genus < genus:
            out.append("genus decreased")
        genus, boundary = m.surface.genus, m.surface.boundary
    for m in r.ledger:
        if m.kind is MoveKind.INSERT_RIGHT_TWIST and (not m.letter.is_right or m.letter.is_boundary):
            out.append("inserted letter is not an interior right twist")
    return out


def resolved_matrix_check(surface: Surface, letters_before, position: int, letter: TwistLetter) -> np.ndarray:
    """Resolved class of inserting ``letter`` at ``position`` computed directly from the suffix."""
    inv = letters_inverse_action(surface, list(letters_before)[position:])
    c, _ = letter_arrays(letter, surface)
    return _intmat.matvec_sparse(inv, c)
