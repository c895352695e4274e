"""Dehn twist words and the equality moves used by the rewriting engine.

A word lists its letters left to right as composition factors: the first
letter is the leftmost factor, so it is applied last. Its homological
action is the matrix product of the letters' transvections in list order.
"""

from __future__ import annotations

import enum
import hashlib
import re
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _intmat
from .homology import (
    ClassKind,
    HomologyClass,
    Surface,
    chain_vector,
    classify,
    jvec,
)


class TargetKind(enum.Enum):
    CHAIN = "chain"
    CLASS = "class"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class TwistLetter:
    """A signed Dehn twist: ``sign=+1`` is a right twist, ``-1`` a left twist.

    ``index`` is the chain index (1-based) or boundary component,
    ``coords`` the class for class targets. ``trivial_genus`` annotates a
    null-homologous class target with the genus of the subsurface it bounds.
    """

    kind: TargetKind
    sign: int
    index: int | None = None
    coords: tuple[int, ...] | None = None
    trivial_genus: int | None = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")
        if self.kind is TargetKind.CLASS:
            if self.coords is None or self.index is not None:
                raise ValueError("class targets carry coordinates only")
            object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
            kind = classify(self.coords)
            if kind is ClassKind.IMPRIMITIVE:
                raise ValueError(
                    f"class {list(self.coords)} is imprimitive; a simple closed curve "
                    "has zero or primitive class"
                )
            if kind is ClassKind.TRIVIAL:
                if self.trivial_genus is None:
                    raise ValueError("a null-homologous twist needs its trivial_genus annotation")
                if self.trivial_genus < 0:
                    raise ValueError(f"trivial_genus must be >= 0, got {self.trivial_genus}")
            elif self.trivial_genus is not None:
                raise ValueError("trivial_genus only applies to null-homologous classes")
        else:
            if self.index is None or self.index < 1 or self.coords is not None:
                raise ValueError(f"{self.kind.value} targets need a positive index")
            if self.trivial_genus is not None:
                raise ValueError("trivial_genus only applies to class targets")

    @classmethod
    def chain(cls, k: int, sign: int = 1) -> TwistLetter:
        return cls(TargetKind.CHAIN, sign, index=k)

    @classmethod
    def of_class(cls, coords, sign: int = 1, trivial_genus: int | None = None) -> TwistLetter:
        return cls(TargetKind.CLASS, sign, coords=tuple(coords), trivial_genus=trivial_genus)

    @classmethod
    def boundary(cls, j: int = 1, sign: int = 1) -> TwistLetter:
        return cls(TargetKind.BOUNDARY, sign, index=j)

    @property
    def is_right(self) -> bool:
        return self.sign == 1

    @property
    def is_boundary(self) -> bool:
        return self.kind is TargetKind.BOUNDARY

    @property
    def is_trivial_class(self) -> bool:
        return self.kind is TargetKind.CLASS and not any(self.coords)

    def inverse(self) -> TwistLetter:
        return TwistLetter(self.kind, -self.sign, self.index, self.coords, self.trivial_genus)

    def with_sign(self, sign: int) -> TwistLetter:
        return TwistLetter(self.kind, sign, self.index, self.coords, self.trivial_genus)

    def check(self, surface: Surface) -> None:
        if self.kind is TargetKind.CHAIN and self.index > 2 * surface.genus:
            raise ValueError(f"chain index {self.index} outside 1..{2 * surface.genus} on {surface}")
        if self.kind is TargetKind.BOUNDARY and self.index > surface.boundary:
            raise ValueError(f"boundary index {self.index} outside 1..{surface.boundary} on {surface}")
        if self.kind is TargetKind.CLASS and len(self.coords) != surface.rank:
            raise ValueError(
                f"class vector has length {len(self.coords)}, {surface} needs {surface.rank}"
            )

    def class_coords(self, surface: Surface) -> tuple[int, ...]:
        return _letter_coords(self.kind, self.index, self.coords, surface.genus, surface.boundary)

    def homology_class(self, surface: Surface) -> HomologyClass:
        return HomologyClass(surface, self.class_coords(surface))

    def serialize(self) -> str:
        return serialize_letter(self)

    def __str__(self) -> str:
        return self.serialize()


def _letter_coords(kind, index, coords, g, b) -> tuple[int, ...]:
    rank = 2 * g + b - 1
    if kind is TargetKind.CLASS:
        return coords
    if kind is TargetKind.CHAIN:
        return chain_vector(rank, index)
    if index < b:
        out = [0] * rank
        out[2 * g + index - 1] = 1
        return tuple(out)
    return tuple([0] * (2 * g) + [-1] * (b - 1))


@lru_cache(maxsize=65536)
def _letter_arrays(letter: TwistLetter, surface: Surface) -> tuple[np.ndarray, np.ndarray]:
    c = _intmat.vector(letter.class_coords(surface))
    jc = jvec(surface, c)
    c.setflags(write=False)
    jc.setflags(write=False)
    return c, jc


def letter_arrays(letter: TwistLetter, surface: Surface) -> tuple[np.ndarray, np.ndarray]:
    """Cached ``(c, Jc)`` arrays for a letter on a surface."""
    return _letter_arrays(letter, surface)


# --- canonical serialization -------------------------------------------------

_LETTER_RE = re.compile(
    r"^(?P<kind>chain|class|boundary):(?P<target>\d+|\[[-0-9,]*\])(?P<sign>[+-])(?:/k=(?P<k>\d+))?$"
)


def serialize_letter(letter: TwistLetter) -> str:
    sign = "+" if letter.sign == 1 else "-"
    if letter.kind is TargetKind.CLASS:
        target = "[" + ",".join(str(c) for c in letter.coords) + "]"
    else:
        target = str(letter.index)
    out = f"{letter.kind.value}:{target}{sign}"
    if letter.trivial_genus is not None:
        out += f"/k={letter.trivial_genus}"
    return out


def parse_letter(text: str) -> TwistLetter:
    m = _LETTER_RE.match(text)
    if m is None:
        raise ValueError(f"malformed letter {text!r}")
    kind = TargetKind(m["kind"])
    sign = 1 if m["sign"] == "+" else -1
    k = int(m["k"]) if m["k"] is not None else None
    if kind is TargetKind.CLASS:
        inner = m["target"][1:-1]
        coords = tuple(int(x) for x in inner.split(",")) if inner else ()
        return TwistLetter(kind, sign, coords=coords, trivial_genus=k)
    if not m["target"].isdigit():
        raise ValueError(f"malformed letter {text!r}")
    return TwistLetter(kind, sign, index=int(m["target"]), trivial_genus=k)


# --- position-aware word hash ------------------------------------------------
#
# H(w) = sum_i digest(w_i) * BASE**i  mod (2**61 - 1), where digest is the
# first 8 bytes (big endian) of sha256 of the letter serialization, reduced
# mod the prime. The printed hash is "<length hex>-<H as 16 hex digits>".

HASH_PRIME = (1 << 61) - 1
HASH_BASE = 1_000_003


@lru_cache(maxsize=65536)
def letter_digest(letter: TwistLetter) -> int:
    raw = hashlib.sha256(serialize_letter(letter).encode()).digest()
    return int.from_bytes(raw[:8], "big") % HASH_PRIME


def poly_hash(letters) -> int:
    h = 0
    power = 1
    for letter in letters:
        h = (h + letter_digest(letter) * power) % HASH_PRIME
        power = power * HASH_BASE % HASH_PRIME
    return h


def format_hash(length: int, h: int) -> str:
    return f"{length:x}-{h:016x}"


def word_hash(letters) -> str:
    letters = list(letters)
    return format_hash(len(letters), poly_hash(letters))


# --- words -------------------------------------------------------------------


@dataclass(frozen=True)
class TwistWord:
    surface: Surface
    letters: tuple[TwistLetter, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        for i, letter in enumerate(self.letters):
            try:
                letter.check(self.surface)
            except ValueError as exc:
                raise ValueError(f"letter {i}: {exc}") from None

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __add__(self, other: TwistWord) -> TwistWord:
        if other.surface != self.surface:
            raise ValueError("cannot concatenate words on different surfaces")
        return TwistWord(self.surface, self.letters + other.letters)

    def inverse(self) -> TwistWord:
        return TwistWord(self.surface, tuple(x.inverse() for x in reversed(self.letters)))

    def serialize(self) -> list[str]:
        return [serialize_letter(x) for x in self.letters]

    def hash(self) -> str:
        return word_hash(self.letters)

    @property
    def certification(self) -> str:
        """``chain-index exact`` when every letter names a chain or boundary curve."""
        if all(x.kind is not TargetKind.CLASS for x in self.letters):
            return "chain-index exact"
        return "homology-certified"


def letters_action(surface: Surface, letters) -> np.ndarray:
    m = _intmat.identity(surface.rank)
    for letter in letters:
        c, jc = letter_arrays(letter, surface)
        m = _intmat.right_transvect(m, c, jc, letter.sign)
    return m


def letters_inverse_action(surface: Surface, letters) -> np.ndarray:
    m = _intmat.identity(surface.rank)
    for letter in letters:
        c, jc = letter_arrays(letter, surface)
        m = _intmat.left_transvect(c, jc, -letter.sign, m)
    return m


def word_action(w: TwistWord) -> np.ndarray:
    """Matrix of the word on ``H_1``; the first letter's matrix is the leftmost factor."""
    return letters_action(w.surface, w.letters)


def chain_letters(k: int, exponent: int | None = None, sign: int = 1) -> tuple[TwistLetter, ...]:
    """``(tau_1 ... tau_2k)^exponent`` over chain indices; default exponent ``4k + 2``."""
    if exponent is None:
        exponent = 4 * k + 2
    block = tuple(TwistLetter.chain(i) for i in range(1, 2 * k + 1))
    word = block * exponent
    if sign == -1:
        word = tuple(x.inverse() for x in reversed(word))
    return word


def chain_word(surface: Surface, k: int) -> TwistWord:
    """The chain word whose product is the twist about the boundary of the first ``k`` handles."""
    if k < 1 or k > surface.genus:
        raise ValueError(f"chain word of genus {k} does not fit on {surface}")
    return TwistWord(surface, chain_letters(k))


def _check_pos(w: TwistWord, pos: int) -> None:
    if not 0 <= pos < len(w):
        raise IndexError(f"position {pos} outside word of length {len(w)}")


def conjugation_rewrite(w: TwistWord, pos: int) -> TwistWord:
    """Move the letter at ``pos`` to the end, conjugating its curve by the suffix.

    ``A tau_C B = A B tau_D`` with ``D = B^{-1}(C)``.
    """
    _check_pos(w, pos)
    letter = w[pos]
    suffix = w.letters[pos + 1 :]
    if not suffix:
        return w
    s = w.surface
    if letter.is_boundary or letter.is_trivial_class:
        # boundary-parallel twists are central; a separating curve stays separating
        return TwistWord(s, w.letters[:pos] + suffix + (letter,))
    inv = letters_inverse_action(s, suffix)
    c, _ = letter_arrays(letter, s)
    d = _intmat.to_tuple(_intmat.matvec_sparse(inv, c))
    return TwistWord(s, w.letters[:pos] + suffix + (TwistLetter.of_class(d, letter.sign),))


def commute_boundary_front(w: TwistWord) -> TwistWord:
    """Move every boundary-parallel letter to the front, keeping the other letters in order."""
    if w.surface.boundary != 1:
        raise ValueError(f"boundary twists are central only with one boundary component, got {w.surface}")
    front = tuple(x for x in w if x.is_boundary)
    rest = tuple(x for x in w if not x.is_boundary)
    return TwistWord(w.surface, front + rest)


def substitute_trivial_twist(w: TwistWord, pos: int) -> TwistWord:
    """Replace a null-homologous twist by the chain word it equals.

    The curve bounds a genus ``k`` subsurface; its twist equals
    ``(tau_1 ... tau_2k)^(4k+2)`` on the first ``k`` handles. A left twist
    becomes the inverse word. ``k = 0`` deletes the letter.
    """
    _check_pos(w, pos)
    letter = w[pos]
    if not letter.is_trivial_class:
        raise ValueError(f"letter {pos} ({letter}) is not a null-homologous class twist")
    k = letter.trivial_genus
    if k is None:
        raise ValueError(f"letter {pos} lacks its trivial_genus annotation")
    if k > w.surface.genus:
        raise ValueError(f"trivial_genus {k} exceeds genus of {w.surface}; stabilize first")
    replacement = chain_letters(k, sign=letter.sign) if k else ()
    return TwistWord(w.surface, w.letters[:pos] + replacement + w.letters[pos + 1 :])
