"""Surfaces with boundary, their first homology lattices and twist actions.

Basis convention for a surface of genus ``g`` with ``b`` boundary
components: ``a_1, b_1, ..., a_g, b_g, d_1, ..., d_{b-1}``, where ``d_j``
is the class of the ``j``-th boundary component (the last component is
``-(d_1 + ... + d_{b-1})``). The pairing has ``<a_i, b_i> = 1`` and every
pairing with a ``d_j`` is zero.

A right Dehn twist about a curve of class ``c`` acts by the transvection
``x -> x + <x, c> c``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from . import _intmat


@dataclass(frozen=True)
class Surface:
    genus: int
    boundary: int

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 0:
            raise ValueError(f"genus must be a nonnegative integer, got {self.genus!r}")
        if not isinstance(self.boundary, int) or self.boundary < 1:
            raise ValueError(
                f"boundary must be a positive integer, got {self.boundary!r}; "
                "closed surfaces only appear as pencil fibers"
            )

    @property
    def rank(self) -> int:
        return 2 * self.genus + self.boundary - 1

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary

    @cached_property
    def pairing(self) -> np.ndarray:
        return _pairing_matrix(self.genus, self.boundary)

    def zero(self) -> HomologyClass:
        return HomologyClass(self, (0,) * self.rank)

    def basis_vector(self, index: int) -> HomologyClass:
        coords = [0] * self.rank
        coords[index] = 1
        return HomologyClass(self, tuple(coords))

    def a(self, i: int) -> HomologyClass:
        if not 1 <= i <= self.genus:
            raise IndexError(f"a_{i} does not exist in genus {self.genus}")
        return self.basis_vector(2 * (i - 1))

    def b(self, i: int) -> HomologyClass:
        if not 1 <= i <= self.genus:
            raise IndexError(f"b_{i} does not exist in genus {self.genus}")
        return self.basis_vector(2 * i - 1)

    def d(self, j: int) -> HomologyClass:
        """Class of boundary component ``j`` (``1 <= j <= boundary``)."""
        if not 1 <= j <= self.boundary:
            raise IndexError(f"boundary component {j} does not exist (b={self.boundary})")
        if j < self.boundary:
            return self.basis_vector(2 * self.genus + j - 1)
        coords = [0] * (2 * self.genus) + [-1] * (self.boundary - 1)
        return HomologyClass(self, tuple(coords))

    def __str__(self) -> str:
        return f"Surface(g={self.genus}, b={self.boundary})"


def make_surface(g: int, b: int) -> Surface:
    return Surface(g, b)


@lru_cache(maxsize=None)
def _pairing_matrix(g: int, b: int) -> np.ndarray:
    n = 2 * g + b - 1
    j = np.zeros((n, n), dtype=np.int64)
    for i in range(g):
        j[2 * i, 2 * i + 1] = 1
        j[2 * i + 1, 2 * i] = -1
    j.setflags(write=False)
    return j


@dataclass(frozen=True)
class HomologyClass:
    surface: Surface
    coords: tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != self.surface.rank:
            raise ValueError(
                f"class has {len(coords)} coordinates, {self.surface} needs {self.surface.rank}"
            )

    def __add__(self, other: HomologyClass) -> HomologyClass:
        _same_surface(self, other)
        return HomologyClass(self.surface, tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: HomologyClass) -> HomologyClass:
        return self + (-other)

    def __neg__(self) -> HomologyClass:
        return HomologyClass(self.surface, tuple(-x for x in self.coords))

    def __rmul__(self, k: int) -> HomologyClass:
        return HomologyClass(self.surface, tuple(k * x for x in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def array(self) -> np.ndarray:
        return _intmat.vector(self.coords)


def _same_surface(x: HomologyClass, y: HomologyClass) -> None:
    if x.surface != y.surface:
        raise ValueError(f"classes live on different surfaces: {x.surface} vs {y.surface}")


def pair(surface: Surface, x, y) -> int:
    """Intersection pairing of raw coordinate sequences on ``surface``."""
    total = 0
    for i in range(surface.genus):
        total += x[2 * i] * y[2 * i + 1] - x[2 * i + 1] * y[2 * i]
    return total


def intersection(x: HomologyClass, y: HomologyClass) -> int:
    _same_surface(x, y)
    return pair(x.surface, x.coords, y.coords)


class ClassKind(enum.Enum):
    TRIVIAL = "trivial"
    PRIMITIVE = "primitive"
    IMPRIMITIVE = "imprimitive"


def content(coords) -> int:
    g = 0
    for c in coords:
        g = _intmat.xgcd(g, int(c))[0]
    return g


def classify(x: HomologyClass | tuple[int, ...]) -> ClassKind:
    coords = x.coords if isinstance(x, HomologyClass) else x
    g = content(coords)
    if g == 0:
        return ClassKind.TRIVIAL
    return ClassKind.PRIMITIVE if g == 1 else ClassKind.IMPRIMITIVE


def partner_index(surface: Surface, i: int) -> int | None:
    """Index of the basis vector dual to basis vector ``i`` (``None`` for boundary classes)."""
    if i >= 2 * surface.genus:
        return None
    return i + 1 if i % 2 == 0 else i - 1


def jvec(surface: Surface, c: np.ndarray) -> np.ndarray:
    """``J c`` for the pairing matrix ``J``; ``<x, c> = x . (J c)``."""
    out = np.zeros_like(c)
    g2 = 2 * surface.genus
    out[0:g2:2] = c[1:g2:2]
    out[1:g2:2] = -c[0:g2:2]
    return out


def transvection_matrix(c: HomologyClass, sign: int = 1) -> np.ndarray:
    """Matrix of ``x -> x + sign * <x, c> c``; the sign-flipped matrix is its inverse."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    s = c.surface
    v = c.array()
    return _intmat.right_transvect(_intmat.identity(s.rank), v, jvec(s, v), sign)


def apply(m: np.ndarray, x: HomologyClass) -> HomologyClass:
    return HomologyClass(x.surface, _intmat.to_tuple(_intmat.matmul(m, x.array())))


def is_symplectic(m: np.ndarray, surface: Surface) -> bool:
    j = surface.pairing
    return _intmat.equal(_intmat.matmul(_intmat.matmul(m.T, j), m), j)


def gram(classes: list[HomologyClass]) -> list[list[int]]:
    return [[intersection(x, y) for y in classes] for x in classes]


def standard_symplectic_gram(n: int) -> list[list[int]]:
    return _intmat.to_rows(_pairing_matrix(n // 2, 1))


def chain_vector(rank: int, k: int) -> tuple[int, ...]:
    """Coordinates of the ``k``-th standard chain curve (1-based).

    ``e_1 = a_1``, ``e_{2i} = +-b_i``, ``e_{2i+1} = +-(a_i + a_{i+1})`` with
    the signs chosen so that ``<e_i, e_{i+1}> = 1`` for every ``i``.
    """
    coords = [0] * rank
    if k == 1:
        coords[0] = 1
    elif k % 2 == 0:
        i = k // 2
        coords[2 * i - 1] = 1 if i % 2 == 1 else -1
    else:
        i = (k - 1) // 2
        s = -1 if i % 2 == 1 else 1
        coords[2 * (i - 1)] = s
        coords[2 * i] = s
    return tuple(coords)


def chain_classes(surface: Surface, k: int) -> list[HomologyClass]:
    """The ``2k`` classes of the standard chain filling the first ``k`` handles."""
    if k < 1:
        raise ValueError(f"chain length parameter must be positive, got {k}")
    if k > surface.genus:
        raise ValueError(f"a chain of {2 * k} curves needs genus >= {k}, {surface} is too small")
    return [HomologyClass(surface, chain_vector(surface.rank, i)) for i in range(1, 2 * k + 1)]


def symplectic_complete(c: HomologyClass) -> list[HomologyClass]:
    """Extend a primitive class to an ordered symplectic basis ``(c, f_2, ..., f_2g)``.

    The Gram matrix of the output is the standard one: ``<f_{2i-1}, f_{2i}> = 1``
    and all other pairs (up to antisymmetry) vanish.
    """
    s = c.surface
    if s.boundary != 1:
        raise ValueError(f"symplectic completion needs one boundary component, got {s}")
    kind = classify(c)
    if kind is not ClassKind.PRIMITIVE:
        raise ValueError(f"cannot complete a {kind.value} class {c.coords}")
    n = s.rank
    lattice = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    first: list[int] | None = list(c.coords)
    out: list[tuple[int, ...]] = []
    while lattice:
        u = first if first is not None else lattice[0]
        first = None
        g, coeffs = _intmat.xgcd_many([pair(s, u, w) for w in lattice])
        if g != 1:
            raise ArithmeticError("pairing is not unimodular on the remaining lattice")
        v = [sum(x * w[i] for x, w in zip(coeffs, lattice)) for i in range(n)]
        out += [tuple(u), tuple(v)]
        projected = []
        for w in lattice:
            wu, wv = pair(s, w, u), pair(s, w, v)
            projected.append([w[i] - wv * u[i] + wu * v[i] for i in range(n)])
        lattice = _intmat.hermite_rows(projected)
    return [HomologyClass(s, f) for f in out]


def chain_from_basis(basis: list[HomologyClass]) -> list[HomologyClass]:
    """Apply the standard chain pattern to a symplectic basis.

    The first chain class equals ``basis[0]``.
    """
    n = len(basis)
    surface = basis[0].surface
    out = []
    for k in range(1, n + 1):
        pattern = chain_vector(n, k)
        total = surface.zero()
        for coeff, f in zip(pattern, basis):
            if coeff:
                total = total + coeff * f
        out.append(total)
    return out
