"""Closed symplectic 4-manifolds from Lefschetz pencil data.

A pencil with closed fiber ``F`` of genus ``g_F``, vanishing cycles
``C_1..C_m`` and ``n`` disjoint sections is cut open along disks around the
section points, giving a page ``S = (g_F, n)`` whose monodromy is the
product of all boundary twists. Two standard convex fillings of ``B(S, 1)``,
the ``m`` vanishing-cycle 2-handles and ``n`` binding caps assemble into a
closed manifold.

Only the homological shadow of the monodromy relation can be checked here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _intmat
from .cobordism import BINDING_FRAMING, PAGE_FRAMING, Handle, HandleDecomposition, Side
from .homology import ClassKind, Surface, classify, jvec

NECESSARY_ONLY = "necessary condition passed"


@dataclass(frozen=True)
class PencilData:
    fiber_genus: int
    cycles: tuple[tuple[int, ...], ...]
    sections: int

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple(tuple(int(x) for x in c) for c in self.cycles))
        if self.fiber_genus < 0:
            raise ValueError("fiber genus must be nonnegative")
        if self.sections < 1:
            raise ValueError("a pencil needs at least one section (n > 0)")
        for i, c in enumerate(self.cycles):
            if len(c) != 2 * self.fiber_genus:
                raise ValueError(f"cycle {i} has {len(c)} coordinates, fiber lattice has rank {2 * self.fiber_genus}")
            if classify(c) is ClassKind.IMPRIMITIVE:
                raise ValueError(f"cycle {i} {c} is imprimitive; vanishing cycles are simple closed curves")

    @property
    def m(self) -> int:
        return len(self.cycles)


@dataclass(frozen=True)
class PencilVerdict:
    ok: bool
    matrix: np.ndarray

    @property
    def label(self) -> str:
        return NECESSARY_ONLY if self.ok else "FailsHomologyTest"


def _fiber(g: int) -> Surface:
    # rank 2g with the closed-surface pairing
    return Surface(g, 1)


def monodromy_matrix(p: PencilData) -> np.ndarray:
    s = _fiber(p.fiber_genus)
    m = _intmat.identity(s.rank)
    for c in p.cycles:
        v = _intmat.vector(c)
        m = _intmat.right_transvect(m, v, jvec(s, v), 1)
    return m


def validate_pencil(p: PencilData) -> PencilVerdict:
    """Ok iff the product of the vanishing-cycle transvections is the identity."""
    m = monodromy_matrix(p)
    return PencilVerdict(_intmat.is_identity(m), m)


@dataclass(frozen=True)
class PencilAssembly:
    decomposition: HandleDecomposition
    chi: int
    chi_formula: int
    pieces: tuple[tuple[str, int], ...]


def _convex_filling(page: Surface) -> list[Handle]:
    ones = 2 * page.genus + page.boundary - 1
    return [Handle(0, Side.PENCIL, "Rmk2.2")] + [Handle(1, Side.PENCIL, "Prop2.4") for _ in range(ones)]


def build_pencil_assembly(p: PencilData) -> PencilAssembly:
    verdict = validate_pencil(p)
    if not verdict.ok:
        raise ValueError("pencil fails the homological monodromy test")
    g, n = p.fiber_genus, p.sections
    page = Surface(g, n)
    pad = (0,) * (n - 1)
    handles = _convex_filling(page)
    handles += [Handle(2, Side.PENCIL, "Prop2.5", c + pad, "page", PAGE_FRAMING) for c in p.cycles]
    handles += [Handle(2, Side.PENCIL, "Prop2.7", None, f"binding:{i}", BINDING_FRAMING) for i in range(1, n + 1)]
    handles += _convex_filling(page)
    chi_page = page.euler_characteristic
    pieces = (("convex filling", chi_page), ("vanishing cycles", p.m), ("binding caps", n), ("convex filling", chi_page))
    chi = sum((-1) ** h.index for h in handles)
    formula = 2 * (2 - 2 * g) + p.m - n
    if chi != sum(v for _, v in pieces) or chi != formula:
        raise ArithmeticError(f"euler characteristic bookkeeping failed: {chi} vs {formula}")
    meta = (
        ("pencil", f"g_F={g} m={p.m} n={n}"),
        ("monodromy", verdict.label),
    )
    return PencilAssembly(HandleDecomposition(tuple(handles), meta), chi, formula, pieces)
