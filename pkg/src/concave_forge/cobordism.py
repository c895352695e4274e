"""Handle decomposition of the concave filling built from a rewrite result.

Three pieces are glued in order:

* relative: the cobordism from the input open book to ``(S1, h1)``; one
  1-handle per page stabilization and one 2-handle per inserted right twist;
* cap: a single 2-handle along the binding of ``(S1, h1)`` (framing pf+1),
  closing it up together with the open book ``(S1, R)``;
* convex: the filling of ``(S1, R)`` grown from the 4-ball, i.e. a 0-handle,
  ``2 G1`` 1-handles and one 2-handle per letter of ``R``.

Framings are symbolic and relative to the page framing.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field

from .rewrite import MoveKind, RewriteResult


class Side(enum.Enum):
    RELATIVE = "relative"
    CAP = "cap"
    CONVEX = "convex"
    PENCIL = "pencil"


PAGE_FRAMING = "pf-1"
BINDING_FRAMING = "pf+1"


@dataclass(frozen=True)
class Handle:
    index: int
    side: Side
    provenance: str
    coords: tuple[int, ...] | None = None
    locus: str | None = None
    framing: str | None = None

    def __post_init__(self):
        if self.index not in (0, 1, 2):
            raise ValueError(f"handle index must be 0, 1 or 2, got {self.index}")
        if self.index == 2:
            if self.locus == "page" and self.framing != PAGE_FRAMING:
                raise ValueError("page 2-handles carry framing pf-1")
            if self.locus and self.locus.startswith("binding") and self.framing != BINDING_FRAMING:
                raise ValueError("binding 2-handles carry framing pf+1")

    def line(self) -> str:
        cls = "[" + ",".join(str(c) for c in self.coords) + "]" if self.coords is not None else "-"
        return (
            f"H{self.index} side={self.side.value} class={cls} locus={self.locus or '-'} "
            f"framing={self.framing or '-'} prov={self.provenance}"
        )


@dataclass(frozen=True)
class HandleDecomposition:
    handles: tuple[Handle, ...]
    meta: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    def counts(self) -> Counter:
        return Counter((h.side, h.index) for h in self.handles)

    def meta_dict(self) -> dict[str, str]:
        return dict(self.meta)


def _embedding_positions(r: RewriteResult) -> list[list[int] | None]:
    """For each move, where coordinates of the page after it land in ``S1``.

    Both page moves embed the lattice by inserting one zero coordinate: the
    join puts the new ``b`` class right after the new ``a`` class, the split
    appends the new boundary class.
    """
    final_rank = r.surface1.rank
    pos = list(range(final_rank))
    out: list[list[int] | None] = [None] * len(r.ledger)
    for i in range(len(r.ledger) - 1, -1, -1):
        m = r.ledger[i]
        out[i] = pos
        if m.kind in (MoveKind.JOIN_BOUNDARY, MoveKind.STABILIZE_GENUS):
            # page before this move has rank one less; find the inserted slot
            if m.kind is MoveKind.STABILIZE_GENUS and m.step == "split":
                slot = m.surface.rank - 1
            else:
                slot = 2 * m.surface.genus - 1
            pos = pos[:slot] + pos[slot + 1 :]
    return out


def _embed(coords, positions, rank) -> tuple[int, ...]:
    out = [0] * rank
    for c, p in zip(coords, positions):
        out[p] = c
    return tuple(out)


def build_concave_filling(r: RewriteResult) -> HandleDecomposition:
    if r.surface1.boundary != 1:
        raise ValueError("rewrite result must end on a page with one boundary component")
    rank = r.surface1.rank
    positions = _embedding_positions(r)
    rel1, rel2 = [], []
    for m, pos in zip(r.ledger, positions):
        if m.kind in (MoveKind.JOIN_BOUNDARY, MoveKind.STABILIZE_GENUS):
            rel1.append(Handle(1, Side.RELATIVE, "Prop2.4"))
        elif m.kind is MoveKind.INSERT_RIGHT_TWIST:
            if m.resolved is None or len(m.resolved) != m.surface.rank:
                raise ValueError("malformed ledger: insertion without a resolved class")
            rel2.append(Handle(2, Side.RELATIVE, "Prop2.5", _embed(m.resolved, pos, rank), "page", PAGE_FRAMING))
    cap = [Handle(2, Side.CAP, "Prop2.7", None, "binding:1", BINDING_FRAMING)]
    conv = [Handle(0, Side.CONVEX, "Rmk2.2")]
    conv += [Handle(1, Side.CONVEX, "Prop2.4") for _ in range(2 * r.G1)]
    conv += [
        Handle(2, Side.CONVEX, "Prop2.5", x.class_coords(r.surface1), "page", PAGE_FRAMING)
        for x in r.R
    ]
    s0 = r.input_word.surface
    meta = (
        ("input", f"g={s0.genus} b={s0.boundary} letters={len(r.input_word)}"),
        ("filling", f"G1={r.G1} a0={r.a0} n_right={r.n_right} R={len(r.R)}"),
        ("certification", r.certification),
    )
    return HandleDecomposition(tuple(rel1 + rel2 + cap + conv), meta)


def count_vector(hd: HandleDecomposition) -> tuple[int, ...]:
    """``(rel-1h, rel-2h, cap-2h, 0h, conv-1h, conv-2h)``."""
    c = hd.counts()
    return (
        c[(Side.RELATIVE, 1)],
        c[(Side.RELATIVE, 2)],
        c[(Side.CAP, 2)],
        c[(Side.CONVEX, 0)],
        c[(Side.CONVEX, 1)],
        c[(Side.CONVEX, 2)],
    )


def convex_side_euler(hd: HandleDecomposition) -> int:
    c = hd.counts()
    return c[(Side.CONVEX, 0)] - c[(Side.CONVEX, 1)] + c[(Side.CONVEX, 2)]


def euler_characteristic(hd: HandleDecomposition) -> int:
    """Alternating handle count. Closed 3-manifolds have zero Euler
    characteristic, so the glued pieces simply add."""
    chi = sum((-1) ** h.index for h in hd.handles)
    c = hd.counts()
    if c[(Side.CONVEX, 0)] and not c[(Side.CONVEX, 2)]:
        # the convex piece without 2-handles is a thickened page
        g1 = c[(Side.CONVEX, 1)] // 2
        if convex_side_euler(hd) != 2 - 2 * g1 - 1:
            raise ArithmeticError("convex piece disagrees with the Euler characteristic of its page")
    return chi


def emit_kirby_script(hd: HandleDecomposition) -> str:
    c = hd.counts()
    lines = ["concave-forge kirby v1"]
    lines += [f"# {k}: {v}" for k, v in hd.meta]
    parts = []
    for side in Side:
        for idx in (0, 1, 2):
            if c[(side, idx)]:
                parts.append(f"{side.value}-{idx}h={c[(side, idx)]}")
    lines.append("# handles: " + (" ".join(parts) if parts else "none") + f" total={len(hd.handles)}")
    lines.append(f"# euler characteristic: {sum((-1) ** h.index for h in hd.handles)}")
    lines.append("# framings are relative to the page framing pf; absolute framing integers are not computed")
    lines += [h.line() for h in hd.handles]
    return "\n".join(lines) + "\n"


def handles_from_script(text: str) -> list[dict[str, str]]:
    """Parse handle lines back into dictionaries (header lines are skipped)."""
    out = []
    for line in text.splitlines():
        if not line.startswith("H"):
            continue
        head, *fields = line.split()
        entry = {"index": head[1:]}
        for f in fields:
            k, _, v = f.partition("=")
            entry[k] = v
        out.append(entry)
    return out

