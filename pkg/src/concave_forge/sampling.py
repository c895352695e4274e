"""Seeded random monodromy words for experiments and acceptance runs."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .homology import Surface
from .rewrite import projected_genus
from .twistword import TwistLetter, TwistWord


@dataclass(frozen=True)
class SampleConfig:
    max_genus: int = 3
    max_boundary: int = 3
    max_len: int = 12
    coord_bound: int = 2
    # None keeps every draw; otherwise reject words whose filling genus exceeds it
    genus_cap: int | None = None


def _primitive(rng: random.Random, rank: int, bound: int) -> tuple[int, ...]:
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(rank))
        if math.gcd(*v) == 1:
            return v


def random_letter(rng: random.Random, s: Surface, bound: int = 2) -> TwistLetter:
    sign = rng.choice((1, -1))
    kinds = ["boundary", "trivial"]
    if s.genus:
        kinds.append("chain")
    if s.rank:
        kinds.append("class")
    kind = rng.choice(kinds)
    if kind == "chain":
        return TwistLetter.chain(rng.randint(1, 2 * s.genus), sign)
    if kind == "boundary":
        return TwistLetter.boundary(rng.randint(1, s.boundary), sign)
    if kind == "class":
        return TwistLetter.of_class(_primitive(rng, s.rank, bound), sign)
    return TwistLetter.of_class((0,) * s.rank, sign, trivial_genus=rng.randint(0, s.genus))


def random_word(rng: random.Random, cfg: SampleConfig = SampleConfig()) -> TwistWord:
    s = Surface(rng.randint(0, cfg.max_genus), rng.randint(1, cfg.max_boundary))
    n = rng.randint(0, cfg.max_len)
    return TwistWord(s, [random_letter(rng, s, cfg.coord_bound) for _ in range(n)])


def sample_words(seed: int, count: int, cfg: SampleConfig = SampleConfig()) -> tuple[list[TwistWord], int]:
    """``count`` accepted words and the number of draws it took."""
    rng = random.Random(seed)
    out, draws = [], 0
    while len(out) < count:
        w = random_word(rng, cfg)
        draws += 1
        if cfg.genus_cap is None or projected_genus(w.surface, w) <= cfg.genus_cap:
            out.append(w)
    return out, draws
