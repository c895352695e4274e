"""Rewrite and replay a batch of seeded random words; report the spread of G1.

    python3 scripts/random_replay.py [--count 100] [--seed 0] [--cap 12]
"""

import argparse
import collections
import time

from concave_forge.ledger import replay_result
from concave_forge.rewrite import rewrite_to_boundary_form
from concave_forge.sampling import SampleConfig, sample_words


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--cap", type=int, default=12, help="largest filling genus to keep")
    args = ap.parse_args()
    words, draws = sample_words(args.seed, args.count, SampleConfig(genus_cap=args.cap))
    t = time.perf_counter()
    genera = collections.Counter()
    failures = 0
    for w in words:
        r = rewrite_to_boundary_form(w.surface, w)
        genera[r.G1] += 1
        failures += not replay_result(r).ok
    dt = time.perf_counter() - t
    print(f"kept {len(words)} of {draws} draws (G1 <= {args.cap}); replay failures: {failures}; {dt:.1f}s")
    for g in sorted(genera):
        print(f"G1={g:3d}  {genera[g]:4d}  " + "#" * genera[g])


if __name__ == "__main__":
    main()
