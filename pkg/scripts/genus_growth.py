"""How the filling grows with the monodromy.

Prints, for torus words with j right twists about a1, the number of boundary
twists produced, the filling genus, insertion count and Euler characteristic,
plus the merged-genus table over a grid of (a, n).

    python3 scripts/genus_growth.py [--max-right 3]
"""

import argparse
import time

from concave_forge.cobordism import build_concave_filling, euler_characteristic
from concave_forge.homology import Surface
from concave_forge.rewrite import MoveKind, merged_genus, rewrite_to_boundary_form
from concave_forge.twistword import TwistLetter, TwistWord


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-right", type=int, default=3)
    args = ap.parse_args()
    s = Surface(1, 1)
    print("right  left  n_right  G1  inserts  |R|  chi  seconds")
    for right in range(args.max_right + 1):
        for left in (0, 2):
            letters = [TwistLetter.chain(1)] * right + [TwistLetter.chain(2, -1)] * left
            t = time.perf_counter()
            r = rewrite_to_boundary_form(s, TwistWord(s, letters))
            chi = euler_characteristic(build_concave_filling(r))
            dt = time.perf_counter() - t
            ins = r.move_counts()[MoveKind.INSERT_RIGHT_TWIST]
            print(f"{right:5d} {left:5d} {r.n_right:8d} {r.G1:3d} {ins:8d} {len(r.R):4d} {chi:4d} {dt:8.2f}")
    print()
    print("merged genus G1(a, n)")
    ns = (1, 3, 5, 7, 9)
    print("a\\n " + " ".join(f"{n:4d}" for n in ns))
    for a in range(1, 6):
        print(f"{a:3d} " + " ".join(f"{merged_genus(a, n):4d}" for n in ns))


if __name__ == "__main__":
    main()
