"""Contact-form residuals of the binding chart across K and grid sizes.

    python3 scripts/contact_grid.py [--grids 8 16 32 64]
"""

import argparse
import time

from concave_forge.contactmodel import contact_report


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--K", type=float, nargs="+", default=[0.5, 1.0, 10.0, 100.0])
    ap.add_argument("--grids", type=int, nargs="+", default=[8, 16, 32, 64])
    args = ap.parse_args()
    print("K        grid  reeb_residual  rel_error  min_coeff    collar  ok    seconds")
    for K in args.K:
        for n in args.grids:
            t = time.perf_counter()
            rep = contact_report(K, n)
            dt = time.perf_counter() - t
            print(f"{K:<8g} {n:4d}  {rep.max_reeb_residual:13.2e}  {rep.max_relative_error:9.2e}  "
                  f"{rep.min_contact_coefficient:9.3e}  {rep.collar_coefficient:8g}  {str(rep.ok):5s} {dt:7.3f}")


if __name__ == "__main__":
    main()
