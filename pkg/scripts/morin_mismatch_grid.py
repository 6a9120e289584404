"""Sweep the printed Morin closed form against the sum over singularities.

    python3 scripts/morin_mismatch_grid.py --n-max 30 --k-max 4 --r-max 4

Prints one line per (k, r) with the number of even n that disagree and the
first disagreement, then the total.
"""

import argparse

from qhol.cobordism import morin_crosscheck


def sweep(n_max, k_max, r_max):
    rows = []
    for k in range(k_max + 1):
        for r in range(r_max + 1):
            checks = [morin_crosscheck(n, k, r) for n in range(0, n_max + 1, 2)]
            bad = [c for c in checks if c.status == "mismatch"]
            rows.append((k, r, len(checks), bad))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=30)
    ap.add_argument("--k-max", type=int, default=4)
    ap.add_argument("--r-max", type=int, default=4)
    a = ap.parse_args()
    total = 0
    print(f"{'k':>2} {'r':>2} {'checked':>7} {'mismatch':>8}  first")
    for k, r, n_checked, bad in sweep(a.n_max, a.k_max, a.r_max):
        total += len(bad)
        first = f"n={bad[0].n}: {bad[0].closed_form} vs {bad[0].sum_over_eta}" if bad else "-"
        print(f"{k:>2} {r:>2} {n_checked:>7} {len(bad):>8}  {first}")
    print(f"total mismatches: {total}")


if __name__ == "__main__":
    main()
