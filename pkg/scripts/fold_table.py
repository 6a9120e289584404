"""Print the fold cobordism table for n = 0..5 with the facts and solver steps.

    python3 scripts/fold_table.py [--n-max 5] [--quiet]
"""

import argparse

from qhol.cobordism import fold_cobordism_analysis


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=5)
    ap.add_argument("--quiet", action="store_true", help="table only")
    a = ap.parse_args()
    results = [fold_cobordism_analysis(n) for n in range(a.n_max + 1)]
    if not a.quiet:
        for fa in results:
            print(f"== n = {fa.n}")
            print("sequence:", fa.sequence)
            for f in fa.facts:
                print("  fact", f)
            for s in fa.solved.trace:
                print(f"  {s.rule:<3} {s.target} := {s.value}   [{s.reason}]")
    print()
    print("n     " + "  ".join(f"{fa.n:>8}" for fa in results))
    print("Qhol  " + "  ".join(f"{str(fa.qhol):>8}" for fa in results))


if __name__ == "__main__":
    main()
