"""Certify the bound-entangled family member for a range of N and print a summary table.

    python scripts/be_sweep.py 3 20
"""
import sys

from mkdistill.bec import certify
from mkdistill.splits import min_distillable_bound


def main(n_lo: int = 3, n_hi: int = 20) -> None:
    print(f"{'N':>3} {'mk value':>10} {'violated':>8} {'#undist':>7} {'bound':>8} "
          f"{'pairs blocked':>13} {'witness':>12}  verdict")
    for n in range(n_lo, n_hi + 1):
        c = certify(n, use_dense=n <= 8)
        print(f"{n:>3} {c.mk_value:>10.6f} {str(c.mk_violated):>8} {len(c.undistillable_splits):>7} "
              f"{min_distillable_bound(n):>8} {str(c.all_pairs_blocked):>13} "
              f"{f'{c.inseparable_witness} ({c.witness_kind})':>12}  {c.verdict.value}")


if __name__ == "__main__":
    main(*map(int, sys.argv[1:]))
