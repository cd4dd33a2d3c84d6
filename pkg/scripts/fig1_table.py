"""Write the distillation-probability lower bound for N = 3..N_MAX as CSV.

    python scripts/fig1_table.py 30 results/p_bound.csv
"""
import sys
from pathlib import Path

from mkdistill.cli import table_csv


def main(n_max: int = 12, out: str = "results/p_bound.csv") -> None:
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(table_csv(n_max), encoding="utf-8", newline="\n")
    print(f"wrote {path} (N = 3..{n_max})")


if __name__ == "__main__":
    main(*(int(a) if i == 0 else a for i, a in enumerate(sys.argv[1:])))
