"""Run every verification suite with its default trial count."""
import sys

from mkdistill.cli import main

if __name__ == "__main__":
    seed = sys.argv[1] if len(sys.argv) > 1 else "7"
    codes = [main(["verify", suite, "--seed", seed]) for suite in ("prop1-oracle", "bound", "theorem2")]
    sys.exit(max(codes))
