"""Command-line front end.

Subcommands::

    mkdistill analyze STATE.json [--dense-oracle] [--tolerance T] [-o REPORT.json]
    mkdistill be N [--state-out PATH] [--report-out PATH]
    mkdistill table N_MAX [-o FILE.csv]
    mkdistill verify {prop1-oracle,bound,theorem2} [--seed S] [--trials T]

Exit codes: 0 ok, 1 property failure, 2 input error, 3 dense cap exceeded, 4 IO error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import bec, bell, dense, splits
from .errors import DimensionCapError, InputError, ParseError
from .family import LambdaState, delta, new_lambda_state, random_family_state

SCHEMA_VERSION = 1
STATE_FIELDS = {"schema_version", "n_qubits", "lambda0_plus", "lambda0_minus", "lambdas"}

EXIT_OK, EXIT_PROPERTY, EXIT_INPUT, EXIT_CAP, EXIT_IO = 0, 1, 2, 3, 4

_RATIONAL = re.compile(r"(-?\d+)(?:/(\d+))?")


# -- state files ----------------------------------------------------------------

def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text) -> Fraction:
    """Strict "p/q" (or integer) parser; q > 0 and lowest terms required."""
    if not isinstance(text, str):
        raise ParseError(f"rational must be a string 'p/q', got {text!r}")
    m = _RATIONAL.fullmatch(text.strip())
    if not m:
        raise ParseError(f"malformed rational {text!r}")
    p, q = int(m.group(1)), int(m.group(2) or 1)
    if q == 0:
        raise ParseError(f"zero denominator in {text!r}")
    x = Fraction(p, q)
    if x.numerator != p or x.denominator != q:
        raise ParseError(f"{text!r} is not in lowest terms")
    return x


def state_to_dict(state: LambdaState) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "n_qubits": state.n_qubits,
        "lambda0_plus": format_rational(state.lambda0_plus),
        "lambda0_minus": format_rational(state.lambda0_minus),
        "lambdas": {str(j): format_rational(v) for j, v in state.items()},
    }


def state_from_dict(data) -> LambdaState:
    if not isinstance(data, dict):
        raise ParseError("state file must hold a JSON object")
    unknown = set(data) - STATE_FIELDS
    missing = STATE_FIELDS - set(data)
    if unknown or missing:
        raise ParseError(f"bad fields: unknown={sorted(unknown)} missing={sorted(missing)}")
    if data["schema_version"] != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {data['schema_version']!r}")
    n = data["n_qubits"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError(f"n_qubits must be an integer, got {n!r}")
    lam = data["lambdas"]
    if not isinstance(lam, dict):
        raise ParseError("lambdas must be an object")
    parsed = []
    for key, value in lam.items():
        if not re.fullmatch(r"[1-9]\d*", key):
            raise ParseError(f"lambda index {key!r} is not a positive decimal integer")
        parsed.append((int(key), parse_rational(value)))
    return new_lambda_state(n, parse_rational(data["lambda0_plus"]),
                            parse_rational(data["lambda0_minus"]), parsed)


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def dumps_state(state: LambdaState) -> str:
    return dump_json(state_to_dict(state))


def loads_state(text: str) -> LambdaState:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return state_from_dict(data)


def read_state(path: str | Path) -> LambdaState:
    return loads_state(Path(path).read_text(encoding="utf-8"))


# -- reports ----------------------------------------------------------------

def analysis_report(state: LambdaState, dense_oracle: bool = False,
                    tolerance: float = dense.NPT_TOL) -> dict:
    n = state.n_qubits
    mk = bell.mk_value(state)
    rep = splits.enumerate_distillable(state)
    blocked, open_pairs = [], []
    for k, kp in splits.pairs(n):
        (open_pairs if splits.is_pair_distillable(state, k, kp) else blocked).append([k, kp])
    cert = bec.certify_state(state, use_dense=dense_oracle)
    report = {
        "n_qubits": n,
        "delta": format_rational(delta(state)),
        "mk": {"value": mk.value, "violated": mk.violated, "threshold": mk.threshold},
        "splits": {
            "bound": rep.bound,
            "total": rep.total,
            "count": rep.count,
            "probability_bound": rep.probability_bound,
            "distillable": list(rep.distillable),
            "undistillable": list(rep.undistillable),
        },
        "pairs": {"blocked": blocked, "distillable": open_pairs},
        "certificate": {
            "verdict": cert.verdict.value,
            "inseparable_witness": cert.inseparable_witness,
            "witness_kind": cert.witness_kind,
        },
    }
    if dense_oracle:
        report["dense_oracle"] = dense_oracle_block(state, tolerance)
    return report


def dense_oracle_block(state: LambdaState, tolerance: float) -> dict:
    n = state.n_qubits
    if n > dense.eigen_cap():
        raise DimensionCapError(f"dense oracle needs N <= {dense.eigen_cap()}, got {n}")
    rho = dense.densify(state)
    rows, disagreements = [], 0
    for sp in splits.all_splits(n):
        lo = dense.min_pt_eigenvalue(rho, sp)
        cls = dense.classify_min_eigenvalue(lo, tolerance)
        crit = splits.is_split_distillable(state, sp.index)
        # inside the tolerance band the oracle abstains
        agree = None if cls is dense.PT.INDETERMINATE else (cls is dense.PT.NPT) == crit
        disagreements += agree is False
        rows.append({"split": sp.index, "min_eigenvalue": lo, "class": cls.value,
                     "criterion_distillable": crit, "agree": agree})
    return {"tolerance": tolerance, "disagreements": disagreements, "splits": rows}


def certificate_report(cert: bec.BeCertificate) -> dict:
    return {
        "n_qubits": cert.n_qubits,
        "mk": {"value": cert.mk_value, "violated": cert.mk_violated, "threshold": 1.0},
        "undistillable_splits": list(cert.undistillable_splits),
        "j_set": sorted(bec.j_set(cert.n_qubits)),
        "all_pairs_blocked": cert.all_pairs_blocked,
        "inseparable_witness": cert.inseparable_witness,
        "witness_kind": cert.witness_kind,
        "verdict": cert.verdict.value,
    }


# -- table ----------------------------------------------------------------

TABLE_HEADER = ("N", "bound", "total_splits", "p_lower_bound")


def table_rows(n_max: int) -> list[tuple[int, int, int, str]]:
    if n_max < 3:
        raise InputError(f"n_max must be >= 3, got {n_max}")
    return [(n, splits.min_distillable_bound(n), (1 << (n - 1)) - 1,
             f"{splits.distillation_probability_bound(n):.12g}")
            for n in range(3, n_max + 1)]


def table_csv(n_max: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_HEADER)
    w.writerows(table_rows(n_max))
    return buf.getvalue()


# -- verification suites ------------------------------------------------------

def trial_seed(seed: int, *key: int) -> int:
    return int(np.random.SeedSequence([seed, *key]).generate_state(1)[0])


def _fail(out, msg: str, state: LambdaState | None = None) -> None:
    print(f"FAIL {msg}", file=out)
    if state is not None:
        print(dumps_state(state), end="", file=out)


def suite_bound(seed: int, trials: int, out) -> int:
    failures = 0
    for n in range(3, 11):
        bound = splits.min_distillable_bound(n)
        total = (1 << (n - 1)) - 1
        worst = total
        for t in range(trials):
            state = bell.random_violating_state(n, trial_seed(seed, n, t))
            # counted directly so a failure is reported, not raised
            count = total - len(splits.undistillable_splits(state))
            worst = min(worst, count)
            if count < bound:
                failures += 1
                _fail(out, f"bound N={n} trial={t}: {count} < {bound}", state)
        print(f"bound N={n}: {trials} violating states, min count {worst}, bound {bound}", file=out)
    return failures


def suite_prop1_oracle(seed: int, trials: int, out, band: float = 1e-6) -> int:
    failures = 0
    for n in range(2, 7):
        skipped = 0
        done = 0
        attempt = 0
        while done < trials:
            state = random_family_state(n, trial_seed(seed, n, attempt))
            attempt += 1
            c = abs(delta(state))
            if any(abs(2 * state.lam(j) - c) <= band for j in range(1, 1 << (n - 1))):
                skipped += 1
                continue
            done += 1
            rho = dense.densify(state)
            for sp in splits.all_splits(n):
                npt = dense.is_npt(rho, sp) is dense.PT.NPT
                if npt != splits.is_split_distillable(state, sp.index):
                    failures += 1
                    _fail(out, f"prop1 N={n} split={sp.index}: NPT={npt}", state)
        print(f"prop1-oracle N={n}: {done} states checked, {skipped} boundary-band skips", file=out)
    return failures


def suite_theorem2(seed: int, trials: int, out) -> int:
    failures = 0
    for n in range(3, 13):
        cert = bec.certify(n)
        expected = bec.Verdict.BOUND_ENTANGLED_VIOLATING if n >= 6 else bec.Verdict.NOT_VIOLATING
        if cert.verdict is not expected:
            failures += 1
            _fail(out, f"theorem2 N={n}: verdict {cert.verdict.value}, expected {expected.value}")
        if set(cert.undistillable_splits) != bec.j_set(n):
            failures += 1
            _fail(out, f"theorem2 N={n}: undistillable {cert.undistillable_splits} != J_N")
        print(f"theorem2 N={n}: {cert.verdict.value} (mk={cert.mk_value:.6f}, "
              f"pairs blocked={cert.all_pairs_blocked})", file=out)
    for n in (3, 4, 5):
        for t in range(trials):
            state = bell.random_violating_state(n, trial_seed(seed, n, t))
            if splits.find_distillable_pair(state) is None:
                failures += 1
                _fail(out, f"theorem2 forward N={n} trial={t}: no distillable pair", state)
        print(f"theorem2 forward N={n}: {trials} violating states, each has a distillable pair",
              file=out)
    return failures


SUITES: dict[str, Callable[[int, int, object], int]] = {
    "prop1-oracle": suite_prop1_oracle,
    "bound": suite_bound,
    "theorem2": suite_theorem2,
}
DEFAULT_TRIALS = {"prop1-oracle": 200, "bound": 500, "theorem2": 500}


# -- entry point ----------------------------------------------------------------

def _write(path: str | None, text: str, out) -> None:
    if path is None or path == "-":
        out.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mkdistill", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyze a family state file")
    a.add_argument("input")
    a.add_argument("--dense-oracle", action="store_true",
                   help="cross-check every split with a dense partial-transpose eigensolve")
    a.add_argument("--tolerance", type=float, default=dense.NPT_TOL)
    a.add_argument("-o", "--output", default=None, help="report path (default stdout)")

    b = sub.add_parser("be", help="write the bound-entangled state for N and its certificate")
    b.add_argument("n", type=int)
    b.add_argument("--state-out", default=None)
    b.add_argument("--report-out", default=None)
    b.add_argument("--no-dense", action="store_true", help="skip the dense NPT witness")

    t = sub.add_parser("table", help="CSV of the distillable-split bounds for N = 3..N_MAX")
    t.add_argument("n_max", type=int)
    t.add_argument("-o", "--output", default=None)

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--seed", type=int, default=7)
    v.add_argument("--trials", type=int, default=None)
    return p


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            state = read_state(args.input)
            if args.dense_oracle and state.n_qubits > dense.eigen_cap():
                raise DimensionCapError(
                    f"dense oracle needs N <= {dense.eigen_cap()}, got {state.n_qubits}")
            report = analysis_report(state, args.dense_oracle, args.tolerance)
            _write(args.output, dump_json(report), out)
        elif args.command == "be":
            state = bec.be_state(args.n)
            cert = bec.certify(args.n, use_dense=not args.no_dense)
            if args.state_out:
                _write(args.state_out, dumps_state(state), out)
            _write(args.report_out, dump_json(certificate_report(cert)), out)
        elif args.command == "table":
            _write(args.output, table_csv(args.n_max), out)
        elif args.command == "verify":
            trials = args.trials if args.trials is not None else DEFAULT_TRIALS[args.suite]
            failures = SUITES[args.suite](args.seed, trials, out)
            print(f"{args.suite}: {'FAIL' if failures else 'ok'} ({failures} failures)", file=out)
            return EXIT_PROPERTY if failures else EXIT_OK
    except InputError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except DimensionCapError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_CAP
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
