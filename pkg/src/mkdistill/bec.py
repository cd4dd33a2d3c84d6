"""Bound-entangled MK-violating family members and their certification."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from . import dense
from .bell import mk_value
from .errors import IndexRangeError
from .family import LambdaState, delta, new_lambda_state
from .splits import find_distillable_pair, is_split_distillable, pairs, separates, undistillable_splits


class Verdict(str, enum.Enum):
    BOUND_ENTANGLED_VIOLATING = "BoundEntangledViolating"
    NOT_VIOLATING = "NotViolating"
    DISTILLABLE = "Distillable"


def j_set(n_qubits: int) -> frozenset[int]:
    """{3 * 2**m : m = 0 .. N-3}, the adjacent-pair split indices."""
    if n_qubits < 3:
        raise IndexRangeError(f"J_N needs N >= 3, got {n_qubits}")
    return frozenset(3 << m for m in range(n_qubits - 2))


def be_state(n_qubits: int) -> LambdaState:
    """lambda0+ = 1/(N-1), lambda0- = 0, lambda_j = 1/(2(N-1)) on J_N."""
    js = j_set(n_qubits)
    w = Fraction(1, 2 * (n_qubits - 1))
    return new_lambda_state(n_qubits, 2 * w, 0, {j: w for j in js})


def verify_pair_blocking(n_qubits: int) -> bool:
    """True iff every pair of parties is split apart by some index in J_N."""
    js = j_set(n_qubits)
    return all(any(separates(n_qubits, j, k, kp) for j in js)
               for k, kp in pairs(n_qubits))


def violation_cutoff(n_qubits: int) -> bool:
    """Integer form of N-1 < 2**((N-1)/2): does be_state(N) violate MK?"""
    return 1 << (n_qubits - 1) > (n_qubits - 1) ** 2


@dataclass(frozen=True)
class BeCertificate:
    n_qubits: int
    mk_value: float
    mk_violated: bool
    undistillable_splits: tuple[int, ...]
    all_pairs_blocked: bool
    inseparable_witness: int | None
    witness_kind: str | None  # "dense" (NPT eigenvalue found) or "criterion"
    verdict: Verdict


def _witness(state: LambdaState, use_dense: bool) -> tuple[int | None, str | None]:
    """Smallest split index certifying inseparability, and how it was found."""
    n = state.n_qubits
    if use_dense and n <= dense.eigen_cap():
        rho = dense.densify(state)
        for j in range(1, (1 << (n - 1))):
            if dense.is_npt(rho, j) is dense.PT.NPT:
                return j, "dense"
        return None, None
    if delta(state) == 0:
        return None, None
    # distillable across j implies NPT across j, hence entangled
    for j in range(1, (1 << (n - 1))):
        if is_split_distillable(state, j):
            return j, "criterion"
    return None, None


def certify_state(state: LambdaState, use_dense: bool = True) -> BeCertificate:
    n = state.n_qubits
    mk = mk_value(state)
    bad = undistillable_splits(state)
    blocked = find_distillable_pair(state) is None
    witness, kind = _witness(state, use_dense)

    if not mk.violated:
        verdict = Verdict.NOT_VIOLATING
    elif blocked and witness is not None:
        verdict = Verdict.BOUND_ENTANGLED_VIOLATING
    else:
        verdict = Verdict.DISTILLABLE
    return BeCertificate(n, mk.value, mk.violated, bad, blocked, witness, kind, verdict)


def certify(n_qubits: int, use_dense: bool = True) -> BeCertificate:
    """Certificate for :func:`be_state`; dense NPT witness only for N within the eigen cap."""
    return certify_state(be_state(n_qubits), use_dense)
