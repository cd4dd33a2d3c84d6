"""Bipartite splits of N parties and distillability of family states across them.

A split is labelled by an (N-1)-bit index ``j``; bit ``j_i`` (party ``i``,
most significant first) is 0 when party ``i`` sits with party ``N``.  The
index ``j`` is the same label that pairs ``|Psi_j^+->`` in the family, which
is what makes split ``j`` depend only on ``lambda_j``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import isqrt
from typing import Iterable, Iterator

from .errors import IndexRangeError, TheoremViolation
from .family import LambdaState, delta, n_pair_indices


def _check_index(n_parties: int, j: int) -> None:
    if n_parties < 2:
        raise IndexRangeError(f"need N >= 2 parties, got {n_parties}")
    top = n_pair_indices(n_parties)
    if not 1 <= j <= top:
        raise IndexRangeError(f"split index j={j} outside 1..{top} for N={n_parties}")


def party_bit(n_parties: int, j: int, k: int) -> int:
    """Bit j_k of the split index (k = 1 .. N-1); party N always reads 0."""
    if k == n_parties:
        return 0
    return (j >> (n_parties - 1 - k)) & 1


@dataclass(frozen=True)
class Split:
    n_parties: int
    index: int

    def __post_init__(self):
        _check_index(self.n_parties, self.index)

    @property
    def bits(self) -> str:
        return format(self.index, f"0{self.n_parties - 1}b")

    @property
    def side_with_last(self) -> frozenset[int]:
        """Parties grouped with party N (bit 0), including N itself."""
        n = self.n_parties
        return frozenset(k for k in range(1, n + 1) if party_bit(n, self.index, k) == 0)

    @property
    def other_side(self) -> frozenset[int]:
        n = self.n_parties
        return frozenset(k for k in range(1, n) if party_bit(n, self.index, k) == 1)

    def separates(self, k: int, k_prime: int) -> bool:
        n = self.n_parties
        return party_bit(n, self.index, k) != party_bit(n, self.index, k_prime)


def split_from_index(n_parties: int, j: int) -> Split:
    return Split(n_parties, j)


def split_from_groups(n_parties: int, other_side: Iterable[int]) -> Split:
    """Inverse of :attr:`Split.other_side`: the split isolating ``other_side`` from party N."""
    j = 0
    for k in set(other_side):
        if not 1 <= k < n_parties:
            raise IndexRangeError(f"party {k} cannot leave party {n_parties}'s side")
        j |= 1 << (n_parties - 1 - k)
    return Split(n_parties, j)


def all_splits(n_parties: int) -> Iterator[Split]:
    for j in range(1, n_pair_indices(n_parties) + 1):
        yield Split(n_parties, j)


# -- distillability -----------------------------------------------------------

def _coherence(state: LambdaState) -> Fraction:
    # sigma_z on one qubit swaps lambda0_plus <-> lambda0_minus and fixes every
    # lambda_j, so only |delta| matters for distillability.
    return abs(delta(state))


def is_split_distillable(state: LambdaState, j: int) -> bool:
    """``2 * lambda_j < |delta|``, decided exactly. Equality is not distillable."""
    _check_index(state.n_qubits, j)
    return 2 * state.lam(j) < _coherence(state)


def undistillable_splits(state: LambdaState) -> tuple[int, ...]:
    """Sorted indices failing the criterion.

    Only indices in the sparse support can fail unless ``delta == 0``, in which
    case every split fails; the cost is O(|support|) otherwise.
    """
    c = _coherence(state)
    if c == 0:
        return tuple(range(1, n_pair_indices(state.n_qubits) + 1))
    return tuple(j for j, v in state.items() if 2 * v >= c)


def min_distillable_bound(n_parties: int) -> int:
    """floor(2**(N-1) - 2**((N-1)/2) + 1) in integer arithmetic.

    For odd N-1 the square root is irrational, so
    floor(A + 1 - sqrt(A)) = A + 1 - ceil(sqrt(A)) = A - isqrt(A).
    """
    if n_parties < 2:
        raise IndexRangeError(f"need N >= 2, got {n_parties}")
    e = n_parties - 1
    a = 1 << e
    if e % 2 == 0:
        return a - (1 << (e // 2)) + 1
    return a - isqrt(a)


def distillation_probability_bound(n_parties: int) -> float:
    """Lower bound 1 - 1/(2**((N-1)/2) + 1) on the fraction of distillable splits."""
    if n_parties < 2:
        raise IndexRangeError(f"need N >= 2, got {n_parties}")
    return 1.0 - 1.0 / (2.0 ** ((n_parties - 1) / 2) + 1.0)


def _mk_violated(state: LambdaState) -> bool:
    d = delta(state)
    return d * d * (1 << (state.n_qubits - 1)) > 1


@dataclass(frozen=True)
class SplitReport:
    n_parties: int
    undistillable: tuple[int, ...]
    count: int
    bound: int
    probability_bound: float

    @property
    def total(self) -> int:
        return n_pair_indices(self.n_parties)

    @property
    def distillable(self) -> tuple[int, ...]:
        """Materialized on demand: this is O(2**N)."""
        bad = set(self.undistillable)
        return tuple(j for j in range(1, self.total + 1) if j not in bad)

    @property
    def distillable_set(self) -> frozenset[int]:
        return frozenset(self.distillable)


def enumerate_distillable(state: LambdaState) -> SplitReport:
    """Classify every split; checks the counting bound whenever MK is violated."""
    n = state.n_qubits
    bad = undistillable_splits(state)
    count = n_pair_indices(n) - len(bad)
    bound = min_distillable_bound(n)
    if _mk_violated(state) and count < bound:
        raise TheoremViolation(
            f"MK-violating state has only {count} distillable splits (< {bound}): {state!r}")
    return SplitReport(n, bad, count, bound, distillation_probability_bound(n))


# -- pairs ----------------------------------------------------------------------

def _check_pair(n_parties: int, k: int, k_prime: int) -> None:
    if not 1 <= k < k_prime <= n_parties:
        raise IndexRangeError(f"need 1 <= k < k' <= {n_parties}, got ({k}, {k_prime})")


def separates(n_parties: int, j: int, k: int, k_prime: int) -> bool:
    return party_bit(n_parties, j, k) != party_bit(n_parties, j, k_prime)


def separating_splits(n_parties: int, k: int, k_prime: int) -> frozenset[int]:
    """All split indices putting parties k and k' on opposite sides (2**(N-2) of them)."""
    _check_pair(n_parties, k, k_prime)
    return frozenset(j for j in range(1, n_pair_indices(n_parties) + 1)
                     if separates(n_parties, j, k, k_prime))


def is_pair_distillable(state: LambdaState, k: int, k_prime: int) -> bool:
    """A singlet between k and k' is distillable iff every separating split is.

    Evaluated sparsely: the pair is blocked exactly when some undistillable
    split separates it.
    """
    n = state.n_qubits
    _check_pair(n, k, k_prime)
    return not any(separates(n, j, k, k_prime) for j in undistillable_splits(state))


def pairs(n_parties: int) -> Iterator[tuple[int, int]]:
    return combinations(range(1, n_parties + 1), 2)


def find_distillable_pair(state: LambdaState) -> tuple[int, int] | None:
    """Lexicographically smallest distillable pair, or None."""
    for k, kp in pairs(state.n_qubits):
        if is_pair_distillable(state, k, kp):
            return (k, kp)
    return None
