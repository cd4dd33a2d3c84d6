"""Exact coefficient model of the N-qubit GHZ-diagonal state family.

A family member is fixed by two GHZ weights ``lambda0_plus``/``lambda0_minus``
and one weight ``lambda_j`` per index ``j = 1 .. 2**(N-1) - 1``, each shared
by the pair of basis states ``|Psi_j^+>``, ``|Psi_j^->``.  Everything here is
kept in :class:`fractions.Fraction` so that boundary comparisons are exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational, Real
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import (
    IndexRangeError,
    NegativeCoefficientError,
    NormalizationError,
    SamplingTimeoutError,
)

QUANTUM = 10**9
DEFAULT_REJECTION_BUDGET = 10_000


def n_pair_indices(n_qubits: int) -> int:
    """Number of indices j >= 1, i.e. 2**(N-1) - 1 (also the number of splits)."""
    return (1 << (n_qubits - 1)) - 1


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (Rational, str)):
        return Fraction(x)
    if isinstance(x, Real):
        # floats are accepted but converted exactly
        return Fraction(float(x))
    raise TypeError(f"cannot interpret {x!r} as a rational number")


@dataclass(frozen=True)
class LambdaState:
    """Validated, immutable family state. Build it with :func:`new_lambda_state`."""

    n_qubits: int
    lambda0_plus: Fraction
    lambda0_minus: Fraction
    lambdas: Mapping[int, Fraction] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "lambdas", MappingProxyType(dict(self.lambdas)))

    def __hash__(self):
        return hash((self.n_qubits, self.lambda0_plus, self.lambda0_minus,
                     tuple(sorted(self.lambdas.items()))))

    def lam(self, j: int) -> Fraction:
        """lambda_j, zero for absent keys; j = 0 is not a valid pair index."""
        if not 1 <= j <= n_pair_indices(self.n_qubits):
            raise IndexRangeError(f"j={j} outside 1..{n_pair_indices(self.n_qubits)}")
        return self.lambdas.get(j, Fraction(0))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.lambdas))

    def items(self) -> Iterator[tuple[int, Fraction]]:
        return iter(sorted(self.lambdas.items()))

    def __repr__(self):
        lam = ", ".join(f"{j}: {v}" for j, v in self.items())
        return (f"LambdaState(N={self.n_qubits}, l0+={self.lambda0_plus}, "
                f"l0-={self.lambda0_minus}, {{{lam}}})")


def new_lambda_state(n_qubits: int, lambda0_plus, lambda0_minus,
                     lambdas: Mapping[int, object] | Iterable[tuple[int, object]] = ()) -> LambdaState:
    """Validate coefficients and return a :class:`LambdaState`.

    Zero entries of ``lambdas`` are dropped so equal states compare equal.
    Normalization ``l0+ + l0- + 2 * sum(lambda_j) == 1`` is checked exactly.
    """
    if int(n_qubits) != n_qubits or n_qubits < 2:
        raise IndexRangeError(f"need an integer N >= 2, got {n_qubits!r}")
    n_qubits = int(n_qubits)
    lp = _as_fraction(lambda0_plus)
    lm = _as_fraction(lambda0_minus)
    items = lambdas.items() if isinstance(lambdas, Mapping) else lambdas
    top = n_pair_indices(n_qubits)

    sparse: dict[int, Fraction] = {}
    for j, v in items:
        if int(j) != j or not 1 <= j <= top:
            raise IndexRangeError(f"index j={j!r} outside 1..{top} for N={n_qubits}")
        v = _as_fraction(v)
        if v < 0:
            raise NegativeCoefficientError(f"lambda_{j} = {v} < 0")
        if int(j) in sparse:
            raise IndexRangeError(f"duplicate index j={j}")
        if v:
            sparse[int(j)] = v
    if lp < 0 or lm < 0:
        raise NegativeCoefficientError(f"GHZ weights must be >= 0, got {lp}, {lm}")

    total = lp + lm + 2 * sum(sparse.values(), Fraction(0))
    if total != 1:
        raise NormalizationError(f"coefficients sum to {total}, expected 1")
    return LambdaState(n_qubits, lp, lm, sparse)


def delta(state: LambdaState) -> Fraction:
    """GHZ coherence ``lambda0_plus - lambda0_minus`` (may be negative)."""
    return state.lambda0_plus - state.lambda0_minus


def ghz_state(n_qubits: int) -> LambdaState:
    return new_lambda_state(n_qubits, 1, 0, {})


def quantize_simplex(weights) -> list[Fraction]:
    """Round non-negative weights to multiples of 1/QUANTUM summing to exactly 1.

    Largest-remainder rounding: every output is within 1/QUANTUM of the
    normalized input, and no renormalization drift is introduced.
    """
    w = np.clip(np.asarray(weights, dtype=float), 0.0, None)
    s = w.sum()
    if not s > 0:
        raise ValueError("weights must have positive sum")
    scaled = w / s * QUANTUM
    base = np.floor(scaled).astype(np.int64)
    short = QUANTUM - int(base.sum())
    if short > 0:
        # stable order keeps the result deterministic under ties
        order = np.argsort(-(scaled - base), kind="stable")
        base[order[:short]] += 1
    elif short < 0:
        order = np.argsort(scaled - base, kind="stable")
        take = [i for i in order if base[i] > 0][:-short]
        base[take] -= 1
    return [Fraction(int(q), QUANTUM) for q in base]


def state_from_simplex(n_qubits: int, point) -> LambdaState:
    """Map a simplex point ``(l0+, l0-, 2*l_1, ..., 2*l_M)`` to a state (quantized)."""
    q = quantize_simplex(point)
    lambdas = {j: v / 2 for j, v in enumerate(q[2:], start=1)}
    return new_lambda_state(n_qubits, q[0], q[1], lambdas)


def random_family_state(n_qubits: int, seed: int, min_delta=None,
                        max_tries: int = DEFAULT_REJECTION_BUDGET) -> LambdaState:
    """Uniform sample from the coefficient simplex, deterministic per ``seed``.

    With ``min_delta`` the sample is uniform on the slice ``delta > min_delta``.
    For ``min_delta >= 0`` the slice is sampled directly: writing
    ``l0+ = l0- + d + z`` turns it into a (scaled) simplex in
    ``(2*l0-, z, 2*l_j...)``, so no rejection is needed beyond re-drawing the
    rare samples that quantization pushes back across the threshold.
    Plain rejection is used for negative ``min_delta``.
    """
    if n_qubits < 2:
        raise IndexRangeError(f"need N >= 2, got {n_qubits}")
    rng = np.random.default_rng(seed)
    k = 2 + n_pair_indices(n_qubits)

    if min_delta is None:
        return state_from_simplex(n_qubits, rng.exponential(size=k))
    if min_delta >= 1:
        raise SamplingTimeoutError(f"no state has delta > {min_delta}")

    for _ in range(max_tries):
        y = rng.exponential(size=k)
        y /= y.sum()
        if min_delta < 0:
            point = y
        else:
            d = float(min_delta)
            scale = 1.0 - d
            minus = scale * y[0] / 2
            plus = minus + d + scale * y[1]
            point = np.concatenate(([plus, minus], scale * y[2:]))
        state = state_from_simplex(n_qubits, point)
        if delta(state) > min_delta:
            return state
    raise SamplingTimeoutError(
        f"no sample with delta > {min_delta} after {max_tries} draws (N={n_qubits})")
