"""Mermin-Klyshko Bell operator: recursive construction, projector form, MK value."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dense import _require_cap, dense_cap, n_qubits_of, psi_j
from .errors import AlignmentFailedError, NonUnitVectorError
from .family import LambdaState, delta, random_family_state

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
X_HAT = (1.0, 0.0, 0.0)
Y_HAT = (0.0, 1.0, 0.0)
UNIT_TOL = 1e-12
ALIGN_TOL = 1e-10


def sigma(direction) -> np.ndarray:
    """n . sigma for a real 3-vector n."""
    nx, ny, nz = direction
    return nx * PAULI[0] + ny * PAULI[1] + nz * PAULI[2]


@dataclass(frozen=True)
class MeasurementFrame:
    """The two measurement directions (n_i, n'_i) for each party i."""

    n: tuple[tuple[float, float, float], ...]
    n_prime: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        n = tuple(tuple(float(c) for c in v) for v in self.n)
        npr = tuple(tuple(float(c) for c in v) for v in self.n_prime)
        if len(n) != len(npr) or not n:
            raise ValueError("need the same positive number of n and n' directions")
        for v in n + npr:
            if len(v) != 3 or abs(math.hypot(*v) - 1) > UNIT_TOL:
                raise NonUnitVectorError(f"{v} is not a unit 3-vector")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "n_prime", npr)

    @property
    def n_qubits(self) -> int:
        return len(self.n)

    @classmethod
    def uniform(cls, n_qubits: int, n=X_HAT, n_prime=Y_HAT) -> "MeasurementFrame":
        return cls((n,) * n_qubits, (n_prime,) * n_qubits)

    @classmethod
    def xy(cls, n_qubits: int) -> "MeasurementFrame":
        return cls.uniform(n_qubits, X_HAT, Y_HAT)

    @classmethod
    def random(cls, n_qubits: int, rng: np.random.Generator) -> "MeasurementFrame":
        v = rng.normal(size=(2, n_qubits, 3))
        v /= np.linalg.norm(v, axis=-1, keepdims=True)
        return cls(tuple(map(tuple, v[0])), tuple(map(tuple, v[1])))

    def swapped(self) -> "MeasurementFrame":
        return MeasurementFrame(self.n_prime, self.n)


def mk_operator_pair(frame: MeasurementFrame) -> tuple[np.ndarray, np.ndarray]:
    """(B_N, B'_N) built in one pass; B' is B with every n_i <-> n'_i."""
    _require_cap(frame.n_qubits, dense_cap(), "mk_operator")
    b, bp = sigma(frame.n[0]), sigma(frame.n_prime[0])
    for n_i, np_i in zip(frame.n[1:], frame.n_prime[1:]):
        s, sp = sigma(n_i), sigma(np_i)
        b, bp = (0.5 * (np.kron(b, s + sp) + np.kron(bp, s - sp)),
                 0.5 * (np.kron(bp, sp + s) + np.kron(b, sp - s)))
    return b, bp


def mk_operator(frame: MeasurementFrame) -> np.ndarray:
    return mk_operator_pair(frame)[0]


def mk_scale(n_qubits: int) -> float:
    """2**((N-1)/2), the maximal quantum value of the MK operator."""
    e = n_qubits - 1
    return math.ldexp(math.sqrt(2.0) if e % 2 else 1.0, e // 2)


def canonical_mk_operator(n_qubits: int) -> np.ndarray:
    """2**((N-1)/2) (|Psi_0^+><Psi_0^+| - |Psi_0^-><Psi_0^-|)."""
    _require_cap(n_qubits, dense_cap(), "canonical_mk_operator")
    p, m = psi_j(n_qubits, 0, "+"), psi_j(n_qubits, 0, "-")
    return mk_scale(n_qubits) * (np.outer(p, p.conj()) - np.outer(m, m.conj()))


def local_phase_conjugate(op: np.ndarray, phases: Sequence[float]) -> np.ndarray:
    """U op U^dagger with U = kron_i diag(1, exp(i phi_i))."""
    u = np.ones(1, dtype=complex)
    for phi in phases:
        u = np.kron(u, np.array([1.0, np.exp(1j * phi)]))
    return u[:, None] * op * u.conj()[None, :]


def align_phases(xy_operator: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Local phases mapping the all-(x, y) MK operator onto the projector form.

    Conjugation by kron_i diag(1, e^{i phi_i}) multiplies the <0..0|.|1..1>
    element by e^{-i sum(phi)}; its argument is split evenly over the qubits.
    """
    op = np.asarray(xy_operator)
    n = n_qubits_of(op)
    theta = np.angle(op[0, -1])
    phases = np.full(n, theta / n)
    aligned = local_phase_conjugate(op, phases)
    residual = np.max(np.abs(aligned - canonical_mk_operator(n)))
    if residual > ALIGN_TOL:
        raise AlignmentFailedError(
            f"aligned operator differs from projector form by {residual:.3g}")
    return np.angle(np.exp(1j * phases)), aligned


@dataclass(frozen=True)
class MkValueResult:
    value: float
    violated: bool
    threshold: float = 1.0


def violates_mk(state: LambdaState) -> bool:
    """|tr(B_N rho)| > 1, i.e. delta**2 * 2**(N-1) > 1, decided exactly."""
    d = delta(state)
    return d * d * (1 << (state.n_qubits - 1)) > 1


def mk_value(state: LambdaState) -> MkValueResult:
    """tr(B_N rho) = 2**((N-1)/2) * delta, evaluated without matrices."""
    return MkValueResult(mk_scale(state.n_qubits) * float(delta(state)), violates_mk(state))


def violation_threshold(n_qubits: int) -> float:
    """2**(-(N-1)/2) rounded down so that delta > it never excludes a violating state."""
    return math.nextafter(1.0 / mk_scale(n_qubits), 0.0)


def random_violating_state(n_qubits: int, seed: int) -> LambdaState:
    """Uniform sample from the family conditioned on MK violation (delta > 0 branch)."""
    sub = 0
    while True:
        sub_seed = seed if sub == 0 else int(np.random.SeedSequence([seed, sub]).generate_state(1)[0])
        state = random_family_state(n_qubits, sub_seed, min_delta=violation_threshold(n_qubits))
        if violates_mk(state):
            return state
        sub += 1


def mk_expectation(op: np.ndarray, rho: np.ndarray) -> float:
    """Real part of tr(op rho) (both Hermitian, so the imaginary part is round-off)."""
    return float(np.real(np.einsum("ij,ji->", op, rho)))
