"""Dense matrix oracle: basis vectors, density matrices, partial transposes.

Conventions: qubit 1 is the leftmost (most significant) tensor factor, so the
basis index of ``|j>|b>`` is ``2*j + b``.  Operators are plain complex
``numpy`` arrays of shape ``(2**N, 2**N)``.
"""
from __future__ import annotations

import enum
import os

import numpy as np

from .errors import DimensionCapError, IndexRangeError, NotADensityMatrixError, SplitMismatchError
from .family import LambdaState, n_pair_indices, state_from_simplex
from .splits import Split

HARD_CAP = 12
EIGEN_CAP = 10
CAP_ENV = "MKDISTILL_DENSE_CAP"

VALIDITY_TOL = 1e-12
PSD_TOL = 1e-10
NPT_TOL = 1e-9


def dense_cap() -> int:
    """Largest N for dense construction; ``$MKDISTILL_DENSE_CAP`` may lower it (never above 12)."""
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return HARD_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise DimensionCapError(f"{CAP_ENV}={raw!r} is not an integer") from None
    return max(1, min(cap, HARD_CAP))


def eigen_cap() -> int:
    return min(EIGEN_CAP, dense_cap())


def _require_cap(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise DimensionCapError(f"{what} needs N <= {cap}, got N={n}")


def n_qubits_of(op: np.ndarray) -> int:
    d = op.shape[0]
    n = d.bit_length() - 1
    if d < 2 or 1 << n != d or op.shape[-1] != d:
        raise ValueError(f"not a qubit operator/vector: shape {op.shape}")
    return n


def _sign(sign) -> int:
    if sign in ("+", +1):
        return 1
    if sign in ("-", -1):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def psi_j(n_qubits: int, j: int, sign="+") -> np.ndarray:
    """(|j>|0> +- |2**(N-1)-j-1>|1>) / sqrt(2) as a length-2**N vector."""
    s = _sign(sign)
    if not 0 <= j <= n_pair_indices(n_qubits):
        raise IndexRangeError(f"j={j} outside 0..{n_pair_indices(n_qubits)}")
    dim = 1 << n_qubits
    v = np.zeros(dim, dtype=complex)
    v[2 * j] = 1 / np.sqrt(2)
    v[dim - 1 - 2 * j] = s / np.sqrt(2)  # = 2*(2**(N-1)-j-1) + 1, the bitwise complement
    return v


def family_basis(n_qubits: int) -> np.ndarray:
    """All 2**N vectors Psi_j^+- as columns, ordered (0+, 0-, 1+, 1-, ...)."""
    cols = [psi_j(n_qubits, j, s) for j in range(n_pair_indices(n_qubits) + 1) for s in "+-"]
    return np.stack(cols, axis=1)


def densify(state: LambdaState) -> np.ndarray:
    """Density matrix of a family state.

    Each pair ``Psi_j^+-`` lives on ``{2j, complement(2j)}``; mixing the two
    signs with weights w+, w- gives diagonal (w+ + w-)/2 there and coherence
    (w+ - w-)/2 between them, so the matrix is written entry by entry.
    """
    n = state.n_qubits
    _require_cap(n, dense_cap(), "densify")
    dim = 1 << n
    rho = np.zeros((dim, dim), dtype=complex)
    lp, lm = float(state.lambda0_plus), float(state.lambda0_minus)
    last = dim - 1
    rho[0, 0] = rho[last, last] = (lp + lm) / 2
    rho[0, last] = rho[last, 0] = (lp - lm) / 2
    for j, lam in state.items():
        rho[2 * j, 2 * j] = rho[last - 2 * j, last - 2 * j] = float(lam)
    return rho


def check_density_matrix(rho: np.ndarray, *, psd: bool = True) -> None:
    """Raise NotADensityMatrixError unless rho is Hermitian, unit trace and (optionally) PSD."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise NotADensityMatrixError(f"not square: shape {rho.shape}")
    try:
        n = n_qubits_of(rho)
    except ValueError as exc:
        raise NotADensityMatrixError(str(exc)) from None
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > VALIDITY_TOL:
        raise NotADensityMatrixError(f"not Hermitian (max deviation {herm:.3g})")
    tr = np.trace(rho)
    if abs(tr - 1) > VALIDITY_TOL:
        raise NotADensityMatrixError(f"trace {tr} != 1")
    if psd and n <= eigen_cap():
        lo = np.linalg.eigvalsh(hermitize(rho))[0]
        if lo < -PSD_TOL:
            raise NotADensityMatrixError(f"negative eigenvalue {lo:.3g}")


def hermitize(op: np.ndarray) -> np.ndarray:
    return (op + op.conj().T) / 2


def random_density_matrix(n_qubits: int, seed: int, rank: int | None = None) -> np.ndarray:
    """Ginibre-distributed mixed state (full rank unless ``rank`` is given)."""
    _require_cap(n_qubits, dense_cap(), "random_density_matrix")
    rng = np.random.default_rng(seed)
    dim = 1 << n_qubits
    g = rng.normal(size=(dim, rank or dim)) + 1j * rng.normal(size=(dim, rank or dim))
    rho = g @ g.conj().T
    rho = hermitize(rho / np.trace(rho).real)
    return rho


def family_projections(rho: np.ndarray) -> tuple[float, float, np.ndarray]:
    """<Psi_0^+|rho|Psi_0^+>, <Psi_0^-|rho|Psi_0^->, and <Psi_j^+|rho|Psi_j^+> + <Psi_j^-|..|Psi_j^-> for j >= 1."""
    n = n_qubits_of(rho)
    last = (1 << n) - 1
    a = 2 * np.arange(n_pair_indices(n) + 1)
    b = last - a
    diag = np.real(rho[a, a] + rho[b, b])
    coh = np.real(rho[a, b] + rho[b, a]) / 2
    plus0 = (diag[0] + 2 * coh[0]) / 2
    minus0 = (diag[0] - 2 * coh[0]) / 2
    return plus0, minus0, diag[1:]


def extract_lambda(rho: np.ndarray) -> LambdaState:
    """Family state with the same projections onto every Psi_j^+- as ``rho``.

    This is the coefficient map induced by depolarizing ``rho`` into the
    family.  Coefficients are quantized to multiples of 1e-9 and summed to 1
    exactly.
    """
    rho = np.asarray(rho)
    check_density_matrix(rho)
    plus0, minus0, pair = family_projections(rho)
    return state_from_simplex(n_qubits_of(rho), np.concatenate(([plus0, minus0], pair)))


def _split_of(n: int, split: Split | int) -> Split:
    if isinstance(split, Split):
        if split.n_parties != n:
            raise SplitMismatchError(f"split for N={split.n_parties} applied to N={n} operator")
        return split
    return Split(n, int(split))


def partial_transpose(rho: np.ndarray, split: Split | int) -> np.ndarray:
    """Transpose the qubits on the side of ``split`` that does not hold party N."""
    rho = np.asarray(rho)
    n = n_qubits_of(rho)
    sp = _split_of(n, split)
    t = rho.reshape((2,) * (2 * n))
    axes = list(range(2 * n))
    for k in sp.other_side:
        axes[k - 1], axes[n + k - 1] = axes[n + k - 1], axes[k - 1]
    return t.transpose(axes).reshape(rho.shape)


def min_pt_eigenvalue(rho: np.ndarray, split: Split | int) -> float:
    n = n_qubits_of(np.asarray(rho))
    _require_cap(n, eigen_cap(), "partial-transpose eigensolve")
    return float(np.linalg.eigvalsh(hermitize(partial_transpose(rho, split)))[0])


class PT(enum.Enum):
    NPT = "NPT"
    PPT = "PPT"
    INDETERMINATE = "Indeterminate"


def classify_min_eigenvalue(lo: float, tolerance: float = NPT_TOL) -> PT:
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if lo < -tolerance:
        return PT.NPT
    if abs(lo) <= tolerance:
        return PT.INDETERMINATE
    return PT.PPT


def is_npt(rho: np.ndarray, split: Split | int, tolerance: float = NPT_TOL) -> PT:
    """NPT if min eig of the partial transpose < -tol, Indeterminate if within +-tol, else PPT."""
    return classify_min_eigenvalue(min_pt_eigenvalue(rho, split), tolerance)
