"""Brute-force density-matrix swap test for small dimensions.

Independent of every parametric formula in this package: states are
explicit d x d matrices, the swap test is the symmetric projector
(I + S)/2 applied to rho (x) sigma, and outputs come from a partial
trace.  Wherever the gadget module claims a closed form, this module
can check it by direct linear algebra.  Capped at d <= 16 since the
joint space is d^2 x d^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Seed

__all__ = [
    "MAX_DIM",
    "SwapTestResult",
    "random_pure_state",
    "make_depolarized",
    "swap_operator",
    "swap_test_apply",
    "trace_distance",
    "validate_density_matrix",
]

MAX_DIM = 16

_HERMITIAN_TOL = 1e-12
_TRACE_TOL = 1e-12
_PSD_TOL = 1e-12
_BRANCH_EPS = 1e-12  # outcome branches lighter than this are not normalized
_CROSS_CHECK_TOL = 1e-12


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, Seed):
        return seed.generator()
    return Seed(int(seed)).generator()


def random_pure_state(d: int, seed) -> np.ndarray:
    """Normalized complex d-vector from i.i.d. Gaussian amplitudes."""
    if d < 2:
        raise ValueError("d must be >= 2")
    rng = _as_rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def make_depolarized(psi: np.ndarray, delta: float) -> np.ndarray:
    """Density matrix (1 - delta)|psi><psi| + delta I/d."""
    if not (0.0 <= delta <= 1.0):
        raise ValueError(f"delta must lie in [0, 1], got {delta}")
    psi = np.asarray(psi, dtype=complex)
    d = psi.shape[0]
    return (1.0 - delta) * np.outer(psi, psi.conj()) + delta * np.eye(d) / d


def validate_density_matrix(rho: np.ndarray, name: str = "state") -> int:
    """Check Hermiticity, unit trace, and positivity; return the dimension."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    d = rho.shape[0]
    if np.abs(rho - rho.conj().T).max() > _HERMITIAN_TOL:
        raise ValueError(f"{name} is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > _TRACE_TOL or abs(np.trace(rho).imag) > _TRACE_TOL:
        raise ValueError(f"{name} does not have unit trace")
    if np.linalg.eigvalsh(rho).min() < -_PSD_TOL:
        raise ValueError(f"{name} has a negative eigenvalue")
    return d


def swap_operator(d: int) -> np.ndarray:
    """The d^2 x d^2 permutation matrix S |i>|j> = |j>|i>."""
    s = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            s[j * d + i, i * d + j] = 1.0
    return s


def _partial_trace_second(m: np.ndarray, d: int) -> np.ndarray:
    return np.einsum("ijkj->ik", m.reshape(d, d, d, d))


@dataclass
class SwapTestResult:
    """Both outcome branches of one swap test.

    p0/p1 are computed as traces of the projected joint state; omega0 and
    omega1 are the normalized kept registers (None when the branch weight
    is below 1e-12 and normalizing would be meaningless).
    """

    p0: float
    p1: float
    omega0: np.ndarray | None
    omega1: np.ndarray | None


def swap_test_apply(rho: np.ndarray, sigma: np.ndarray) -> SwapTestResult:
    """Apply the swap test to rho (x) sigma by explicit projection.

    The keep probability is computed twice, as (1 + Tr(rho sigma))/2 and
    as the trace of the symmetric projection of the joint state; a
    disagreement beyond 1e-12 raises, since it would mean the dense
    algebra itself is inconsistent.
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    d = validate_density_matrix(rho, "rho")
    d2 = validate_density_matrix(sigma, "sigma")
    if d != d2:
        raise ValueError(f"dimension mismatch: {d} vs {d2}")
    if d > MAX_DIM:
        raise ValueError(f"dense oracle is capped at d <= {MAX_DIM}, got {d}")

    p0_formula = (1.0 + np.trace(rho @ sigma).real) / 2.0

    joint = np.kron(rho, sigma)
    s = swap_operator(d)
    eye = np.eye(d * d)
    branches = []
    probs = []
    for sign in (+1.0, -1.0):
        proj = (eye + sign * s) / 2.0
        sub = proj @ joint @ proj
        p = np.trace(sub).real
        probs.append(p)
        if p > _BRANCH_EPS:
            branches.append(_partial_trace_second(sub, d) / p)
        else:
            branches.append(None)
    p0, p1 = probs

    if abs(p0 - p0_formula) > _CROSS_CHECK_TOL:
        raise AssertionError(
            f"swap-test probability cross-check failed: {p0} vs {p0_formula}"
        )
    return SwapTestResult(p0=p0, p1=p1, omega0=branches[0], omega1=branches[1])


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the sum of absolute eigenvalues of the Hermitian difference."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return 0.5 * np.abs(np.linalg.eigvalsh(a - b)).sum()
