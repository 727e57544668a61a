"""Shared domain types and numeric conventions.

Everything in this package works on states of the form

    rho(delta) = (1 - delta) |psi><psi| + delta * I/d,

which are fully described by the error parameter ``delta`` and the qudit
dimension ``d``; the underlying pure state |psi> never needs to be
represented except inside the dense validation oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Dimension",
    "INFINITE",
    "as_dimension",
    "ErrorParam",
    "DepolarizedState",
    "Seed",
    "fidelity_of_output",
]


@dataclass(frozen=True)
class Dimension:
    """Qudit dimension: a finite integer d >= 2, or the d -> infinity limit.

    The infinite variant is a genuine limiting recurrence of its own (the
    analytic maps have well-defined d -> infinity forms), not a sentinel.
    It is accepted only by analytic operations; the dense oracle and the
    streaming simulator require a finite dimension.
    """

    d: int | None = None  # None encodes the infinite limit

    def __post_init__(self):
        if self.d is not None:
            if not isinstance(self.d, int) or isinstance(self.d, bool):
                raise TypeError(f"finite dimension must be an int, got {self.d!r}")
            if self.d < 2:
                raise ValueError(f"dimension must be >= 2, got {self.d}")

    @classmethod
    def finite(cls, d: int) -> "Dimension":
        if d is None:
            raise ValueError("finite() requires an integer dimension")
        return cls(int(d))

    @classmethod
    def infinite(cls) -> "Dimension":
        return cls(None)

    @property
    def is_finite(self) -> bool:
        return self.d is not None

    @property
    def inv(self) -> float:
        """1/d, or 0.0 in the infinite limit.

        All analytic maps in this package depend on d only through 1/d,
        so this single accessor makes the finite and infinite code paths
        share one formula.
        """
        return 0.0 if self.d is None else 1.0 / self.d

    def require_finite(self, what: str = "this operation") -> int:
        if self.d is None:
            raise ValueError(f"{what} requires a finite dimension")
        return self.d

    def __str__(self) -> str:
        return "inf" if self.d is None else str(self.d)


INFINITE = Dimension(None)


def as_dimension(dim) -> Dimension:
    """Coerce ints, math.inf, and the tokens 'inf'/'infinite' to Dimension."""
    if isinstance(dim, Dimension):
        return dim
    if isinstance(dim, str):
        if dim.strip().lower() in ("inf", "infinite", "infinity"):
            return INFINITE
        return Dimension.finite(int(dim))
    if isinstance(dim, float):
        if math.isinf(dim):
            return INFINITE
        if not dim.is_integer():
            raise ValueError(f"dimension must be an integer or infinite, got {dim}")
        return Dimension.finite(int(dim))
    if dim is None:
        return INFINITE
    return Dimension.finite(int(dim))


@dataclass(frozen=True)
class ErrorParam:
    """Depolarization weight delta in [0, 1].

    kappa = 1 - delta is an accessor, not independent state.  Code that
    needs full relative precision in kappa near delta = 1 should use the
    kappa-native update path in the recurrence module rather than forming
    1 - delta here.
    """

    delta: float

    def __post_init__(self):
        if not (0.0 <= self.delta <= 1.0):
            # Out-of-range inputs are rejected, never clamped silently.
            raise ValueError(f"error parameter must lie in [0, 1], got {self.delta}")

    @property
    def kappa(self) -> float:
        return 1.0 - self.delta

    @classmethod
    def from_kappa(cls, kappa: float) -> "ErrorParam":
        if not (0.0 <= kappa <= 1.0):
            raise ValueError(f"kappa must lie in [0, 1], got {kappa}")
        return cls(1.0 - kappa)


@dataclass(frozen=True)
class DepolarizedState:
    """Parametric description of rho(delta) on a finite-dimensional qudit."""

    delta: ErrorParam
    dim: Dimension

    def __post_init__(self):
        self.dim.require_finite("DepolarizedState")

    @classmethod
    def create(cls, delta: float, d: int) -> "DepolarizedState":
        return cls(ErrorParam(delta), Dimension.finite(d))

    @property
    def fidelity(self) -> float:
        return fidelity_of_output(self.delta.delta, self.dim)


_UINT64_MAX = 2**64 - 1


@dataclass(frozen=True)
class Seed:
    """Reproducible PRNG stream identity: (root_seed, stream_index).

    Identical pairs reproduce identical Monte Carlo runs bit-for-bit on
    any machine.  Streams with distinct indices are statistically
    independent (numpy SeedSequence spawn keys).
    """

    root_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not (0 <= self.root_seed <= _UINT64_MAX):
            raise ValueError("root_seed must be a 64-bit unsigned integer")
        if self.stream_index < 0:
            raise ValueError("stream_index must be non-negative")

    def sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.root_seed, spawn_key=(self.stream_index,))

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.sequence()))

    def child(self, index: int) -> "np.random.SeedSequence":
        """Sub-stream for run `index` of a batch driven by this seed."""
        return np.random.SeedSequence(
            self.root_seed, spawn_key=(self.stream_index, index)
        )

    def child_generator(self, index: int) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.child(index)))


def fidelity_of_output(delta: float, dim) -> float:
    """Fidelity of rho(delta) with the target pure state: 1 - (1 - 1/d) delta."""
    dim = as_dimension(dim)
    dim.require_finite("fidelity_of_output")
    if not (0.0 <= delta <= 1.0):
        raise ValueError(f"delta must lie in [0, 1], got {delta}")
    return 1.0 - (1.0 - dim.inv) * delta
