"""Initial two-qutrit states, density-matrix checks, and negativity."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import NotNormalized

NORM_TOL = 1e-12
DENSITY_TOL = 1e-10


class StateClass(enum.Enum):
    """The two entangled families.

    ``CLASS1``: ``a|00> + b|11> + c|22>``; ``CLASS2``: ``a|02> + b|20> + c|11>``.
    """

    CLASS1 = "class1"
    CLASS2 = "class2"


# basis indices (3*i + j) carrying alpha, beta, gamma
_KETS = {
    StateClass.CLASS1: (0, 4, 8),
    StateClass.CLASS2: (2, 6, 4),
}


@dataclass(frozen=True)
class StateAmplitudes:
    alpha: float
    beta: complex
    gamma: complex

    def __post_init__(self):
        if self.alpha < 0:
            raise NotNormalized(f"alpha must be real and >= 0, got {self.alpha}")
        norm = self.alpha**2 + abs(self.beta) ** 2 + abs(self.gamma) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"alpha^2 + |beta|^2 + |gamma|^2 = {norm!r}, expected 1")

    @classmethod
    def balanced(cls) -> StateAmplitudes:
        a = 1.0 / math.sqrt(3.0)
        return cls(a, complex(a), complex(a))

    @classmethod
    def normalized(cls, alpha: float, beta: complex, gamma: complex) -> StateAmplitudes:
        """Rescale arbitrary (non-zero) amplitudes to unit norm."""
        norm = math.sqrt(alpha**2 + abs(beta) ** 2 + abs(gamma) ** 2)
        if norm == 0:
            raise NotNormalized("all amplitudes are zero")
        return cls(alpha / norm, complex(beta) / norm, complex(gamma) / norm)


def make_ket(state_class: StateClass, amps: StateAmplitudes | None = None) -> np.ndarray:
    amps = amps or StateAmplitudes.balanced()
    ket = np.zeros(9, dtype=np.complex128)
    for idx, amp in zip(_KETS[StateClass(state_class)], (amps.alpha, amps.beta, amps.gamma)):
        ket[idx] = amp
    return ket


def make_state(state_class: StateClass, amps: StateAmplitudes | None = None) -> np.ndarray:
    """Rank-one 9x9 density matrix ``|psi><psi|`` (balanced amplitudes by default)."""
    ket = make_ket(state_class, amps)
    return np.outer(ket, ket.conj())


@dataclass(frozen=True)
class DensityReport:
    hermitian: bool
    unit_trace: bool
    positive: bool

    @property
    def ok(self) -> bool:
        return self.hermitian and self.unit_trace and self.positive

    def failures(self) -> list[str]:
        return [name for name in ("hermitian", "unit_trace", "positive") if not getattr(self, name)]


def validate_density(rho, tol: float = DENSITY_TOL) -> DensityReport:
    """Check Hermiticity, unit trace and positivity; never raises on a bad state."""
    m = linalg.as_matrix(rho)
    hermitian = linalg.hermiticity_error(m) <= tol
    unit_trace = abs(np.trace(m) - 1.0) <= tol
    if hermitian:
        positive = bool(linalg.hermitian_eigenvalues(m)[0] > -tol)
    else:
        # eigenvalues of a non-Hermitian matrix are not a positivity test
        positive = False
    return DensityReport(hermitian, bool(unit_trace), positive)


def random_density_matrix(rng: np.random.Generator, dim: int = 9, rank: int | None = None) -> np.ndarray:
    """Random density matrix ``G G^H / tr(G G^H)`` from a complex Ginibre ``G``."""
    g = rng.normal(size=(dim, rank or dim)) + 1j * rng.normal(size=(dim, rank or dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def negativity(rho) -> float:
    """``(||rho^T_B||_1 - 1) / 2`` for a two-qutrit state."""
    pt = linalg.partial_transpose(rho, 3, 3)
    return max(0.0, (linalg.trace_norm(pt) - 1.0) / 2.0)
