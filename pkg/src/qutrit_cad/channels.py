"""
Amplitude-damping channels for V-type qutrits.

Single-qutrit damping sends |1> -> |0> and |2> -> |0> with strengths
``d1 = 1 - exp(-gamma1 t)`` and ``d2 = 1 - exp(-gamma2 t)``. Two qutrits either
decay independently (tensor products of the single-qutrit Kraus operators) or
fully correlated, where only |11> -> |00> and |22> -> |00> occur. The CAD map
mixes the two with weight ``mu`` on the correlated part.

The Lindblad generators and the RK4 integrator exist to check the Kraus forms
independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import linalg
from .errors import OutOfRange

COMPLETENESS_TOL = 1e-12
RK4_STEPS_PER_UNIT = 10_000


def check_unit_interval(**values: float) -> None:
    for name, v in values.items():
        if not (0.0 <= v <= 1.0):
            raise OutOfRange(f"{name}={v!r} outside [0, 1]")


@dataclass(frozen=True)
class ChannelParams:
    d1: float
    d2: float
    mu: float

    def __post_init__(self):
        check_unit_interval(d1=self.d1, d2=self.d2, mu=self.mu)

    @classmethod
    def symmetric(cls, d: float, mu: float) -> ChannelParams:
        return cls(d, d, mu)


@dataclass(frozen=True)
class RateParams:
    gamma1: float
    gamma2: float
    t: float

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "t"):
            if getattr(self, name) < 0:
                raise OutOfRange(f"{name} must be non-negative")


@dataclass(frozen=True)
class KrausSet:
    """Ordered Kraus operators of one channel; completeness is checked on construction."""

    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(linalg.as_matrix(k) for k in self.operators)
        if not ops:
            raise ValueError("empty Kraus set")
        dims = {k.shape[0] for k in ops}
        if len(dims) != 1:
            raise ValueError(f"mixed operator dimensions {sorted(dims)}")
        object.__setattr__(self, "operators", ops)
        err = self.completeness_error()
        if err > COMPLETENESS_TOL:
            raise ValueError(f"sum K^H K deviates from identity by {err:.3e}")

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def __len__(self) -> int:
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)

    def __getitem__(self, i: int) -> np.ndarray:
        return self.operators[i]

    def completeness_error(self) -> float:
        total = sum(k.conj().T @ k for k in self.operators)
        return float(np.max(np.abs(total - np.eye(self.operators[0].shape[0]))))

    def apply(self, rho) -> np.ndarray:
        rho = linalg.as_matrix(rho)
        return sum(k @ rho @ k.conj().T for k in self.operators)


def damping_from_rates(r: RateParams) -> tuple[float, float]:
    # -expm1(-x) == 1 - exp(-x) without cancellation at small x
    return -math.expm1(-r.gamma1 * r.t), -math.expm1(-r.gamma2 * r.t)


def ad_kraus_single(d1: float, d2: float) -> KrausSet:
    check_unit_interval(d1=d1, d2=d2)
    e0 = np.diag([1.0, math.sqrt(1.0 - d1), math.sqrt(1.0 - d2)]).astype(np.complex128)
    e1 = math.sqrt(d1) * linalg.transition(0, 1)
    e2 = math.sqrt(d2) * linalg.transition(0, 2)
    return KrausSet((e0, e1, e2))


def ad_kraus_pair(d1: float, d2: float) -> KrausSet:
    """``E_ij = E_i (x) E_j``, ordered ``E_00, E_01, ..., E_22``."""
    single = ad_kraus_single(d1, d2)
    return KrausSet(tuple(linalg.kron(a, b) for a in single for b in single))


def fcad_kraus(d1: float, d2: float) -> KrausSet:
    """Fully correlated damping: ``A_00, A_11, A_22``."""
    check_unit_interval(d1=d1, d2=d2)
    a00 = linalg.identity(9)
    a00[4, 4] = math.sqrt(1.0 - d1)
    a00[8, 8] = math.sqrt(1.0 - d2)
    a11 = math.sqrt(d1) * linalg.transition(0, 4, 9)
    a22 = math.sqrt(d2) * linalg.transition(0, 8, 9)
    return KrausSet((a00, a11, a22))


def cad_apply(rho, params: ChannelParams) -> np.ndarray:
    """``(1 - mu) * AD(x)AD[rho] + mu * FCAD[rho]``."""
    rho = linalg.as_matrix(rho)
    out = np.zeros_like(rho)
    if params.mu < 1.0:
        out += (1.0 - params.mu) * ad_kraus_pair(params.d1, params.d2).apply(rho)
    if params.mu > 0.0:
        out += params.mu * fcad_kraus(params.d1, params.d2).apply(rho)
    return out


def _dissipator(rho: np.ndarray, lower: np.ndarray, number: np.ndarray) -> np.ndarray:
    # (2 L rho L^H - N rho - rho N) / 2 with N = L^H L
    return lower @ rho @ lower.conj().T - 0.5 * (number @ rho + rho @ number)


_S01, _S02 = linalg.transition(0, 1), linalg.transition(0, 2)
_S11, _S22 = linalg.transition(1, 1), linalg.transition(2, 2)
_S01x2, _S02x2 = linalg.kron(_S01, _S01), linalg.kron(_S02, _S02)
_S11x2, _S22x2 = linalg.kron(_S11, _S11), linalg.kron(_S22, _S22)


def lindblad_rhs_single(rho, gamma1: float, gamma2: float) -> np.ndarray:
    rho = linalg.as_matrix(rho)
    return gamma1 * _dissipator(rho, _S01, _S11) + gamma2 * _dissipator(rho, _S02, _S22)


def lindblad_rhs_fcad(rho, gamma1: float, gamma2: float) -> np.ndarray:
    """Correlated generator built from ``sigma_ij (x) sigma_ij``."""
    rho = linalg.as_matrix(rho)
    return gamma1 * _dissipator(rho, _S01x2, _S11x2) + gamma2 * _dissipator(rho, _S02x2, _S22x2)


def tabulate_generator(rhs: Callable[[np.ndarray], np.ndarray], dim: int) -> Callable[[np.ndarray], np.ndarray]:
    """
    Same linear map as ``rhs``, evaluated as one ``dim^2 x dim^2`` matvec.

    The columns are ``rhs`` applied to the matrix units, so the result is
    exact for any linear generator; it just drops per-call Python overhead
    inside long RK4 runs.
    """
    sup = np.empty((dim * dim, dim * dim), dtype=np.complex128)
    unit = np.zeros((dim, dim), dtype=np.complex128)
    for k in range(dim * dim):
        unit.flat[k] = 1.0
        sup[:, k] = rhs(unit).ravel()
        unit.flat[k] = 0.0
    return lambda rho: (sup @ rho.ravel()).reshape(dim, dim)


def integrate_rk4(
    rhs: Callable[[np.ndarray], np.ndarray],
    rho0,
    t_final: float,
    steps: int,
) -> np.ndarray:
    """Fixed-step classical RK4, re-Hermitizing after every step."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    rho = linalg.as_matrix(rho0).copy()
    if t_final == 0:
        return rho
    h = t_final / steps
    for _ in range(steps):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * h * k1)
        k3 = rhs(rho + 0.5 * h * k2)
        k4 = rhs(rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = 0.5 * (rho + rho.conj().T)
    return rho


def default_rk4_steps(gamma_t: float) -> int:
    return max(1, math.ceil(RK4_STEPS_PER_UNIT * max(gamma_t, 1.0)))

