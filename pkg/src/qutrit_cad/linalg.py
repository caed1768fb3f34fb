"""
Dense complex matrix kernel.

Matrices are square ``complex128`` numpy arrays. Two-qutrit operators use the
product basis ordering ``|ij> <-> 3*i + j``, so ``|00>, |01>, ..., |22>`` are
rows 0..8.

The Hermitian eigensolver is a cyclic Jacobi method with complex Givens
rotations. For the 3x3 and 9x9 problems here it converges in a handful of
sweeps and needs no balancing or shifting.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian

HERMITIAN_TOL = 1e-10
OFFDIAG_TOL = 1e-13
MAX_SWEEPS = 100
EIG_CLAMP = 1e-12


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a square, finite complex128 array (copying only if needed)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


def transition(i: int, j: int, dim: int = 3) -> np.ndarray:
    """The transition operator ``|i><j|``."""
    s = np.zeros((dim, dim), dtype=np.complex128)
    s[i, j] = 1.0
    return s


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry ``[i*nb + k, j*nb + l] = a[i, j] * b[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def hermiticity_error(a) -> float:
    """Largest ``|a[i, j] - conj(a[j, i])|``."""
    m = as_matrix(a)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)))


def _offdiag_norm(m: np.ndarray) -> float:
    # summed directly: ||m||^2 - ||diag||^2 cancels down to ~1e-8 and never converges
    off = m - np.diag(np.diagonal(m))
    return float(np.linalg.norm(off))


def hermitian_eigenvalues(
    a,
    *,
    tol: float = HERMITIAN_TOL,
    max_sweeps: int = MAX_SWEEPS,
) -> np.ndarray:
    """
    Eigenvalues of a Hermitian matrix, in ascending order.

    Each rotation first removes the phase of the pivot ``a[p, q]`` with a
    diagonal unitary, then applies a real Jacobi rotation to zero it. Sweeps
    stop once the off-diagonal Frobenius norm drops below
    ``OFFDIAG_TOL * max(1, ||a||_F)``.

    Raises
    ------
    NotHermitian
        If ``max|a - a^H| > tol``.
    NoConvergence
        If the sweep cap is reached first.
    """
    m = as_matrix(a)
    n = m.shape[0]
    if n == 0:
        return np.zeros(0)
    err = hermiticity_error(m)
    if err > tol:
        raise NotHermitian(f"max |a - a^H| = {err:.3e} exceeds {tol:.1e}")

    m = 0.5 * (m + m.conj().T)
    threshold = OFFDIAG_TOL * max(1.0, float(np.linalg.norm(m)))

    for _ in range(max_sweeps):
        if _offdiag_norm(m) < threshold:
            return np.sort(np.diagonal(m).real.copy())
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                app, aqq = m[p, p].real, m[q, q].real
                g = 100.0 * r
                if abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                    # below the rounding of both diagonal entries
                    m[p, q] = m[q, p] = 0.0
                    continue
                # componentwise: complex scalar division overflows on subnormal pivots
                phase = complex(apq.real / r, apq.imag / r)
                # D^H m D with D_qq = conj(phase) makes the pivot real and positive.
                m[:, q] *= phase.conjugate()
                m[q, :] *= phase

                h = aqq - app
                if abs(h) + g == abs(h):
                    t = r / h  # theta^2 would overflow; t ~ 1/(2 theta)
                else:
                    theta = 0.5 * h / r
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p = m[:, p].copy()
                col_q = m[:, q].copy()
                m[:, p] = c * col_p - s * col_q
                m[:, q] = s * col_p + c * col_q
                row_p = m[p, :].copy()
                row_q = m[q, :].copy()
                m[p, :] = c * row_p - s * row_q
                m[q, :] = s * row_p + c * row_q

                m[p, q] = m[q, p] = 0.0
                m[p, p] = m[p, p].real
                m[q, q] = m[q, q].real

    if _offdiag_norm(m) < threshold:
        return np.sort(np.diagonal(m).real.copy())
    raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")


def partial_transpose(rho, dim_a: int, dim_b: int) -> np.ndarray:
    """Transpose the second subsystem: ``out[(i,l),(k,j)] = rho[(i,j),(k,l)]``."""
    m = as_matrix(rho)
    if m.shape[0] != dim_a * dim_b:
        raise DimensionMismatch(
            f"matrix dimension {m.shape[0]} != {dim_a} x {dim_b}"
        )
    return (
        m.reshape(dim_a, dim_b, dim_a, dim_b)
        .transpose(0, 3, 2, 1)
        .reshape(dim_a * dim_b, dim_a * dim_b)
    )


def trace_norm(a) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix; ``|lambda| < 1e-12`` counts as 0."""
    w = hermitian_eigenvalues(a)
    w = np.where(np.abs(w) < EIG_CLAMP, 0.0, w)
    return float(np.sum(np.abs(w)))


def trace_distance(a, b) -> float:
    return 0.5 * trace_norm(as_matrix(a) - as_matrix(b))
