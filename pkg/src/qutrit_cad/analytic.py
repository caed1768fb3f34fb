"""
Closed-form output states for the class-1 initial state ``a|00> + b|11> + c|22>``.

These are transcriptions of published element lists and serve as an oracle
for the Kraus pipelines. Only class 1 has closed forms; class 2 is handled
numerically.

Element keys use the 1-based labels of the published lists, ``k = 3*i + j + 1``
for the ket ``|ij>``:

====  ====  ====  ====  ====  ====  ====  ====  ====
  1     2     3     4     5     6     7     8     9
|00>  |01>  |02>  |10>  |11>  |12>  |20>  |21>  |22>
====  ====  ====  ====  ====  ====  ====  ====  ====

Corrections applied while transcribing:

* the population of ``|00>`` gains ``+mu*d`` from correlated decay (printed
  with a minus sign, which breaks unit trace);
* the published lists attach ``p_r`` to level 1 and ``q_r`` to level 2, the
  opposite of :func:`qutrit_cad.protection.qmr_operator`. Below, ``s1`` and
  ``s2`` are the squared reversal factors on levels 1 and 2 of that operator,
  ``s1 = 1 - q_r`` and ``s2 = 1 - p_r``;
* in the EAM normalization the correlated-branch weight of ``|11>`` is
  ``mu*(1 - d1)`` (printed without the bar), likewise for ``|22>``.
"""

from __future__ import annotations

import math

import numpy as np

from .channels import ChannelParams
from .errors import ZeroProbability
from .protection import ZERO_PROBABILITY_TOL, ProtectionParams
from .states import StateAmplitudes

BASIS_LABELS = {3 * i + j + 1: f"|{i}{j}>" for i in range(3) for j in range(3)}


def _assemble(elements: dict[tuple[int, int], complex]) -> np.ndarray:
    """Fill a 9x9 matrix from 1-based entries, completing the lower triangle by conjugation."""
    rho = np.zeros((9, 9), dtype=np.complex128)
    for (k, l), value in elements.items():
        rho[k - 1, l - 1] = value
        if k != l:
            rho[l - 1, k - 1] = np.conj(value)
    return rho


def analytic_rho1_cad(amps: StateAmplitudes, ch: ChannelParams) -> np.ndarray:
    a, b, c = amps.alpha, amps.beta, amps.gamma
    b2, c2 = abs(b) ** 2, abs(c) ** 2
    d1, d2, mu = ch.d1, ch.d2, ch.mu
    mub, d1b, d2b = 1 - mu, 1 - d1, 1 - d2

    decay_22 = b2 * mub * d1b * d1
    decay_33 = c2 * mub * d2b * d2
    return _assemble(
        {
            (1, 1): a**2 + b2 * (mub * d1**2 + mu * d1) + c2 * (mub * d2**2 + mu * d2),
            (1, 5): a * b.conjugate() * (mub * d1b + mu * math.sqrt(d1b)),
            (1, 9): a * c.conjugate() * (mub * d2b + mu * math.sqrt(d2b)),
            (2, 2): decay_22,
            (4, 4): decay_22,
            (3, 3): decay_33,
            (7, 7): decay_33,
            (5, 5): b2 * (mub * d1b**2 + mu * d1b),
            (5, 9): b * c.conjugate() * (mub * d1b * d2b + mu * math.sqrt(d1b * d2b)),
            (9, 9): c2 * (mub * d2b**2 + mu * d2b),
        }
    )


def wm_success_probability(
    amps: StateAmplitudes, prot: ProtectionParams, ch: ChannelParams
) -> float:
    a, b2, c2 = amps.alpha, abs(amps.beta) ** 2, abs(amps.gamma) ** 2
    d1, d2, mu = ch.d1, ch.d2, ch.mu
    mub = 1 - mu
    pb, qb = 1 - prot.p, 1 - prot.q
    s1, s2 = 1 - prot.q_r, 1 - prot.p_r
    u1, u2 = 1 - s2, 1 - s1
    return (
        a**2 * s1**2 * s2**2
        + b2 * pb**2 * s1**2
        * (1 + mub * d1**2 * u1**2 - 2 * mub * d1 * u1 - mu * d1 * (2 * u1 - u1**2))
        + c2 * qb**2 * s2**2
        * (1 + mub * d2**2 * u2**2 - 2 * mub * d2 * u2 - mu * d2 * (2 * u2 - u2**2))
    )


def analytic_rho1_wm(
    amps: StateAmplitudes, prot: ProtectionParams, ch: ChannelParams
) -> tuple[np.ndarray, float]:
    """Normalized state after WM, CAD and QMR, and the success probability."""
    a, b, c = amps.alpha, amps.beta, amps.gamma
    b2, c2 = abs(b) ** 2, abs(c) ** 2
    d1, d2, mu = ch.d1, ch.d2, ch.mu
    mub, d1b, d2b = 1 - mu, 1 - d1, 1 - d2
    pb, qb = 1 - prot.p, 1 - prot.q
    s1, s2 = 1 - prot.q_r, 1 - prot.p_r

    norm = wm_success_probability(amps, prot, ch)
    if norm < ZERO_PROBABILITY_TOL:
        raise ZeroProbability(f"success probability {norm:.3e}")

    decay_22 = b2 * mub * d1b * d1 * pb**2 * s1**2 * s2
    decay_33 = c2 * mub * d2b * d2 * s1 * s2**2 * qb**2
    rho = _assemble(
        {
            (1, 1): (a**2 + b2 * (mub * d1**2 + mu * d1) * pb**2
                     + c2 * (mub * d2**2 + mu * d2) * qb**2) * s1**2 * s2**2,
            (1, 5): a * b.conjugate() * (mub * d1b + mu * math.sqrt(d1b)) * pb * s1**2 * s2,
            (1, 9): a * c.conjugate() * (mub * d2b + mu * math.sqrt(d2b)) * s1 * qb * s2**2,
            (2, 2): decay_22,
            (4, 4): decay_22,
            (3, 3): decay_33,
            (7, 7): decay_33,
            (5, 5): b2 * (mub * d1b**2 + mu * d1b) * pb**2 * s1**2,
            (5, 9): b * c.conjugate() * (mub * d1b * d2b + mu * math.sqrt(d1b * d2b))
                    * pb * qb * s1 * s2,
            (9, 9): c2 * (mub * d2b**2 + mu * d2b) * s2**2 * qb**2,
        }
    )
    return rho / norm, norm


def eam_branch_norms(amps: StateAmplitudes, ch: ChannelParams) -> tuple[float, float]:
    """No-click weights ``(G1, G2)`` of the uncorrelated and correlated branches."""
    a2, b2, c2 = amps.alpha**2, abs(amps.beta) ** 2, abs(amps.gamma) ** 2
    d1b, d2b = 1 - ch.d1, 1 - ch.d2
    return a2 + b2 * d1b**2 + c2 * d2b**2, a2 + b2 * d1b + c2 * d2b


def _eam_weights(amps, ch, branch_normalized):
    if branch_normalized:
        g1, g2 = eam_branch_norms(amps, ch)
        if min(g1, g2) < ZERO_PROBABILITY_TOL:
            raise ZeroProbability("a no-click branch has zero weight")
        return g1, g2
    return 1.0, 1.0


def eam_success_probability(
    amps: StateAmplitudes,
    ch: ChannelParams,
    prot: ProtectionParams,
    *,
    branch_normalized: bool = False,
) -> float:
    a2, b2, c2 = amps.alpha**2, abs(amps.beta) ** 2, abs(amps.gamma) ** 2
    mu, mub = ch.mu, 1 - ch.mu
    d1b, d2b = 1 - ch.d1, 1 - ch.d2
    s1, s2 = 1 - prot.q_r, 1 - prot.p_r
    g1, g2 = _eam_weights(amps, ch, branch_normalized)
    return (
        s1**2 * s2**2 * (mu * g1 + mub * g2) * a2
        + s1**2 * (mu * d1b * g1 + mub * d1b**2 * g2) * b2
        + s2**2 * (mu * d2b * g1 + mub * d2b**2 * g2) * c2
    ) / (g1 * g2)


def analytic_rho1_eam(
    amps: StateAmplitudes,
    ch: ChannelParams,
    prot: ProtectionParams,
    *,
    branch_normalized: bool = False,
) -> tuple[np.ndarray, float]:
    """
    Normalized state after EAM post-selection and QMR, and its normalization.

    With ``branch_normalized=False`` the branches carry weights ``1 - mu`` and
    ``mu``. With ``True`` they carry ``(1 - mu)/G1`` and ``mu/G2`` as in the
    published list.
    """
    a, b, c = amps.alpha, amps.beta, amps.gamma
    b2, c2 = abs(b) ** 2, abs(c) ** 2
    mu, mub = ch.mu, 1 - ch.mu
    d1b, d2b = 1 - ch.d1, 1 - ch.d2
    s1, s2 = 1 - prot.q_r, 1 - prot.p_r
    g1, g2 = _eam_weights(amps, ch, branch_normalized)
    w1, w2 = mub / g1, mu / g2

    norm = eam_success_probability(amps, ch, prot, branch_normalized=branch_normalized)
    if norm < ZERO_PROBABILITY_TOL:
        raise ZeroProbability(f"success probability {norm:.3e}")

    rho = _assemble(
        {
            (1, 1): s1**2 * s2**2 * (w1 + w2) * a**2,
            (1, 5): s1**2 * s2 * (w1 * d1b + w2 * math.sqrt(d1b)) * a * b.conjugate(),
            (1, 9): s1 * s2**2 * (w1 * d2b + w2 * math.sqrt(d2b)) * a * c.conjugate(),
            (5, 5): s1**2 * (w1 * d1b**2 + w2 * d1b) * b2,
            (5, 9): s1 * s2 * (w1 * d1b * d2b + w2 * math.sqrt(d1b * d2b)) * b * c.conjugate(),
            (9, 9): s2**2 * (w1 * d2b**2 + w2 * d2b) * c2,
        }
    )
    return rho / norm, norm
