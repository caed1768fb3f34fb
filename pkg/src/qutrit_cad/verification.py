"""
Self-check suite behind ``qutrit-cad verify``.

Each check recomputes one property of the model from scratch and reports
pass/fail with the worst deviation seen.
"""

from __future__ import annotations

import cmath
import itertools
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analytic, channels, linalg, protection
from .channels import ChannelParams, RateParams
from .protection import ProtectionParams
from .states import (
    StateAmplitudes,
    StateClass,
    make_state,
    negativity,
    random_density_matrix,
)

SEED = 20240917


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    expected_failure: bool = False

    @property
    def status(self) -> str:
        if self.expected_failure:
            return "XPASS" if self.passed else "XFAIL"
        return "PASS" if self.passed else "FAIL"

    @property
    def ok(self) -> bool:
        """Pass, or a documented deviation that still deviates."""
        return self.passed != self.expected_failure


def _random_amps(rng: np.random.Generator) -> StateAmplitudes:
    mags = rng.uniform(0.05, 1.0, size=3)
    phases = rng.uniform(0.0, 2 * math.pi, size=2)
    return StateAmplitudes.normalized(
        mags[0], mags[1] * cmath.exp(1j * phases[0]), mags[2] * cmath.exp(1j * phases[1])
    )


def check_kraus_completeness(draws: int = 100) -> tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for d1, d2 in rng.uniform(size=(draws, 2)):
        for build in (channels.ad_kraus_single, channels.ad_kraus_pair, channels.fcad_kraus):
            worst = max(worst, build(d1, d2).completeness_error())
    return worst < 1e-12, f"max |sum K^H K - I| = {worst:.2e}"


def check_lindblad_equivalence(steps: int = 10_000) -> tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    rho1 = random_density_matrix(rng, 3)
    rho2 = random_density_matrix(rng, 9)
    worst = worst_entry = 0.0
    for gamma, t in itertools.product((0.5, 1.0, 2.0), (0.2, 1.0, 3.0)):
        d, _ = channels.damping_from_rates(RateParams(gamma, gamma, t))
        rhs1 = channels.tabulate_generator(
            lambda r: channels.lindblad_rhs_single(r, gamma, gamma), 3
        )
        rhs2 = channels.tabulate_generator(
            lambda r: channels.lindblad_rhs_fcad(r, gamma, gamma), 9
        )
        num1 = channels.integrate_rk4(rhs1, rho1, t, steps)
        num2 = channels.integrate_rk4(rhs2, rho2, t, steps)
        exact1 = channels.ad_kraus_single(d, d).apply(rho1)
        exact2 = channels.fcad_kraus(d, d).apply(rho2)
        worst = max(worst, linalg.trace_distance(num1, exact1), linalg.trace_distance(num2, exact2))
        worst_entry = max(
            worst_entry, float(np.max(np.abs(num1 - exact1))), float(np.max(np.abs(num2 - exact2)))
        )
    # the trace norm clamps |eigenvalue| < 1e-12, so the entrywise gap is reported as well
    return worst < 1e-8, f"max trace distance = {worst:.2e}, max |entry diff| = {worst_entry:.2e}"


def check_analytic_oracle(tuples: int = 50) -> tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    worst_state = worst_prob = 0.0
    for _ in range(tuples):
        amps = _random_amps(rng)
        ch = ChannelParams(*rng.uniform(size=3))
        prot = ProtectionParams(*rng.uniform(0.0, 0.95, size=4))
        rho0 = make_state(StateClass.CLASS1, amps)

        worst_state = max(
            worst_state,
            float(np.max(np.abs(analytic.analytic_rho1_cad(amps, ch) - channels.cad_apply(rho0, ch)))),
        )
        state, prob = analytic.analytic_rho1_wm(amps, prot, ch)
        out = protection.wm_qmr_pipeline(rho0, prot, ch)
        worst_state = max(worst_state, float(np.max(np.abs(state - out.state))))
        worst_prob = max(worst_prob, abs(prob - out.probability))

        state, prob = analytic.analytic_rho1_eam(amps, ch, prot)
        out = protection.eam_qmr_pipeline(rho0, prot, ch)
        worst_state = max(worst_state, float(np.max(np.abs(state - out.state))))
        worst_prob = max(worst_prob, abs(prob - out.probability))
    ok = worst_state < 1e-12 and worst_prob < 1e-12
    return ok, f"max |entry diff| = {worst_state:.2e}, max |P diff| = {worst_prob:.2e}"


def check_full_damping_endpoints() -> tuple[bool, str]:
    n1 = [
        negativity(channels.cad_apply(make_state(StateClass.CLASS1), ChannelParams(1, 1, mu)))
        for mu in (0.0, 0.5, 1.0)
    ]
    n2 = negativity(channels.cad_apply(make_state(StateClass.CLASS2), ChannelParams(1, 1, 1)))
    target = (math.sqrt(5) - 1) / 6
    ok = max(n1) < 1e-9 and abs(n2 - target) < 1e-9
    return ok, f"class1 max N = {max(n1):.2e}; class2 N = {n2:.9f} (expect {target:.9f})"


def _uncorrelated_curves() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ds = np.linspace(0, 1, 11)
    curves = [
        np.array([negativity(channels.cad_apply(make_state(cls), ChannelParams(d, d, 0.0))) for d in ds])
        for cls in (StateClass.CLASS1, StateClass.CLASS2)
    ]
    return ds, curves[0], curves[1]


def check_uncorrelated_class_equality() -> tuple[bool, str]:
    _, n1, n2 = _uncorrelated_curves()
    worst = float(np.max(np.abs(n1 - n2)))
    return worst < 1e-10, f"max |N1 - N2| = {worst:.2e}"


def check_uncorrelated_class_decay() -> tuple[bool, str]:
    """What does hold at mu = 0: same endpoints, monotone decay, no sudden death."""
    ds, n1, n2 = _uncorrelated_curves()
    interior = slice(0, -1)
    ok = (
        abs(n1[0] - n2[0]) < 1e-10
        and abs(n1[-1] - n2[-1]) < 1e-10
        and bool(np.all(np.diff(n1) < 0) and np.all(np.diff(n2) < 0))
        and bool(np.all(n1[interior] > 0) and np.all(n2[interior] > 0))
        and float(np.max(np.abs(n1 - (1 - ds) ** 2))) < 1e-10
    )
    return ok, (
        f"N1 = (1-d)^2 to {float(np.max(np.abs(n1 - (1 - ds) ** 2))):.1e}; "
        f"N2 at d=0.9 is {n2[-2]:.3e}; both strictly decreasing to 0"
    )


def check_eam_recovery() -> tuple[bool, str]:
    rho0 = make_state(StateClass.CLASS2)
    worst_state = worst_neg = 0.0
    for d, mu in itertools.product((0.2, 0.5, 0.8), (0.0, 0.6, 1.0)):
        out = protection.eam_optimal_outcome(rho0, ChannelParams(d, d, mu))
        worst_state = max(worst_state, float(np.max(np.abs(out.state - rho0))))
        worst_neg = max(worst_neg, abs(negativity(out.state) - 1.0))
    ok = worst_state < 1e-10 and worst_neg < 1e-9
    return ok, f"max |rho - rho0| = {worst_state:.2e}, max |N - 1| = {worst_neg:.2e}"


def check_scheme_ordering() -> tuple[bool, str]:
    worst_n = worst_p = math.inf
    for cls in StateClass:
        rho0 = make_state(cls)
        for d, mu in itertools.product(np.linspace(0.1, 0.9, 9), (0.0, 0.3, 0.6, 1.0)):
            ch = ChannelParams(d, d, mu)
            eam = protection.eam_optimal_outcome(rho0, ch)
            wm = protection.wm_optimal_outcome(rho0, 0.9, 0.9, ch)
            worst_n = min(worst_n, negativity(eam.state) - negativity(wm.state))
            worst_p = min(worst_p, eam.probability - wm.probability)
    ok = worst_n >= -1e-9 and worst_p >= -1e-9
    return ok, f"min N_EAM - N_WM = {worst_n:.3e}, min P_EAM - P_WM = {worst_p:.3e}"


def check_wm_monotonicity() -> tuple[bool, str]:
    rho0 = make_state(StateClass.CLASS1)
    ch = ChannelParams(0.5, 0.5, 0.6)
    negs, probs = [], []
    for p in (0.0, 0.3, 0.6, 0.9):
        out = protection.wm_optimal_outcome(rho0, p, p, ch)
        negs.append(negativity(out.state))
        probs.append(out.probability)
    ok = all(b >= a for a, b in zip(negs, negs[1:])) and all(
        b <= a for a, b in zip(probs, probs[1:])
    )
    return ok, "N = " + ", ".join(f"{n:.4f}" for n in negs) + "; P = " + ", ".join(
        f"{p:.3e}" for p in probs
    )


def check_no_entanglement_gain() -> tuple[bool, str]:
    grid = (0.0, 0.25, 0.5, 0.75, 0.95)
    worst = -math.inf
    for cls in StateClass:
        rho0 = make_state(cls)
        n0 = negativity(rho0)
        for d, mu, p in itertools.product(grid, grid, grid):
            ch = ChannelParams(d, d, mu)
            for out in (
                protection.wm_optimal_outcome(rho0, p, p, ch),
                protection.eam_optimal_outcome(rho0, ch),
            ):
                worst = max(worst, negativity(out.state) - n0)
    return worst <= 1e-9, f"max N - N0 = {worst:.2e}"


def check_flip_decomposition(draws: int = 100) -> tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for p_r, q_r in rng.uniform(size=(draws, 2)):
        diff = protection.qmr_via_flips(p_r, q_r) - protection.qmr_operator(p_r, q_r)
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst < 1e-14, f"max |flip form - E_R| = {worst:.2e}"


def check_sweep_determinism() -> tuple[bool, str]:
    from .cli.config import parse_config
    from .cli.output import records_to_csv
    from .cli.sweep import run_sweep

    cfg = parse_config({"scheme": "compare", "grid": {
        "d": {"min": 0, "max": 1, "steps": 6}, "mu": {"min": 0, "max": 1, "steps": 3}, "p": 0.9,
    }})
    first, second = records_to_csv(run_sweep(cfg)), records_to_csv(run_sweep(cfg))
    return first == second, f"{first.count(chr(10)) - 1} rows, identical={first == second}"


CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "kraus-completeness": check_kraus_completeness,
    "lindblad-kraus-equivalence": check_lindblad_equivalence,
    "analytic-oracle": check_analytic_oracle,
    "full-damping-endpoints": check_full_damping_endpoints,
    "uncorrelated-class-equality": check_uncorrelated_class_equality,
    "uncorrelated-class-decay": check_uncorrelated_class_decay,
    "eam-perfect-recovery": check_eam_recovery,
    "scheme-ordering": check_scheme_ordering,
    "wm-monotonicity": check_wm_monotonicity,
    "no-entanglement-gain": check_no_entanglement_gain,
    "flip-decomposition": check_flip_decomposition,
    "sweep-determinism": check_sweep_determinism,
}


# Claims that the model itself contradicts. They still run; an XPASS counts as a failure.
KNOWN_DEVIATIONS = {
    "uncorrelated-class-equality": (
        "exact equality of the two class curves at mu = 0 does not hold; "
        "they agree only at d = 0 and d = 1"
    ),
}


def run_checks(names: list[str] | None = None) -> list[CheckResult]:
    results = []
    for name in names or list(CHECKS):
        start = time.perf_counter()
        xfail = name in KNOWN_DEVIATIONS
        try:
            passed, detail = CHECKS[name]()
        except Exception as exc:  # a crashing check is a failed check, never an expected one
            passed, detail, xfail = False, f"{type(exc).__name__}: {exc}", False
        if xfail:
            detail = f"{detail} [known deviation: {KNOWN_DEVIATIONS[name]}]"
        results.append(CheckResult(name, passed, detail, time.perf_counter() - start, xfail))
    return results
