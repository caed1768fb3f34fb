"""Grid sweeps over damping, correlation and WM strength."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from ..channels import ChannelParams, cad_apply
from ..errors import ZeroProbability
from ..protection import (
    ProtectionParams,
    eam_qmr_pipeline,
    optimal_qmr_eam,
    optimal_qmr_wm,
    wm_qmr_pipeline,
)
from ..states import StateAmplitudes, StateClass, make_state, negativity
from .config import SweepConfig

CSV_FIELDS = (
    "state_class", "d1", "d2", "mu", "p", "q", "p_r", "q_r",
    "scheme", "negativity", "probability",
)


@dataclass(frozen=True)
class SweepRecord:
    """One evaluated grid point. ``None`` marks a field that does not apply or has no value."""

    state_class: str
    d1: float
    d2: float
    mu: float
    p: float | None
    q: float | None
    p_r: float | None
    q_r: float | None
    scheme: str
    negativity: float | None
    probability: float | None


@dataclass(frozen=True)
class _Point:
    state_class: StateClass
    amps: StateAmplitudes
    scheme: str
    d1: float
    d2: float
    mu: float
    p: float | None = None
    q: float | None = None
    p_r: float | None = None
    q_r: float | None = None


def evaluate_point(pt: _Point) -> SweepRecord:
    rho0 = make_state(pt.state_class, pt.amps)
    ch = ChannelParams(pt.d1, pt.d2, pt.mu)
    try:
        if pt.scheme == "none":
            out_state, prob = cad_apply(rho0, ch), 1.0
        else:
            prot = ProtectionParams(pt.p or 0.0, pt.q or 0.0, pt.p_r, pt.q_r)
            pipeline = wm_qmr_pipeline if pt.scheme == "wm" else eam_qmr_pipeline
            outcome = pipeline(rho0, prot, ch)
            out_state, prob = outcome.state, outcome.probability
        neg = negativity(out_state)
    except ZeroProbability:
        neg = prob = None
    return SweepRecord(
        pt.state_class.value, pt.d1, pt.d2, pt.mu, pt.p, pt.q, pt.p_r, pt.q_r,
        pt.scheme, neg, prob,
    )


def grid_points(cfg: SweepConfig) -> list[_Point]:
    """All evaluation points in emission order (d1, d2, mu, p; wm before eam)."""
    schemes = ("wm", "eam") if cfg.scheme == "compare" else (cfg.scheme,)
    uses_p = any(s == "wm" for s in schemes)
    d_pairs = (
        [(d, d) for d in cfg.d1.values()]
        if cfg.d2 is None
        else list(itertools.product(cfg.d1.values(), cfg.d2.values()))
    )
    p_values = cfg.p.values() if uses_p else [None]

    points = []
    for (d1, d2), mu, p in itertools.product(d_pairs, cfg.mu.values(), p_values):
        base = dict(state_class=cfg.state_class, amps=cfg.amplitudes, d1=d1, d2=d2, mu=mu)
        for scheme in schemes:
            if scheme == "none":
                points.append(_Point(scheme=scheme, **base))
            elif scheme == "wm":
                q = p if cfg.q_fixed is None else cfg.q_fixed
                p_r, q_r = cfg.qmr_fixed or optimal_qmr_wm(p, q, d1, d2)
                points.append(_Point(scheme=scheme, p=p, q=q, p_r=p_r, q_r=q_r, **base))
            else:
                p_r, q_r = cfg.qmr_fixed or optimal_qmr_eam(d1, d2)
                points.append(_Point(scheme=scheme, p_r=p_r, q_r=q_r, **base))
    return points


def run_sweep(cfg: SweepConfig, workers: int | None = None) -> list[SweepRecord]:
    """
    Evaluate every grid point of ``cfg``.

    Points are independent, so ``workers > 1`` farms them out to processes;
    ``Executor.map`` keeps the emission order fixed either way.
    """
    points = grid_points(cfg)
    workers = cfg.workers if workers is None else workers
    if workers <= 1 or len(points) < 2:
        return [evaluate_point(pt) for pt in points]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate_point, points, chunksize=max(1, len(points) // (4 * workers))))
