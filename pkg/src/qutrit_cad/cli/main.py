"""
Command-line front end.

    qutrit-cad evolve|sweep|compare|verify [--config PATH] [--out PATH] [--set key=value ...]

Exit codes: 0 success, 1 invalid configuration or failed verification,
2 runtime failure (I/O, or a sweep in which every point had zero success
probability).
"""

from __future__ import annotations

import argparse
import sys
from collections import defaultdict
from pathlib import Path

import numpy as np

from ..errors import IncompleteGrid, ParseError, ValidationError
from ..verification import run_checks
from .config import SweepConfig, parse_config
from .output import emit_csv, emit_svg_heatmap, format_number, records_to_csv
from .sweep import SweepRecord, evaluate_point, grid_points, run_sweep

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2


def _load_config(args) -> SweepConfig:
    text = "{}"
    if args.config:
        text = Path(args.config).read_text(encoding="utf-8")
    overrides = list(args.set or [])
    if args.command == "compare":
        overrides.append("scheme=compare")
    if args.jobs is not None:
        overrides.append(f"workers={args.jobs}")
    return parse_config(text, overrides)


def _heatmap_axes(cfg: SweepConfig) -> tuple[str, str, str]:
    spec = cfg.heatmap or {}
    default_y = "d2" if (not cfg.locked_d and cfg.mu.steps == 1) else "mu"
    return spec.get("x", "d1"), spec.get("y", default_y), spec.get("value", "negativity")


def _write_heatmaps(records: list[SweepRecord], cfg: SweepConfig, csv_path: Path) -> list[Path]:
    x_axis, y_axis, value = _heatmap_axes(cfg)
    groups: dict[tuple, list[SweepRecord]] = defaultdict(list)
    for rec in records:
        groups[(rec.scheme, rec.p)].append(rec)
    schemes = {k[0] for k in groups}
    p_values = {k[1] for k in groups if k[1] is not None}
    written = []
    for (scheme, p), recs in groups.items():
        stem = csv_path.with_suffix("").name
        if len(schemes) > 1:
            stem += f"_{scheme}"
        if len(p_values) > 1 and p is not None:
            stem += f"_p{format_number(p)}"
        path = csv_path.with_name(stem + ".svg")
        title = f"{value} ({cfg.state_class.value}, {scheme}" + (
            f", p={format_number(p)})" if p is not None else ")"
        )
        written.append(emit_svg_heatmap(recs, x_axis, y_axis, value, path, title=title))
    return written


def _cmd_sweep(args, cfg: SweepConfig) -> int:
    records = run_sweep(cfg)
    out = args.out or cfg.output
    if out:
        path = emit_csv(records, out)
        print(f"wrote {len(records)} rows to {path}", file=sys.stderr)
        if cfg.format == "csv+svg":
            for svg in _write_heatmaps(records, cfg, path):
                print(f"wrote {svg}", file=sys.stderr)
    else:
        if cfg.format == "csv+svg":
            print("format csv+svg needs --out or config 'output'", file=sys.stderr)
            return EXIT_INVALID
        sys.stdout.write(records_to_csv(records))
    if records and all(r.probability is None for r in records):
        print("every grid point had zero success probability", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def _cmd_evolve(args, cfg: SweepConfig) -> int:
    points = grid_points(cfg)
    per_scheme = 2 if cfg.scheme == "compare" else 1
    if len(points) != per_scheme:
        raise ValidationError(
            [f"evolve needs a single grid point, config has {len(points) // per_scheme}; "
             "set e.g. --set grid.d=0.4 --set grid.mu=0.6"]
        )
    records = []
    for pt in points:
        rec = evaluate_point(pt)
        records.append(rec)
        print(
            f"scheme={rec.scheme} class={rec.state_class} d1={format_number(rec.d1)} "
            f"d2={format_number(rec.d2)} mu={format_number(rec.mu)} p={format_number(rec.p)} "
            f"q={format_number(rec.q)} p_r={format_number(rec.p_r)} q_r={format_number(rec.q_r)}"
        )
        if rec.probability is None:
            print("  zero success probability: no conditional state")
            continue
        print("  state:")
        print(_final_state_text(pt))
        print(f"  negativity  = {format_number(rec.negativity)}")
        print(f"  probability = {format_number(rec.probability)}")
    if args.out:
        emit_csv(records, args.out)
    if all(r.probability is None for r in records):
        return EXIT_RUNTIME
    return EXIT_OK


def _final_state_text(pt) -> str:
    from ..channels import ChannelParams, cad_apply
    from ..protection import ProtectionParams, eam_qmr_pipeline, wm_qmr_pipeline
    from ..states import make_state

    rho0 = make_state(pt.state_class, pt.amps)
    ch = ChannelParams(pt.d1, pt.d2, pt.mu)
    if pt.scheme == "none":
        rho = cad_apply(rho0, ch)
    else:
        prot = ProtectionParams(pt.p or 0.0, pt.q or 0.0, pt.p_r, pt.q_r)
        pipeline = wm_qmr_pipeline if pt.scheme == "wm" else eam_qmr_pipeline
        rho = pipeline(rho0, prot, ch).state
    if np.max(np.abs(rho.imag)) < 1e-12:
        text = np.array2string(rho.real, precision=6, suppress_small=True, max_line_width=200)
    else:
        text = np.array2string(
            rho, precision=6, suppress_small=True, max_line_width=200,
            formatter={"complex_kind": lambda z: f"{z.real:+.6f}{z.imag:+.6f}j"},
        )
    return "\n".join("    " + line for line in text.splitlines())


def _cmd_verify(args) -> int:
    results = run_checks()
    for r in results:
        print(f"{r.status:<5s}  {r.name:<28s} {r.detail}  ({r.seconds:.1f}s)")
    failed = sum(not r.ok for r in results)
    xfailed = sum(r.status == "XFAIL" for r in results)
    print(
        f"{sum(r.status == 'PASS' for r in results)} passed, {xfailed} known deviation(s), "
        f"{failed} failed"
    )
    return EXIT_OK if failed == 0 else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qutrit-cad",
        description="Two-qutrit entanglement under correlated amplitude damping, "
        "with weak-measurement and environment-assisted protection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "evolve": "evaluate one parameter point and print the final state",
        "sweep": "evaluate a parameter grid and write CSV (and SVG heatmaps)",
        "compare": "like sweep, with paired wm/eam rows per grid point",
        "verify": "run the oracle and invariant checks",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--out", help="output CSV path")
        p.add_argument(
            "--set", action="append", metavar="KEY=VALUE",
            help="override a config field, dotted keys allowed (repeatable)",
        )
        p.add_argument("--jobs", type=int, help="worker processes for grid evaluation")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return _cmd_verify(args)
    try:
        cfg = _load_config(args)
        if args.command == "evolve":
            return _cmd_evolve(args, cfg)
        return _cmd_sweep(args, cfg)
    except (ParseError, ValidationError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, IncompleteGrid) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
