"""CSV tables and SVG heatmaps for sweep records."""

from __future__ import annotations

import csv
import html
import io
from pathlib import Path
from typing import Iterable, Sequence

from ..errors import IncompleteGrid
from .sweep import CSV_FIELDS, SweepRecord

# light-to-dark ramp (value 0 -> first stop, max -> last stop)
_COLOR_STOPS = (
    (0.0, (255, 255, 217)),
    (0.25, (199, 233, 180)),
    (0.5, (65, 182, 196)),
    (0.75, (34, 94, 168)),
    (1.0, (8, 29, 88)),
)
_MISSING_FILL = "#bdbdbd"
_FLOAT_FIELDS = ("d1", "d2", "mu", "p", "q", "p_r", "q_r", "negativity", "probability")


def format_number(value: float | None) -> str:
    if value is None:
        return ""
    text = format(float(value), ".12g")
    return "0" if text == "-0" else text


def records_to_csv(records: Iterable[SweepRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for rec in records:
        writer.writerow(
            [
                getattr(rec, name) if name in ("state_class", "scheme")
                else format_number(getattr(rec, name))
                for name in CSV_FIELDS
            ]
        )
    return buf.getvalue()


def emit_csv(records: Iterable[SweepRecord], path: str | Path) -> Path:
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(records_to_csv(records))
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write CSV: {exc.strerror}", str(path)) from exc
    return path


def read_csv(path: str | Path) -> list[SweepRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_FIELDS:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        rows = []
        for row in reader:
            values = {k: (float(row[k]) if row[k] != "" else None) for k in _FLOAT_FIELDS}
            rows.append(SweepRecord(state_class=row["state_class"], scheme=row["scheme"], **values))
        return rows


def value_color(value: float, vmax: float) -> str:
    """Hex color of ``value`` on the linear scale ``[0, vmax]``."""
    t = 0.0 if vmax <= 0 else min(max(value / vmax, 0.0), 1.0)
    for (t0, c0), (t1, c1) in zip(_COLOR_STOPS, _COLOR_STOPS[1:]):
        if t <= t1:
            w = (t - t0) / (t1 - t0)
            rgb = [round(a + w * (b - a)) for a, b in zip(c0, c1)]
            return "#{:02x}{:02x}{:02x}".format(*rgb)
    return "#{:02x}{:02x}{:02x}".format(*_COLOR_STOPS[-1][1])


def render_svg_heatmap(
    records: Sequence[SweepRecord],
    x_axis: str,
    y_axis: str,
    value_column: str,
    *,
    title: str | None = None,
) -> str:
    """
    One colored cell per (x, y) grid point, with axes and a color bar.

    Raises IncompleteGrid unless every (x, y) combination of the distinct x
    and y values occurs exactly once. Cells whose value is empty are drawn
    gray.
    """
    cells: dict[tuple[float, float], float | None] = {}
    for rec in records:
        key = (getattr(rec, x_axis), getattr(rec, y_axis))
        if key[0] is None or key[1] is None:
            raise IncompleteGrid(f"record without {x_axis}/{y_axis} coordinate")
        if key in cells:
            raise IncompleteGrid(f"duplicate grid point {x_axis}={key[0]}, {y_axis}={key[1]}")
        cells[key] = getattr(rec, value_column)
    xs = sorted({k[0] for k in cells})
    ys = sorted({k[1] for k in cells})
    missing = [(x, y) for x in xs for y in ys if (x, y) not in cells]
    if missing or not cells:
        raise IncompleteGrid(
            f"{len(missing)} of {len(xs) * len(ys)} grid points missing"
            + (f", first at {x_axis}={missing[0][0]}, {y_axis}={missing[0][1]}" if missing else "")
        )
    values = [v for v in cells.values() if v is not None]
    vmax = max(values) if values else 0.0

    plot_w, plot_h = 480.0, 360.0
    left, top, bar_gap, bar_w = 70.0, 40.0, 30.0, 18.0
    width = left + plot_w + bar_gap + bar_w + 70.0
    height = top + plot_h + 60.0
    cw, ch = plot_w / len(xs), plot_h / len(ys)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" height="{height:g}" '
        f'viewBox="0 0 {width:g} {height:g}" font-family="sans-serif" font-size="12">',
        f"<title>{html.escape(title or f'{value_column} over {x_axis} and {y_axis}')}</title>",
        '<g class="cells" shape-rendering="crispEdges">',
    ]
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            v = cells[(x, y)]
            fill = _MISSING_FILL if v is None else value_color(v, vmax)
            px, py = left + i * cw, top + plot_h - (j + 1) * ch
            out.append(
                f'<rect x="{px:.3f}" y="{py:.3f}" width="{cw:.3f}" height="{ch:.3f}" '
                f'fill="{fill}" data-x="{format_number(x)}" data-y="{format_number(y)}" '
                f'data-value="{format_number(v)}"/>'
            )
    out.append("</g>")
    out.append(
        f'<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>'
    )
    for frac in (0.0, 0.5, 1.0):
        xv = xs[0] + frac * (xs[-1] - xs[0])
        yv = ys[0] + frac * (ys[-1] - ys[0])
        out.append(
            f'<text x="{left + frac * plot_w:.1f}" y="{top + plot_h + 16:.1f}" '
            f'text-anchor="middle">{format_number(round(xv, 6))}</text>'
        )
        out.append(
            f'<text x="{left - 6:.1f}" y="{top + plot_h - frac * plot_h + 4:.1f}" '
            f'text-anchor="end">{format_number(round(yv, 6))}</text>'
        )
    out.append(
        f'<text class="x-label" x="{left + plot_w / 2:.1f}" y="{top + plot_h + 40:.1f}" '
        f'text-anchor="middle">{x_axis}</text>'
    )
    out.append(
        f'<text class="y-label" x="{left - 48:.1f}" y="{top + plot_h / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 {left - 48:.1f} {top + plot_h / 2:.1f})">{y_axis}</text>'
    )

    bx = left + plot_w + bar_gap
    n_bar = 50
    out.append('<g class="scale-bar">')
    for k in range(n_bar):
        seg_h = plot_h / n_bar
        out.append(
            f'<rect x="{bx:.1f}" y="{top + plot_h - (k + 1) * seg_h:.3f}" width="{bar_w}" '
            f'height="{seg_h:.3f}" fill="{value_color((k + 0.5) / n_bar * vmax, vmax)}"/>'
        )
    out.append("</g>")
    out.append(f'<text x="{bx + bar_w + 4:.1f}" y="{top + plot_h + 4:.1f}">0</text>')
    out.append(f'<text x="{bx + bar_w + 4:.1f}" y="{top + 4:.1f}">{format(vmax, ".4g")}</text>')
    out.append(
        f'<text x="{bx + bar_w / 2:.1f}" y="{top - 10:.1f}" text-anchor="middle">{value_column}</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg_heatmap(
    records: Sequence[SweepRecord],
    x_axis: str,
    y_axis: str,
    value_column: str,
    path: str | Path,
    *,
    title: str | None = None,
) -> Path:
    text = render_svg_heatmap(records, x_axis, y_axis, value_column, title=title)
    path = Path(path)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write SVG: {exc.strerror}", str(path)) from exc
    return path
