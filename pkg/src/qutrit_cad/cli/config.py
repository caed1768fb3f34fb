"""JSON sweep configuration: parsing, defaults, validation and ``--set`` overrides."""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import NotNormalized, ParseError, ValidationError
from ..states import StateAmplitudes, StateClass

SCHEMES = ("none", "wm", "eam", "compare")
FORMATS = ("csv", "csv+svg")
AXIS_NAMES = ("d", "d1", "d2", "mu", "p")
_HEATMAP_AXES = ("d1", "d2", "mu", "p", "q")
_HEATMAP_VALUES = ("negativity", "probability")
_TOP_LEVEL = {
    "state_class", "amplitudes", "scheme", "grid", "q_policy", "qmr_policy",
    "output", "format", "heatmap", "workers",
}

DEFAULT_GRID = {
    "d": {"min": 0.0, "max": 1.0, "steps": 51},
    "mu": {"min": 0.0, "max": 1.0, "steps": 11},
    "p": {"min": 0.0, "max": 0.0, "steps": 1},
}


@dataclass(frozen=True)
class AxisSpec:
    min: float
    max: float
    steps: int

    def values(self) -> list[float]:
        if self.steps == 1:
            return [float(self.min)]
        return [float(v) for v in np.linspace(self.min, self.max, self.steps)]


@dataclass(frozen=True)
class SweepConfig:
    state_class: StateClass = StateClass.CLASS1
    amplitudes: StateAmplitudes = field(default_factory=StateAmplitudes.balanced)
    scheme: str = "none"
    d1: AxisSpec = AxisSpec(0.0, 1.0, 51)
    d2: AxisSpec | None = None  # None: locked to d1
    mu: AxisSpec = AxisSpec(0.0, 1.0, 11)
    p: AxisSpec = AxisSpec(0.0, 0.0, 1)
    q_fixed: float | None = None  # None: q = p
    qmr_fixed: tuple[float, float] | None = None  # None: closed-form optimum
    output: str | None = None
    format: str = "csv"
    heatmap: dict | None = None
    workers: int = 1

    @property
    def locked_d(self) -> bool:
        return self.d2 is None


def _expect(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise ParseError(path, message)


def _number(value, path: str) -> float:
    _expect(
        isinstance(value, (int, float)) and not isinstance(value, bool),
        path, f"expected a number, got {type(value).__name__}",
    )
    _expect(math.isfinite(value), path, "expected a finite number")
    return float(value)


def _complex(value, path: str) -> complex:
    if isinstance(value, (list, tuple)):
        _expect(len(value) == 2, path, "complex numbers are [re, im]")
        return complex(_number(value[0], f"{path}[0]"), _number(value[1], f"{path}[1]"))
    if isinstance(value, dict):
        unknown = set(value) - {"re", "im"}
        _expect(not unknown, path, f"unknown keys {sorted(unknown)}")
        return complex(
            _number(value.get("re", 0.0), f"{path}.re"),
            _number(value.get("im", 0.0), f"{path}.im"),
        )
    return complex(_number(value, path))


def _axis(value, path: str) -> AxisSpec:
    if not isinstance(value, dict):
        v = _number(value, path)
        return AxisSpec(v, v, 1)
    unknown = set(value) - {"min", "max", "steps"}
    _expect(not unknown, path, f"unknown keys {sorted(unknown)}")
    for key in ("min", "max", "steps"):
        _expect(key in value, f"{path}.{key}", "missing")
    steps = value["steps"]
    _expect(
        isinstance(steps, int) and not isinstance(steps, bool),
        f"{path}.steps", "expected an integer",
    )
    return AxisSpec(_number(value["min"], f"{path}.min"), _number(value["max"], f"{path}.max"), steps)


def _check_axis(name: str, ax: AxisSpec, violations: list[str]) -> None:
    if ax.steps < 1:
        violations.append(f"grid.{name}.steps must be >= 1")
    if ax.min > ax.max:
        violations.append(f"grid.{name}: min {ax.min} > max {ax.max}")
    if ax.min < 0 or ax.max > 1:
        violations.append(f"grid.{name}: range [{ax.min}, {ax.max}] not within [0, 1]")
    if ax.steps == 1 and ax.min != ax.max:
        violations.append(f"grid.{name}: steps=1 requires min == max")


def parse_config(text: str | dict, overrides: list[str] | None = None) -> SweepConfig:
    """
    Build a :class:`SweepConfig` from a JSON document (or an already-decoded dict).

    ``overrides`` are ``key=value`` strings with dotted keys, applied before
    validation; values are decoded as JSON when possible, otherwise kept as
    strings (``--set scheme=wm``, ``--set grid.d.steps=11``).

    Raises ParseError for malformed input (with the field path) and
    ValidationError listing every semantic violation.
    """
    if isinstance(text, dict):
        raw = copy.deepcopy(text)
    else:
        try:
            raw = json.loads(text) if text.strip() else {}
        except json.JSONDecodeError as exc:
            raise ParseError("", f"invalid JSON: {exc}") from exc
    _expect(isinstance(raw, dict), "", "top level must be an object")
    for item in overrides or []:
        apply_override(raw, item)

    unknown = set(raw) - _TOP_LEVEL
    _expect(not unknown, "", f"unknown keys {sorted(unknown)}")
    violations: list[str] = []
    kwargs: dict = {}

    sc = raw.get("state_class", "class1")
    _expect(isinstance(sc, str), "state_class", "expected a string")
    try:
        kwargs["state_class"] = StateClass(sc.lower())
    except ValueError:
        violations.append(f"state_class: {sc!r} is not one of class1, class2")

    if "amplitudes" in raw:
        amps = raw["amplitudes"]
        _expect(isinstance(amps, dict), "amplitudes", "expected an object")
        unknown = set(amps) - {"alpha", "beta", "gamma", "normalize"}
        _expect(not unknown, "amplitudes", f"unknown keys {sorted(unknown)}")
        for key in ("alpha", "beta", "gamma"):
            _expect(key in amps, f"amplitudes.{key}", "missing")
        alpha = _number(amps["alpha"], "amplitudes.alpha")
        beta = _complex(amps["beta"], "amplitudes.beta")
        gamma = _complex(amps["gamma"], "amplitudes.gamma")
        try:
            if amps.get("normalize", False):
                kwargs["amplitudes"] = StateAmplitudes.normalized(alpha, beta, gamma)
            else:
                kwargs["amplitudes"] = StateAmplitudes(alpha, beta, gamma)
        except NotNormalized as exc:
            violations.append(f"amplitudes: {exc}")

    scheme = raw.get("scheme", "none")
    _expect(isinstance(scheme, str), "scheme", "expected a string")
    if scheme not in SCHEMES:
        violations.append(f"scheme: {scheme!r} is not one of {', '.join(SCHEMES)}")
    kwargs["scheme"] = scheme

    grid = raw.get("grid", {})
    _expect(isinstance(grid, dict), "grid", "expected an object")
    unknown = set(grid) - set(AXIS_NAMES)
    _expect(not unknown, "grid", f"unknown axes {sorted(unknown)}")
    axes = {name: _axis(grid[name], f"grid.{name}") for name in grid}
    if "d" in axes and ("d1" in axes or "d2" in axes):
        violations.append("grid: give either d or both d1 and d2, not both forms")
    elif ("d1" in axes) != ("d2" in axes):
        violations.append("grid: d1 and d2 must be given together (or use d)")
    for name in ("d", "mu", "p"):
        axes.setdefault(name, _axis(DEFAULT_GRID[name], f"grid.{name}"))
    if "d1" in axes and "d2" in axes:
        kwargs["d1"], kwargs["d2"] = axes["d1"], axes["d2"]
        del axes["d"]
    else:
        kwargs["d1"] = axes["d"]
    kwargs["mu"], kwargs["p"] = axes["mu"], axes["p"]
    for name, ax in axes.items():
        _check_axis(name, ax, violations)

    q_policy = raw.get("q_policy", "equal_p")
    if q_policy != "equal_p":
        _expect(
            isinstance(q_policy, dict) and set(q_policy) == {"fixed"},
            "q_policy", 'expected "equal_p" or {"fixed": value}',
        )
        q = _number(q_policy["fixed"], "q_policy.fixed")
        if not 0 <= q <= 1:
            violations.append(f"q_policy.fixed: {q} not within [0, 1]")
        kwargs["q_fixed"] = q

    qmr_policy = raw.get("qmr_policy", "optimal")
    if qmr_policy != "optimal":
        _expect(
            isinstance(qmr_policy, dict) and set(qmr_policy) == {"fixed"},
            "qmr_policy", 'expected "optimal" or {"fixed": [p_r, q_r]}',
        )
        pair = qmr_policy["fixed"]
        _expect(isinstance(pair, list) and len(pair) == 2, "qmr_policy.fixed", "expected [p_r, q_r]")
        p_r = _number(pair[0], "qmr_policy.fixed[0]")
        q_r = _number(pair[1], "qmr_policy.fixed[1]")
        for label, v in (("p_r", p_r), ("q_r", q_r)):
            if not 0 <= v <= 1:
                violations.append(f"qmr_policy.fixed: {label}={v} not within [0, 1]")
        kwargs["qmr_fixed"] = (p_r, q_r)

    output = raw.get("output")
    _expect(output is None or isinstance(output, str), "output", "expected a path string")
    kwargs["output"] = output

    fmt = raw.get("format", "csv")
    _expect(isinstance(fmt, str), "format", "expected a string")
    if fmt not in FORMATS:
        violations.append(f"format: {fmt!r} is not one of {', '.join(FORMATS)}")
    kwargs["format"] = fmt

    heatmap = raw.get("heatmap")
    if heatmap is not None:
        _expect(isinstance(heatmap, dict), "heatmap", "expected an object")
        unknown = set(heatmap) - {"x", "y", "value"}
        _expect(not unknown, "heatmap", f"unknown keys {sorted(unknown)}")
        for key, allowed in (("x", _HEATMAP_AXES), ("y", _HEATMAP_AXES), ("value", _HEATMAP_VALUES)):
            if key in heatmap and heatmap[key] not in allowed:
                violations.append(f"heatmap.{key}: {heatmap[key]!r} is not one of {', '.join(allowed)}")
        kwargs["heatmap"] = dict(heatmap)

    workers = raw.get("workers", 1)
    _expect(isinstance(workers, int) and not isinstance(workers, bool), "workers", "expected an integer")
    if workers < 1:
        violations.append("workers must be >= 1")
    kwargs["workers"] = workers

    if violations:
        raise ValidationError(violations)
    return SweepConfig(**kwargs)


def apply_override(raw: dict, item: str) -> None:
    """Set a dotted key in a decoded config, e.g. ``grid.mu.steps=5``."""
    key, sep, value = item.partition("=")
    _expect(bool(sep) and bool(key), item, "override must look like key=value")
    try:
        decoded = json.loads(value)
    except json.JSONDecodeError:
        decoded = value
    parts = key.split(".")
    if len(parts) == 3 and parts[0] == "grid" and parts[1] in DEFAULT_GRID:
        # editing one field of an axis that is still implicit starts from its default
        grid = raw.setdefault("grid", {})
        if isinstance(grid, dict) and not isinstance(grid.get(parts[1]), dict):
            grid[parts[1]] = dict(DEFAULT_GRID[parts[1]])
    node = raw
    for part in parts[:-1]:
        child = node.get(part)
        if not isinstance(child, dict):
            child = {}
            node[part] = child
        node = child
    node[parts[-1]] = decoded
