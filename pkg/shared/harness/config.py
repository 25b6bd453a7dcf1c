"""
shared/harness/config.py

Sweep configuration: presets, grid axes and the key = value config file.

Config file format ('#' starts a comment, blank lines ignored):

    preset     = fig4a
    axis       = phi 0 pi 51
    axis       = p 0 0.1 51
    noise_kind = depolarizing
    optimize   = false
    out        = results/fig4a.csv
    svg        = results/fig4a.svg

Angles accept '<x>pi' literals everywhere. Keys given in the file override
the preset's defaults; 'axis' lines replace the preset grid as a whole.

Environment:
    WGS_WORKERS     worker-pool size for sweeps (default: os.cpu_count())
    WGS_LOG_LEVEL   root log level for the CLI (default: INFO)

Usage:
    config = preset_config("fig2")
    config = load_config("sweeps/fig4a.conf")
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from shared.qsim.states import NoiseKind, NoiseSpec, StateError
from shared.wgs.graph import parse_angle

PRESETS = (
    "fig2",
    "fig3a", "fig3b", "fig3c",
    "fig4a", "fig4b", "fig4c",
    "fig5a", "fig5b", "fig5c",
    "custom",
)
AXIS_NAMES = ("phi", "p", "phi12", "phi23")
MAX_AXES = 2

CONFIG_KEYS = (
    "preset", "n", "axis", "noise_kind", "noise_p",
    "phi", "phi12", "optimize", "out", "svg", "xlsx",
)


class ConfigError(ValueError):
    def __init__(self, reason: str, line_no: Optional[int] = None):
        super().__init__(f"line {line_no}: {reason}" if line_no else reason)
        self.line_no = line_no
        self.reason = reason


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ConfigError(f"unknown axis {self.name!r} (expected one of {', '.join(AXIS_NAMES)})")
        if int(self.count) != self.count or self.count < 2:
            raise ConfigError(f"axis {self.name}: count must be an integer >= 2, got {self.count}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError(f"axis {self.name}: bounds must be finite")
        if self.start >= self.stop:
            raise ConfigError(f"axis {self.name}: start {self.start} must be below stop {self.stop}")
        if self.name == "p" and not (0.0 <= self.start and self.stop <= 1.0):
            raise ConfigError("axis p: noise probabilities must lie in [0, 1]")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.count))


@dataclass(frozen=True)
class SweepConfig:
    preset: str
    axes: tuple[Axis, ...] = ()
    n: int = 1
    noise: Optional[NoiseSpec] = None
    phi: float = math.pi
    phi12: float = 0.8 * math.pi
    optimize: bool = False
    out: Optional[Path] = None
    svg: Optional[Path] = None
    xlsx: Optional[Path] = None

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r} (expected one of {', '.join(PRESETS)})")
        if not 1 <= len(self.axes) <= MAX_AXES:
            raise ConfigError(f"a sweep needs 1 to {MAX_AXES} axes, got {len(self.axes)}")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate axis in {names}")
        if self.n < 0:
            raise ConfigError(f"n must be >= 0, got {self.n}")
        if {"phi12", "phi23"} & set(names) and self.n < 1:
            raise ConfigError("axes phi12 and phi23 need a chain with n >= 1")

    @property
    def axis_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.axes)

    @property
    def noise_kind(self) -> NoiseKind:
        return self.noise.kind if self.noise else NoiseKind.DEPOLARIZING


# ── Preset defaults ──────────────────────────────────────────

_PHI_FULL_2D = Axis("phi", 0.0, math.pi, 51)
_P_AXIS = Axis("p", 0.0, 0.1, 51)

_PRESET_DEFAULTS: dict[str, dict] = {
    "fig2":  {"axes": (Axis("phi", 0.0, math.pi, 101),), "n": 2},
    "fig3a": {"axes": (Axis("phi12", 0.0, math.pi, 51), Axis("phi23", 0.0, math.pi, 51))},
    "fig3b": {"axes": (Axis("phi12", 0.0, math.pi, 51), Axis("phi23", 0.0, math.pi, 51))},
    "fig3c": {"axes": (Axis("phi23", 0.6 * math.pi, math.pi, 101),), "phi12": 0.8 * math.pi},
    "fig4a": {"axes": (_PHI_FULL_2D, _P_AXIS), "noise": NoiseSpec(NoiseKind.DEPOLARIZING, 0.0)},
    "fig4b": {"axes": (_PHI_FULL_2D, _P_AXIS), "noise": NoiseSpec(NoiseKind.DEPOLARIZING, 0.0)},
    "fig4c": {"axes": (_PHI_FULL_2D, _P_AXIS), "noise": NoiseSpec(NoiseKind.DEPOLARIZING, 0.0)},
    "fig5a": {"axes": (_PHI_FULL_2D, _P_AXIS), "noise": NoiseSpec(NoiseKind.DEPHASING, 0.0)},
    "fig5b": {"axes": (_PHI_FULL_2D, _P_AXIS), "noise": NoiseSpec(NoiseKind.DEPHASING, 0.0)},
    "fig5c": {"axes": (_PHI_FULL_2D, _P_AXIS), "noise": NoiseSpec(NoiseKind.DEPHASING, 0.0)},
}

# axes each preset understands; custom takes any of AXIS_NAMES
_PRESET_AXES = {
    "fig2": {("phi",)},
    "fig3a": {("phi12", "phi23")},
    "fig3b": {("phi12", "phi23")},
    "fig3c": {("phi23",)},
    **{f"fig{k}{s}": {("phi", "p")} for k in (4, 5) for s in "abc"},
}


def preset_config(name: str, **overrides) -> SweepConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r} (expected one of {', '.join(PRESETS)})")
    if name == "custom" and "axes" not in overrides:
        raise ConfigError("preset 'custom' needs at least one axis")
    values = {**_PRESET_DEFAULTS.get(name, {}), **overrides}
    config = SweepConfig(preset=name, **values)
    _check_preset_axes(config)
    return config


def _check_preset_axes(config: SweepConfig) -> None:
    allowed = _PRESET_AXES.get(config.preset)
    if allowed is not None and config.axis_names not in allowed:
        expected = " x ".join(next(iter(allowed)))
        raise ConfigError(f"preset {config.preset} sweeps {expected}, got axes {' x '.join(config.axis_names)}")


# ── Config file ──────────────────────────────────────────────

def _parse_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("true", "yes", "1", "on"):
        return True
    if value in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected true/false, got {text!r}")


def _parse_axis(text: str) -> Axis:
    parts = text.split()
    if len(parts) != 4:
        raise ValueError("expected 'axis = <name> <start> <stop> <count>'")
    name, start, stop, count = parts
    try:
        count_value = int(count)
    except ValueError:
        raise ValueError(f"axis count {count!r} is not an integer") from None
    return Axis(name, parse_angle(start), parse_angle(stop), count_value)


def parse_config(text: str, base_dir: Optional[Path] = None) -> SweepConfig:
    """Parse the key = value format; relative output paths resolve against base_dir."""
    values: dict = {}
    axes: list[Axis] = []
    noise_kind: Optional[str] = None
    noise_p: Optional[float] = None
    seen: set[str] = set()
    last_line = 0

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        last_line = line_no
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line_no)
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown key {key!r}", line_no)
        if not value:
            raise ConfigError(f"empty value for {key!r}", line_no)
        if key != "axis" and key in seen:
            raise ConfigError(f"key {key!r} given twice", line_no)
        seen.add(key)

        try:
            if key == "axis":
                axes.append(_parse_axis(value))
            elif key == "preset":
                values["preset"] = value.lower()
            elif key == "n":
                values["n"] = int(value)
            elif key == "noise_kind":
                noise_kind = NoiseKind(value.lower()).value
            elif key == "noise_p":
                noise_p = float(value)
            elif key in ("phi", "phi12"):
                values[key] = parse_angle(value)
            elif key == "optimize":
                values["optimize"] = _parse_bool(value)
            else:
                path = Path(value)
                if base_dir is not None and not path.is_absolute():
                    path = base_dir / path
                values[key] = path
        except ConfigError as e:
            raise ConfigError(e.reason, line_no) from None
        except ValueError as e:
            raise ConfigError(str(e), line_no) from None

    if "preset" not in values:
        raise ConfigError("missing required key 'preset'", last_line or 1)
    preset = values.pop("preset")
    if axes:
        values["axes"] = tuple(axes)

    try:
        config = preset_config(preset, **values)
        if noise_kind is not None or noise_p is not None:
            kind = noise_kind or config.noise_kind.value
            config = replace(config, noise=NoiseSpec(kind, noise_p or 0.0))
    except ConfigError as e:
        raise ConfigError(e.reason, e.line_no or last_line) from None
    except StateError as e:
        raise ConfigError(str(e), last_line) from None
    return config


def load_config(path: str | Path) -> SweepConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror or e}") from None
    return parse_config(text, base_dir=path.parent)


# ── Environment ──────────────────────────────────────────────

def worker_count() -> int:
    raw = os.getenv("WGS_WORKERS", "").strip()
    if not raw:
        return os.cpu_count() or 1
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f"WGS_WORKERS must be a positive integer, got {raw!r}") from None
    if workers < 1:
        raise ConfigError(f"WGS_WORKERS must be a positive integer, got {raw!r}")
    return workers


def log_level() -> str:
    return os.getenv("WGS_LOG_LEVEL", "INFO").upper()
