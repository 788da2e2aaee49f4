"""Flat ``key = value`` run configuration with line-numbered validation."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Callable, Dict, Mapping, Optional, Tuple

from src.integrator import IntegratorConfig, Scheme
from src.model import PhysicalParams
from src.spectral import SpectralGrid

INITIAL_CONDITIONS = ("orszag_tang", "random", "single_mode", "zero")
RNG_NAMES = ("philox",)

_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


class ConfigError(ValueError):
    """Invalid configuration; ``line`` is 1-based, 0 for whole-file problems."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}")
        self.message = message
        self.line = line


# ── Data classes ──────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class RunConfig:
    """Everything one simulation needs. Field names are the config keys."""
    # physics
    nu: float = 1.0
    eta: float = 1.0
    alpha: float = 1.0
    r1: float = 0.5
    r2: float = 0.5
    enforce_critical_line: bool = False   # fill the missing exponent from r1 + r2 = 1
    # grid
    n: int = 64
    length: float = 2.0 * math.pi
    # time stepping
    scheme: str = "IFRK4"
    cfl: float = 0.5
    dt_max: float = 1e-2
    dt_min: float = 1e-8
    t_end: float = 1.0
    h3_ceiling: float = 1e8
    observe_every: int = 1
    # initial condition
    ic: str = "orszag_tang"
    amplitude_w: float = 1.0
    amplitude_a: float = 1.0
    seed: int = 0
    k_min: int = 1
    k_max: int = 8
    spectrum_slope: float = -2.0
    target_h3_v: float = 5.0
    target_h3_b: float = 5.0
    rng: str = "philox"
    # output
    write_snapshots: bool = False
    snapshot_every: int = 0               # in observations; 0 = final state only
    out_dir: str = "output"
    growth_exponent_threshold: float = 1.5

    @property
    def physical_params(self) -> PhysicalParams:
        return PhysicalParams(nu=self.nu, eta=self.eta, alpha=self.alpha, r1=self.r1, r2=self.r2)

    @property
    def integrator_config(self) -> IntegratorConfig:
        return IntegratorConfig(
            scheme=Scheme(self.scheme),
            cfl=self.cfl,
            dt_max=self.dt_max,
            dt_min=self.dt_min,
            t_end=self.t_end,
            observe_every=self.observe_every,
            h3_ceiling=self.h3_ceiling,
        )

    @property
    def grid(self) -> SpectralGrid:
        return SpectralGrid(self.n, self.length)

    def to_dict(self) -> Dict[str, object]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


_DEFAULTS = RunConfig()
_FIELD_TYPES: Dict[str, type] = {f.name: type(getattr(_DEFAULTS, f.name)) for f in fields(RunConfig)}


# ── Per-key rules ─────────────────────────────────────────────────────────────

Rule = Tuple[Callable[[object], bool], str]

_RULES: Dict[str, Rule] = {
    "nu": (lambda v: v >= 0, "must be >= 0"),
    "eta": (lambda v: v >= 0, "must be >= 0"),
    "alpha": (lambda v: v > 0, "must be > 0"),
    "r1": (lambda v: 0.0 <= v <= 1.0, "must lie in [0, 1]"),
    "r2": (lambda v: 0.0 <= v <= 1.0, "must lie in [0, 1]"),
    "n": (lambda v: v >= 8 and v % 2 == 0, "must be an even integer >= 8"),
    "length": (lambda v: v > 0, "must be > 0"),
    "scheme": (lambda v: v in {s.value for s in Scheme}, f"must be one of {[s.value for s in Scheme]}"),
    "cfl": (lambda v: 0.0 < v <= 1.0, "must lie in (0, 1]"),
    "dt_max": (lambda v: v > 0, "must be > 0"),
    "dt_min": (lambda v: v > 0, "must be > 0"),
    "t_end": (lambda v: v > 0, "must be > 0"),
    "h3_ceiling": (lambda v: v > 0, "must be > 0"),
    "observe_every": (lambda v: v >= 1, "must be >= 1"),
    "ic": (lambda v: v in INITIAL_CONDITIONS, f"must be one of {list(INITIAL_CONDITIONS)}"),
    "k_min": (lambda v: v >= 1, "must be >= 1"),
    "k_max": (lambda v: v >= 1, "must be >= 1"),
    "target_h3_v": (lambda v: v >= 0, "must be >= 0"),
    "target_h3_b": (lambda v: v >= 0, "must be >= 0"),
    "rng": (lambda v: v in RNG_NAMES, f"must be one of {list(RNG_NAMES)}"),
    "snapshot_every": (lambda v: v >= 0, "must be >= 0"),
    "growth_exponent_threshold": (lambda v: v > 0, "must be > 0"),
}


def _coerce(key: str, raw: str, line: int) -> object:
    target = _FIELD_TYPES[key]
    text = raw.strip()
    if target is bool:
        lowered = text.lower()
        if lowered in _TRUE:
            return True
        if lowered in _FALSE:
            return False
        raise ConfigError(f"{key} = {text!r} is not a boolean (true/false)", line)
    if target is int:
        try:
            return int(text)
        except ValueError:
            raise ConfigError(f"{key} = {text!r} is not an integer", line) from None
    if target is float:
        try:
            value = float(text)
        except ValueError:
            raise ConfigError(f"{key} = {text!r} is not a number", line) from None
        if not math.isfinite(value):
            raise ConfigError(f"{key} = {text!r} must be finite", line)
        return value
    return text


def validate_config(config: RunConfig, lines: Optional[Mapping[str, int]] = None) -> RunConfig:
    """Check every key rule and the cross-key constraints; return ``config``.

    ``lines`` maps keys to the line they were set on (0 when defaulted).
    """
    lines = lines or {}

    def fail(key: str, message: str) -> None:
        raise ConfigError(message, lines.get(key, 0))

    for key, (accept, description) in _RULES.items():
        value = getattr(config, key)
        if not accept(value):
            fail(key, f"{key} = {value!r} {description}")

    if not config.dt_min < config.dt_max:
        fail("dt_min", f"dt_min = {config.dt_min!r} must be smaller than dt_max = {config.dt_max!r}")
    if config.enforce_critical_line and abs(config.r1 + config.r2 - 1.0) > 1e-12:
        fail("r2", f"r1 + r2 = {config.r1 + config.r2!r} but enforce_critical_line requires r1 + r2 = 1")
    if config.ic == "random":
        if config.k_min > config.k_max:
            fail("k_min", f"k_min = {config.k_min} must not exceed k_max = {config.k_max}")
        kmax = (config.n - 1) // 3
        if config.k_max > kmax:
            fail("k_max", f"k_max = {config.k_max} exceeds the largest dealiased wavenumber {kmax} for n = {config.n}")
    return config


# ── Parsing ───────────────────────────────────────────────────────────────────

def parse_config(text: str) -> RunConfig:
    """Parse flat ``key = value`` text; missing keys keep their defaults."""
    values: Dict[str, object] = {}
    lines: Dict[str, int] = {}

    for number, raw_line in enumerate(text.splitlines(), start=1):
        content = raw_line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigError(f"expected 'key = value', got {content!r}", number)
        key, raw_value = (part.strip() for part in content.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown key {key!r}", number)
        if key in lines:
            raise ConfigError(f"duplicate key {key!r} (first set on line {lines[key]})", number)
        if not raw_value:
            raise ConfigError(f"missing value for {key!r}", number)
        values[key] = _coerce(key, raw_value, number)
        lines[key] = number

    if values.get("enforce_critical_line"):
        if "r1" in values and "r2" not in values:
            values["r2"] = 1.0 - float(values["r1"])
            lines["r2"] = lines["r1"]
        elif "r2" in values and "r1" not in values:
            values["r1"] = 1.0 - float(values["r2"])
            lines["r1"] = lines["r2"]

    return validate_config(replace(_DEFAULTS, **values), lines)


def load_config(path: Path | str) -> RunConfig:
    """Read and parse a config file. OSError propagates with the path."""
    return parse_config(Path(path).read_text(encoding="utf-8"))
