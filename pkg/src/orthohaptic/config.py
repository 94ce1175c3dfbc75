"""
``key = value`` device configuration files.

Blank lines and ``#`` comments are ignored. Unknown keys, repeated keys and
non-finite numbers are rejected. Missing keys take their defaults, and
:meth:`DeviceConfig.to_text` writes every key back in canonical order, so
serializing a parsed file is idempotent after the first pass.
"""

import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .design import DesignSpec
from .device import DeviceParams
from .geometry import Tolerances
from .orthoglide import OrthoglideParams
from .workspace import WorkspaceSpec, fmt_float
from .wrist import WristVariant

WRIST_CHOICES = ("hybrid", "spherical")


class ConfigError(ValueError):
    def __init__(self, msg: str, key: str = None):
        self.key = key
        super().__init__(msg)


@dataclass(frozen=True)
class DeviceConfig:
    L: float = 1.0
    rho_min: float = 0.1
    rho_max: float = 1.9
    wrist: str = "hybrid"
    psi: float = 2.0
    limit_deg: float = 45.0
    grid_n: int = 17
    edge: float = 0.5
    margin: float = 0.0
    tol_unit: float = 1e-12
    tol_residual: float = 1e-9
    tol_singular: float = 1e-8
    tol_grid_match: float = 0.01

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.type in (float, int) and not math.isfinite(v):
                raise ConfigError(f"{f.name}: value must be finite", f.name)
        if self.wrist not in WRIST_CHOICES:
            raise ConfigError(f"wrist: expected one of {', '.join(WRIST_CHOICES)}", "wrist")
        if not 0.0 < self.limit_deg < 90.0:
            raise ConfigError("limit_deg: must lie strictly between 0 and 90", "limit_deg")
        if self.grid_n < 3:
            raise ConfigError("grid_n: must be at least 3", "grid_n")
        if not self.L > 0:
            raise ConfigError("L: must be positive", "L")
        if self.rho_min > self.rho_max:
            raise ConfigError("rho_min: must not exceed rho_max", "rho_min")
        if self.psi < 1.0:
            raise ConfigError("psi: must be >= 1", "psi")
        if not self.edge > 0:
            raise ConfigError("edge: must be positive", "edge")
        if self.margin < 0:
            raise ConfigError("margin: must be >= 0", "margin")
        try:
            self.tolerances()
        except ValueError as e:
            raise ConfigError(str(e), "tol") from None

    def tolerances(self) -> Tolerances:
        return Tolerances(self.tol_unit, self.tol_residual, self.tol_singular, self.tol_grid_match)

    def ortho_params(self) -> OrthoglideParams:
        return OrthoglideParams(self.L, self.rho_min, self.rho_max, np.eye(3), self.tolerances())

    def device_params(self) -> DeviceParams:
        tol = self.tolerances()
        limit = math.radians(self.limit_deg)
        if self.wrist == "hybrid":
            variant = WristVariant.hybrid(limit=limit, tol=tol)
        else:
            variant = WristVariant.spherical(limit=limit, tol=tol)
        return DeviceParams(self.ortho_params(), variant)

    def workspace_spec(self, with_psi: bool = False) -> WorkspaceSpec:
        return WorkspaceSpec(self.ortho_params(), self.psi if with_psi else None)

    def design_spec(self) -> DesignSpec:
        return DesignSpec(self.edge, self.psi, self.margin)

    def to_text(self) -> str:
        lines = [f"{k} = {fmt_float(v) if isinstance(v, float) else v}"
                 for k, v in asdict(self).items()]
        return "\n".join(lines) + "\n"


_TYPES = {f.name: f.type for f in fields(DeviceConfig)}


def _convert(key: str, raw: str):
    typ = _TYPES[key]
    try:
        if typ is int:
            return int(raw)
        if typ is float:
            return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {typ.__name__}", key) from None
    return raw


def parse_config(text: str) -> DeviceConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _TYPES:
            raise ConfigError(f"unknown key {key!r} on line {lineno}", key)
        if key in values:
            raise ConfigError(f"key {key!r} repeated on line {lineno}", key)
        values[key] = _convert(key, raw)
    return DeviceConfig(**values)


def load_config(path) -> DeviceConfig:
    with open(path) as fh:
        return parse_config(fh.read())
