"""
Pipeline configuration
"""

from dataclasses import dataclass, fields, replace
import math
from pathlib import Path
from typing import Union
from . import definitions as defs
from .errors import ConfigError
from .lane_types import RangeMode

# File key -> (field name, parser)
_KEYS = {
    'tauC': ('tau_c', float),
    'templateSize': ('template_size', int),
    'falsWindow': ('fals_window', int),
    'tD': ('t_d', float),
    'alpha': ('alpha', float),
    'beta': ('beta', float),
    'tauG': ('tau_g', float),
    'r': ('jump_step', int),
    'pPca': ('p_pca', float),
    'nccFloor': ('ncc_floor', float),
    'rangeMode': ('range_mode', lambda v: RangeMode[v.strip().upper()]),
    'templateTheta': ('template_theta_deg', float),
    'stripeWidth': ('stripe_width', int),
    'thetaSearchStep': ('theta_search_step_deg', float),
    'tolerancePx': ('tolerance_px', float),
    'toleranceDeg': ('tolerance_deg', float),
}


@dataclass(frozen=True)
class Config:
    """Detection parameters, defaults from the reference experiments"""
    tau_c: float = defs.TAU_C
    template_size: int = defs.TEMPLATE_SIZE
    fals_window: int = defs.FALS_WINDOW
    t_d: float = defs.T_D
    alpha: float = defs.ALPHA
    beta: float = defs.BETA
    tau_g: float = defs.TAU_G
    jump_step: int = defs.JUMP_STEP
    p_pca: float = defs.P_PCA
    ncc_floor: float = defs.NCC_FLOOR
    range_mode: RangeMode = RangeMode.RANGE
    template_theta_deg: float = defs.LEFT_THETA_DEG
    stripe_width: int = 0                 # 0 means template_size // 4
    theta_search_step_deg: float = defs.THETA_SEARCH_STEP_DEG
    tolerance_px: float = defs.TOLERANCE_PX
    tolerance_deg: float = defs.TOLERANCE_DEG

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, float) and not math.isfinite(value):
                raise ConfigError(f"{f.name} must be finite, got {value}")
        if self.alpha < 0 or self.beta < 0:
            raise ConfigError("alpha and beta must be non-negative")
        if self.alpha + self.beta > 1:
            raise ConfigError(f"alpha + beta must not exceed 1, got {self.alpha + self.beta}")
        if not 0 < self.tau_g < 1:
            raise ConfigError(f"tauG must lie in (0, 1), got {self.tau_g}")
        if not 0 < self.p_pca < 1:
            raise ConfigError(f"pPca must lie in (0, 1), got {self.p_pca}")
        if self.template_size < defs.MIN_TEMPLATE_SIZE:
            raise ConfigError(f"templateSize must be >= {defs.MIN_TEMPLATE_SIZE}, got {self.template_size}")
        if self.fals_window < 3 or self.fals_window % 2 == 0:
            raise ConfigError(f"falsWindow must be odd and >= 3, got {self.fals_window}")
        if self.t_d <= 0:
            raise ConfigError(f"tD must be positive, got {self.t_d}")
        if self.jump_step < 1:
            raise ConfigError(f"r must be >= 1, got {self.jump_step}")
        if not -1 <= self.ncc_floor < 1:
            raise ConfigError(f"nccFloor must lie in [-1, 1), got {self.ncc_floor}")
        if not 0 < self.template_theta_deg < 180:
            raise ConfigError(f"templateTheta must lie in (0, 180), got {self.template_theta_deg}")
        if self.stripe_width < 0 or self.stripe_width >= self.template_size:
            raise ConfigError(f"stripeWidth must lie in [0, templateSize), got {self.stripe_width}")
        if self.theta_search_step_deg < 0:
            raise ConfigError("thetaSearchStep must be non-negative")
        if self.tolerance_px <= 0 or self.tolerance_deg <= 0:
            raise ConfigError("Tolerances must be positive")

    @property
    def template_theta(self) -> float:
        """Nominal left template angle in radians"""
        return math.radians(self.template_theta_deg)

    @property
    def template_stripe_width(self) -> int:
        return self.stripe_width or max(1, self.template_size // 4)

    def replace(self, **changes) -> 'Config':
        """Copy with some fields changed (validated again)"""
        return replace(self, **changes)

    @classmethod
    def from_text(cls, text: str) -> 'Config':
        """
        Parse `key = value` lines

        Args:
            text: Config file contents; `#` starts a comment

        Returns:
            Config with unspecified keys at their defaults

        Raises:
            ConfigError: On unknown or duplicate keys, unparsable values
                or violated invariants
        """
        values = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=number)
            key, value = (part.strip() for part in line.split('=', 1))
            if key not in _KEYS:
                raise ConfigError(f"unknown key {key!r}", line=number)
            name, parse = _KEYS[key]
            if name in values:
                raise ConfigError(f"duplicate key {key!r}", line=number)
            try:
                values[name] = parse(value)
            except (ValueError, KeyError):
                raise ConfigError(f"cannot parse {key} value {value!r}", line=number) from None
        return cls(**values)

    def to_text(self) -> str:
        """Serialise every key, in a form from_text reads back"""
        lines = []
        for key, (name, _) in _KEYS.items():
            value = getattr(self, name)
            if isinstance(value, RangeMode):
                value = value.name.lower()
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"


def parse_config(path: Union[str, Path]) -> Config:
    """Read a config file (UTF-8 `key = value` lines)"""
    return Config.from_text(Path(path).read_text(encoding='utf-8'))
