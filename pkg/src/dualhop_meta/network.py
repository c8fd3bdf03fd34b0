"""Two-tier network parameters, tier ratios and association probabilities.

Tier 1 is the macro base station (MBS) tier and tier 2 the relay tier.
Thresholds are stored as linear SIR ratios; dB conversion happens when a
config file is parsed.
"""

import json
import math
import warnings
from dataclasses import dataclass, replace
from typing import Optional

from .errors import DomainError

__all__ = [
    "TierParams",
    "NetworkConfig",
    "TierRatios",
    "db_to_linear",
    "ratios",
    "association_probability",
    "bias_term",
    "default_config",
    "config_from_dict",
    "load_config",
]


def db_to_linear(value_db):
    return 10.0 ** (float(value_db) / 10.0)


@dataclass(frozen=True)
class TierParams:
    """Per-tier transmit power (W), association bias, path-loss exponent and
    density (nodes per km^2)."""

    power: float
    bias: float
    path_loss_exponent: float
    density: float

    def __post_init__(self):
        for name in ("power", "bias", "density"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive and finite, got {v}")
        if not (math.isfinite(self.path_loss_exponent) and self.path_loss_exponent > 2):
            raise DomainError(
                f"path_loss_exponent must exceed 2, got {self.path_loss_exponent}"
            )


@dataclass(frozen=True)
class NetworkConfig:
    tier1: TierParams
    tier2: TierParams
    theta_d: float
    theta_2: float
    unused_spectrum_fraction: Optional[float] = None
    unused_device_density: Optional[float] = None

    def __post_init__(self):
        for name in ("theta_d", "theta_2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise DomainError(f"{name} must be finite and non-negative, got {v}")
        eta = self.unused_spectrum_fraction
        if eta is not None and not 0.0 <= eta <= 1.0:
            raise DomainError(f"spectrum fraction must lie in [0, 1], got {eta}")
        if eta is not None or self.unused_device_density is not None:
            warnings.warn(
                "spectrum fraction and device density do not enter any SIR "
                "moment; they are stored but ignored",
                stacklevel=3,
            )

    def tier(self, k):
        if k == 1:
            return self.tier1
        if k == 2:
            return self.tier2
        raise DomainError(f"tier index must be 1 or 2, got {k}")

    def with_thresholds(self, theta):
        """Copy with theta_d = theta_2 = ``theta`` (linear)."""
        return replace(self, theta_d=float(theta), theta_2=float(theta))

    def with_tier(self, k, **changes):
        """Copy with fields of tier ``k`` replaced."""
        field = "tier1" if k == 1 else "tier2"
        return replace(self, **{field: replace(self.tier(k), **changes)})


@dataclass(frozen=True)
class TierRatios:
    p_hat: float
    b_hat: float
    lambda_hat: float


def _check_pair(j, k):
    if j not in (1, 2) or k not in (1, 2):
        raise DomainError(f"tier indices must be 1 or 2, got ({j}, {k})")
    if j == k:
        raise DomainError("ratios need two distinct tiers")


def ratios(config, j, k):
    """Power, bias and density ratios of tier ``j`` over tier ``k``."""
    _check_pair(j, k)
    tj, tk = config.tier(j), config.tier(k)
    return TierRatios(
        p_hat=tj.power / tk.power,
        b_hat=tj.bias / tk.bias,
        lambda_hat=tj.density / tk.density,
    )


def bias_term(config, k):
    """lambda_jk (P_jk B_jk)^(2/alpha_j) with j the other tier.

    This is the competing-tier term shared by the association probability and
    every per-tier moment.
    """
    j = 2 if k == 1 else 1
    r = ratios(config, j, k)
    return r.lambda_hat * (r.p_hat * r.b_hat) ** (2.0 / config.tier(j).path_loss_exponent)


def association_probability(config, k):
    """Probability that the typical device is served by tier ``k``."""
    return 1.0 / (bias_term(config, k) + 1.0)


def default_config(theta=1.0):
    """Evaluation scenario: 50 W MBSs at 2/km^2, 5 W relays at 70/km^2,
    unit biases, alpha = 4 on both tiers, equal linear thresholds."""
    return NetworkConfig(
        tier1=TierParams(power=50.0, bias=1.0, path_loss_exponent=4.0, density=2.0),
        tier2=TierParams(power=5.0, bias=1.0, path_loss_exponent=4.0, density=70.0),
        theta_d=float(theta),
        theta_2=float(theta),
    )


_TIER_KEYS = {"power_w", "bias", "alpha", "density_per_km2"}
_TOP_KEYS = {"tier1", "tier2", "theta_d_db", "theta_2_db", "eta", "device_density_per_km2"}


def _tier_from_dict(name, d):
    if not isinstance(d, dict):
        raise DomainError(f"'{name}' must be an object")
    missing = _TIER_KEYS - d.keys()
    if missing:
        raise DomainError(f"'{name}' is missing keys: {sorted(missing)}")
    extra = d.keys() - _TIER_KEYS
    if extra:
        raise DomainError(f"'{name}' has unknown keys: {sorted(extra)}")
    try:
        return TierParams(
            power=float(d["power_w"]),
            bias=float(d["bias"]),
            path_loss_exponent=float(d["alpha"]),
            density=float(d["density_per_km2"]),
        )
    except (TypeError, ValueError) as exc:
        raise DomainError(f"'{name}': {exc}") from None


def config_from_dict(d):
    """Build a NetworkConfig from the JSON schema (thresholds given in dB)."""
    if not isinstance(d, dict):
        raise DomainError("config must be a JSON object")
    extra = d.keys() - _TOP_KEYS
    if extra:
        raise DomainError(f"unknown config keys: {sorted(extra)}")
    for key in ("tier1", "tier2", "theta_d_db", "theta_2_db"):
        if key not in d:
            raise DomainError(f"config is missing '{key}'")
    try:
        theta_d = db_to_linear(d["theta_d_db"])
        theta_2 = db_to_linear(d["theta_2_db"])
        eta = None if d.get("eta") is None else float(d["eta"])
        dev = d.get("device_density_per_km2")
        dev = None if dev is None else float(dev)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"bad threshold or optional field: {exc}") from None
    return NetworkConfig(
        tier1=_tier_from_dict("tier1", d["tier1"]),
        tier2=_tier_from_dict("tier2", d["tier2"]),
        theta_d=theta_d,
        theta_2=theta_2,
        unused_spectrum_fraction=eta,
        unused_device_density=dev,
    )


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: invalid JSON ({exc})") from None
    return config_from_dict(data)
