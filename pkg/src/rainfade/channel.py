"""Large-scale link budget for a single transmitter to receiver link.

Everything here works in the power / dB domain: a path-gain constant from
the free-space ratio at the reference distance, log-distance path loss with
log-normal shadowing (plus optional rain and thermal terms), SNR, Shannon
capacity and energy efficiency.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError

SPEED_OF_LIGHT = 299_792_458.0  # m/s
# dB <-> natural-log scale factor of the log-normal shadowing density
DB_PER_NEPER = 10.0 / math.log(10.0)

PATH_LOSS_EXPONENT_RANGE = (1.6, 6.5)


class Scenario(str, enum.Enum):
    RURAL = "rural"
    URBAN = "urban"


@dataclass(frozen=True)
class ScenarioProfile:
    """Propagation defaults attached to a deployment scenario."""

    path_loss_exponent: float
    shadow_mu_db: float = 0.0
    shadow_sigma_db: float = 0.0


DEFAULT_PROFILES = {
    Scenario.URBAN: ScenarioProfile(path_loss_exponent=3.5, shadow_sigma_db=4.0),
    Scenario.RURAL: ScenarioProfile(path_loss_exponent=2.8, shadow_sigma_db=3.0),
}


def watts_to_dbm(power_w):
    if power_w <= 0:
        raise DomainError(f"power must be positive, got {power_w} W")
    return 10.0 * math.log10(power_w) + 30.0


def dbm_to_watts(power_dbm):
    return 10.0 ** ((power_dbm - 30.0) / 10.0)


def db_to_linear(value_db):
    return 10.0 ** (value_db / 10.0)


@dataclass(frozen=True)
class LinkConfig:
    """One transmitter -> receiver link.

    ``tx_power`` is in watts, ``noise_power`` in dBm.
    """

    frequency: float = 28e9
    distance: float = 100.0
    reference_distance: float = 1.0
    tx_power: float = 0.02
    noise_power: float = -106.0
    bandwidth: float = 800e6
    path_loss_exponent: float = 3.5
    scenario: Scenario = Scenario.URBAN

    def __post_init__(self):
        if not self.frequency > 0:
            raise DomainError(f"frequency must be positive, got {self.frequency}")
        if not self.reference_distance > 0:
            raise DomainError(
                f"reference_distance must be positive, got {self.reference_distance}"
            )
        if not self.distance >= self.reference_distance:
            raise DomainError(
                f"distance {self.distance} m is below the reference distance "
                f"{self.reference_distance} m"
            )
        if not self.bandwidth > 0:
            raise DomainError(f"bandwidth must be positive, got {self.bandwidth}")
        if not self.tx_power > 0:
            raise DomainError(f"tx_power must be positive, got {self.tx_power}")
        lo, hi = PATH_LOSS_EXPONENT_RANGE
        if not lo <= self.path_loss_exponent <= hi:
            raise DomainError(
                f"path_loss_exponent {self.path_loss_exponent} outside [{lo}, {hi}]"
            )
        object.__setattr__(self, "scenario", Scenario(self.scenario))

    @classmethod
    def for_scenario(cls, scenario, profiles=None, **kwargs):
        """Build a link whose exponent comes from the scenario profile."""
        scenario = Scenario(scenario)
        profile = (profiles or DEFAULT_PROFILES)[scenario]
        kwargs.setdefault("path_loss_exponent", profile.path_loss_exponent)
        return cls(scenario=scenario, **kwargs)

    @property
    def tx_power_dbm(self):
        return watts_to_dbm(self.tx_power)

    def with_distance(self, distance):
        return replace(self, distance=distance)


class ShadowingMode(str, enum.Enum):
    DETERMINISTIC = "deterministic"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class ShadowingModel:
    mu_db: float = 0.0
    sigma_db: float = 0.0
    mode: ShadowingMode = ShadowingMode.DETERMINISTIC

    def __post_init__(self):
        if not self.sigma_db >= 0:
            raise DomainError(f"sigma_db must be non-negative, got {self.sigma_db}")
        object.__setattr__(self, "mode", ShadowingMode(self.mode))

    @classmethod
    def from_profile(cls, profile, mode=ShadowingMode.DETERMINISTIC):
        return cls(profile.shadow_mu_db, profile.shadow_sigma_db, mode)

    def linear_mean(self):
        """Mean of the linear-scale log-normal variable."""
        return math.exp(
            self.mu_db / DB_PER_NEPER + self.sigma_db**2 / (2 * DB_PER_NEPER**2)
        )


def path_gain_constant(frequency, reference_distance):
    """Free-space gain at the reference distance, 20 log10(lambda / 4 pi r0), in dB."""
    if not frequency > 0 or not reference_distance > 0:
        raise DomainError(
            f"frequency and reference_distance must be positive, "
            f"got {frequency} Hz, {reference_distance} m"
        )
    wavelength = SPEED_OF_LIGHT / frequency
    return 20.0 * math.log10(wavelength / (4.0 * math.pi * reference_distance))


def path_loss_db(link, shadow_db=0.0, rain_db=0.0, thermal_db=0.0):
    """Log-distance path loss in dB including shadowing, rain and thermal terms."""
    if link.distance < link.reference_distance:
        raise DomainError("distance is below the reference distance")
    if rain_db < 0:
        raise DomainError(f"rain attenuation must be non-negative, got {rain_db}")
    q_db = path_gain_constant(link.frequency, link.reference_distance)
    spreading = 10.0 * link.path_loss_exponent * math.log10(
        link.distance / link.reference_distance
    )
    return -q_db + spreading + shadow_db + rain_db + thermal_db


def shadowing_value(model, rng):
    """One shadowing realisation in dB.

    Deterministic mode never touches ``rng``.
    """
    if model.mode is ShadowingMode.DETERMINISTIC or model.sigma_db == 0:
        return float(model.mu_db)
    return float(rng.normal(model.mu_db, model.sigma_db))


def snr_db(link, path_loss):
    """Received SNR in dB: P_t(dBm) - path loss - noise(dBm)."""
    return link.tx_power_dbm - path_loss - link.noise_power


def capacity_bps(snr_db, bandwidth):
    """Shannon capacity B log2(1 + snr) in bit/s. ``snr_db`` may be -inf."""
    if not bandwidth > 0:
        raise DomainError(f"bandwidth must be positive, got {bandwidth}")
    snr = 10.0 ** (snr_db / 10.0) if snr_db != -math.inf else 0.0
    return bandwidth * math.log1p(snr) / math.log(2.0)


def energy_efficiency(capacity, total_power):
    """Delivered bits per joule of radiated power."""
    if not total_power > 0:
        raise DomainError(f"total_power must be positive, got {total_power}")
    return capacity / total_power


def link_capacity_bps(link, shadow_db=0.0, rain_db=0.0, thermal_db=0.0):
    """Capacity of ``link`` through the full path loss -> SNR -> Shannon chain."""
    pl = path_loss_db(link, shadow_db, rain_db, thermal_db)
    return capacity_bps(snr_db(link, pl), link.bandwidth)


def shadowing_samples(model, rng, size):
    """Vector of shadowing draws, for Monte Carlo sweeps."""
    if model.mode is ShadowingMode.DETERMINISTIC or model.sigma_db == 0:
        return np.full(size, float(model.mu_db))
    return rng.normal(model.mu_db, model.sigma_db, size)
