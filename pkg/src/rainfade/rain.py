"""Rain specific attenuation from the ITU-R P.838 power law.

The frequency-dependent coefficients come from a plain-text constant table
(``data/p838_3_coefficients.txt`` by default). Polarisation and path
elevation mix the horizontal / vertical coefficients, and the resulting
dB/km figure is multiplied by the rained path depth.
"""

from __future__ import annotations

import hashlib
import logging
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import ConfigError, DomainError

log = logging.getLogger(__name__)

COEFFS_ENV_VAR = "RAINFADE_COEFFS"
_PARAMS = ("kH", "kV", "alphaH", "alphaV")


@dataclass(frozen=True)
class RegressionCurve:
    """Gaussian sum plus a linear term in log10 f (f in GHz)."""

    amplitudes: tuple
    centers: tuple
    widths: tuple
    slope: float
    intercept: float

    def __call__(self, frequency_ghz):
        lf = math.log10(frequency_ghz)
        total = sum(
            a * math.exp(-(((lf - b) / c) ** 2))
            for a, b, c in zip(self.amplitudes, self.centers, self.widths)
        )
        return total + self.slope * lf + self.intercept


@dataclass(frozen=True)
class CoefficientTable:
    k_h: RegressionCurve
    k_v: RegressionCurve
    alpha_h: RegressionCurve
    alpha_v: RegressionCurve
    min_ghz: float = 1.0
    max_ghz: float = 100.0
    version: str = ""
    checksum: str = ""


def parse_coefficient_table(text, source="<string>"):
    gauss = {p: [] for p in _PARAMS}
    linear = {}
    meta = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition(":")
            if sep and key.strip() in ("version", "valid_range_ghz"):
                meta[key.strip()] = value.strip()
            continue
        parts = line.split()
        param, kind, numbers = parts[0], parts[1] if len(parts) > 1 else "", parts[2:]
        if param not in gauss:
            raise ConfigError(f"unknown parameter {param!r}", path=source, line=lineno)
        try:
            values = [float(v) for v in numbers]
        except ValueError as exc:
            raise ConfigError(str(exc), path=source, line=lineno) from None
        if kind == "gauss" and len(values) == 3:
            gauss[param].append(values)
        elif kind == "linear" and len(values) == 2:
            linear[param] = values
        else:
            raise ConfigError(f"malformed {kind!r} row", path=source, line=lineno)

    curves = {}
    for param in _PARAMS:
        if not gauss[param] or param not in linear:
            raise ConfigError(f"incomplete constants for {param}", path=source)
        a, b, c = zip(*gauss[param])
        curves[param] = RegressionCurve(a, b, c, *linear[param])

    lo, hi = 1.0, 100.0
    if "valid_range_ghz" in meta:
        lo, hi = (float(v) for v in meta["valid_range_ghz"].split())
    return CoefficientTable(
        curves["kH"],
        curves["kV"],
        curves["alphaH"],
        curves["alphaV"],
        min_ghz=lo,
        max_ghz=hi,
        version=meta.get("version", ""),
        checksum=hashlib.sha256(text.encode()).hexdigest(),
    )


def load_coefficient_table(path=None):
    """Load the constant table from ``path``, $RAINFADE_COEFFS or the bundled file."""
    path = path or os.environ.get(COEFFS_ENV_VAR)
    if path:
        source = Path(path)
        try:
            text = source.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read coefficient table: {exc}", path=source) from None
    else:
        source = "p838_3_coefficients.txt (bundled)"
        text = resources.files("rainfade").joinpath("data/p838_3_coefficients.txt").read_text()
    table = parse_coefficient_table(text, source)
    log.info("loaded rain coefficients %s from %s sha256=%s", table.version, source, table.checksum)
    return table


@lru_cache(maxsize=1)
def default_table():
    return load_coefficient_table(None)


@dataclass(frozen=True)
class RainConfig:
    """Artificial rain over the victim link.

    ``rain_path_depth`` is in km; ``path_elevation_deg`` and
    ``polarization_tilt_deg`` default to a horizontal terrestrial link with
    horizontal polarisation.
    """

    rain_rate: float = 50.0
    path_elevation_deg: float = 0.0
    polarization_tilt_deg: float = 0.0
    rain_path_depth: float = 0.25
    enabled: bool = True

    def __post_init__(self):
        if not self.rain_rate >= 0:
            raise DomainError(f"rain_rate must be non-negative, got {self.rain_rate}")
        if not self.rain_path_depth >= 0:
            raise DomainError(
                f"rain_path_depth must be non-negative, got {self.rain_path_depth}"
            )
        if not 0 <= self.path_elevation_deg <= 90:
            raise DomainError(
                f"path_elevation_deg must lie in [0, 90], got {self.path_elevation_deg}"
            )
        if not -90 <= self.polarization_tilt_deg <= 90:
            raise DomainError(
                f"polarization_tilt_deg must lie in [-90, 90], "
                f"got {self.polarization_tilt_deg}"
            )

    @classmethod
    def from_depth_components(cls, scattering_km, absorption_km, polarization_km, **kwargs):
        """Rained depth given as scattering + absorption + polarisation parts."""
        return cls(rain_path_depth=scattering_km + absorption_km + polarization_km, **kwargs)


def power_law_coefficients(frequency, table=None):
    """Return ``(k_h, k_v, alpha_h, alpha_v)`` at ``frequency`` (Hz)."""
    table = table or default_table()
    f_ghz = frequency / 1e9
    if not table.min_ghz <= f_ghz <= table.max_ghz:
        raise DomainError(
            f"frequency {f_ghz:g} GHz outside coefficient table range "
            f"[{table.min_ghz:g}, {table.max_ghz:g}] GHz"
        )
    return (
        10.0 ** table.k_h(f_ghz),
        10.0 ** table.k_v(f_ghz),
        table.alpha_h(f_ghz),
        table.alpha_v(f_ghz),
    )


def effective_coefficients(k_h, k_v, alpha_h, alpha_v, elevation_deg, tilt_deg):
    """Mix H/V coefficients for a path elevation and polarisation tilt."""
    geom = math.cos(math.radians(elevation_deg)) ** 2 * math.cos(math.radians(2 * tilt_deg))
    k = (k_h + k_v + (k_h - k_v) * geom) / 2.0
    if k == 0:
        raise DomainError("mixed attenuation coefficient is zero")
    alpha = (k_h * alpha_h + k_v * alpha_v + (k_h * alpha_h - k_v * alpha_v) * geom) / (2.0 * k)
    return k, alpha


def specific_attenuation(frequency, rain, table=None):
    """Specific attenuation k R^alpha in dB/km; zero for disabled or no rain."""
    if not rain.enabled or rain.rain_rate == 0:
        return 0.0
    k, alpha = effective_coefficients(
        *power_law_coefficients(frequency, table),
        rain.path_elevation_deg,
        rain.polarization_tilt_deg,
    )
    return k * rain.rain_rate**alpha


def path_attenuation_db(specific, depth_km):
    if specific < 0 or depth_km < 0:
        raise DomainError("specific attenuation and depth must be non-negative")
    return specific * depth_km


def rain_loss_db(frequency, rain, table=None):
    """Total rain penalty on the link in dB."""
    if not rain.enabled:
        return 0.0
    return path_attenuation_db(specific_attenuation(frequency, rain, table), rain.rain_path_depth)
