"""JSON configuration: defaults, validation and round-trip serialisation.

Unknown keys are rejected; keys starting with ``_`` are treated as comments.
The schema is documented in ``docs/config-schema.json``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .attack import AttackConfig
from .channel import (
    DEFAULT_PROFILES,
    PATH_LOSS_EXPONENT_RANGE,
    LinkConfig,
    Scenario,
    ShadowingMode,
    ShadowingModel,
)
from .errors import ConfigError, DomainError, ValidationError
from .rain import RainConfig
from .secrecy import AttackMode, threshold_capacity_at

# Rain-free secrecy capacity of an urban user at the 150 m threshold distance
# with the eavesdropper 25 m behind it (default link and profiles).
# Regenerate with `calibrate_threshold_capacity(Config())` after changing any
# default that feeds the link budget.
DEFAULT_THRESHOLD_CAPACITY = 6655992.94


@dataclass(frozen=True)
class SecrecySettings:
    threshold_capacity: float = DEFAULT_THRESHOLD_CAPACITY
    threshold_distance: float = 150.0
    calibration_scenario: Scenario = Scenario.URBAN
    eavesdropper_offset: float = 25.0
    eavesdropper_rain_db: float = 0.0
    capacity_resolution: float = 1e6
    fd_margin_fraction: float = 0.05


@dataclass(frozen=True)
class DeploymentSettings:
    coverage_range: float = 250.0
    ar_coverage_radius: float = 500.0
    user_distances: tuple = (50.0, 120.0, 223.0)


@dataclass(frozen=True)
class Config:
    frequency: float = 28e9
    distance: float = 100.0
    reference_distance: float = 1.0
    tx_power: float = 0.02
    noise_power: float = -106.0
    bandwidth: float = 800e6
    thermal_db: float = 0.0
    scenario: Scenario = Scenario.URBAN
    profiles: dict = field(default_factory=lambda: dict(DEFAULT_PROFILES))
    shadowing_mode: ShadowingMode = ShadowingMode.DETERMINISTIC
    rain: RainConfig = field(default_factory=RainConfig)
    secrecy: SecrecySettings = field(default_factory=SecrecySettings)
    attack: AttackConfig = field(default_factory=AttackConfig)
    deployment: DeploymentSettings = field(default_factory=DeploymentSettings)
    b_dl_source: str = "direct"
    logistic_slope: float = 1e-8  # 1/(bit/s)
    coefficients_path: str | None = None

    def link(self, scenario=None, distance=None, frequency=None):
        scenario = Scenario(scenario or self.scenario)
        return LinkConfig(
            frequency=self.frequency if frequency is None else frequency,
            distance=self.distance if distance is None else distance,
            reference_distance=self.reference_distance,
            tx_power=self.tx_power,
            noise_power=self.noise_power,
            bandwidth=self.bandwidth,
            path_loss_exponent=self.profiles[scenario].path_loss_exponent,
            scenario=scenario,
        )

    def shadowing(self, scenario=None):
        profile = self.profiles[Scenario(scenario or self.scenario)]
        return ShadowingModel.from_profile(profile, self.shadowing_mode)


def calibrate_threshold_capacity(config):
    s = config.secrecy
    return threshold_capacity_at(
        config.link(s.calibration_scenario), s.eavesdropper_offset, s.threshold_distance
    )


# JSON key -> dataclass attribute, one map per section
_LINK_KEYS = {
    "frequency_hz": "frequency",
    "distance_m": "distance",
    "reference_distance_m": "reference_distance",
    "tx_power_w": "tx_power",
    "noise_power_dbm": "noise_power",
    "bandwidth_hz": "bandwidth",
    "thermal_db": "thermal_db",
    "scenario": "scenario",
}
_PROFILE_KEYS = {
    "path_loss_exponent": "path_loss_exponent",
    "shadow_mu_db": "shadow_mu_db",
    "shadow_sigma_db": "shadow_sigma_db",
}
_RAIN_KEYS = {
    "rain_rate_mm_hr": "rain_rate",
    "path_elevation_deg": "path_elevation_deg",
    "polarization_tilt_deg": "polarization_tilt_deg",
    "rain_path_depth_km": "rain_path_depth",
    "enabled": "enabled",
}
_SECRECY_KEYS = {
    "threshold_capacity_bps": "threshold_capacity",
    "threshold_distance_m": "threshold_distance",
    "calibration_scenario": "calibration_scenario",
    "eavesdropper_offset_m": "eavesdropper_offset",
    "eavesdropper_rain_db": "eavesdropper_rain_db",
    "capacity_resolution_bps": "capacity_resolution",
    "fd_margin_fraction": "fd_margin_fraction",
}
_ATTACK_KEYS = {
    "mode": "mode",
    "p_downlink_success": "p_downlink_success",
    "p_uplink_success": "p_uplink_success",
    "ping_flood_ttis": "ping_flood_ttis",
    "max_cycles": "max_cycles",
    "an_power_w": "an_power",
    "decode_threshold_db": "decode_threshold_db",
    "seed": "seed",
    "b_dl_source": "b_dl_source",
    "logistic_slope_per_bps": "logistic_slope",
}
_DEPLOYMENT_KEYS = {
    "coverage_range_m": "coverage_range",
    "ar_coverage_radius_m": "ar_coverage_radius",
    "user_distances_m": "user_distances",
}
_DEPTH_PARTS = ("scattering", "absorption", "polarization")


def _fail(field_name, message):
    raise ValidationError(message, field=field_name)


def _number(section, key, value):
    name = f"{section}.{key}"
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(name, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        _fail(name, "must be finite")
    return value


def _positive(section, key, value):
    if _number(section, key, value) <= 0:
        _fail(f"{section}.{key}", f"must be positive, got {value}")
    return value


def _non_negative(section, key, value):
    if _number(section, key, value) < 0:
        _fail(f"{section}.{key}", f"must be non-negative, got {value}")
    return value


def _probability(section, key, value):
    if not 0 <= _number(section, key, value) <= 1:
        _fail(f"{section}.{key}", f"must lie in [0, 1], got {value}")
    return value


def _int_at_least(section, key, value, lo):
    if isinstance(value, bool) or not isinstance(value, int) or value < lo:
        _fail(f"{section}.{key}", f"must be an integer >= {lo}, got {value!r}")
    return value


def _enum(section, key, value, enum_cls):
    try:
        return enum_cls(value)
    except ValueError:
        choices = ", ".join(e.value for e in enum_cls)
        _fail(f"{section}.{key}", f"must be one of {choices}, got {value!r}")


def _section(data, name, keys, extra=()):
    raw = data.get(name, {})
    if not isinstance(raw, dict):
        _fail(name, "must be an object")
    out = {}
    for key, value in raw.items():
        if key.startswith("_"):
            continue
        if key in extra:
            out[key] = value
        elif key in keys:
            out[keys[key]] = value
        else:
            _fail(f"{name}.{key}", "unknown key")
    return out


def config_from_dict(data):
    if not isinstance(data, dict):
        raise ValidationError("top level must be a JSON object")
    known = {"link", "profiles", "shadowing", "rain", "secrecy", "attack", "deployment", "coefficients_path"}
    for key in data:
        if not key.startswith("_") and key not in known:
            _fail(key, "unknown section")

    base = Config()
    kw = {}

    link = _section(data, "link", _LINK_KEYS)
    for key, attr in _LINK_KEYS.items():
        if attr not in link:
            continue
        value = link[attr]
        if attr == "scenario":
            kw[attr] = _enum("link", key, value, Scenario)
        elif attr in ("noise_power", "thermal_db"):
            kw[attr] = float(_number("link", key, value))
        else:
            kw[attr] = float(_positive("link", key, value))
    distance = kw.get("distance", base.distance)
    ref = kw.get("reference_distance", base.reference_distance)
    if distance < ref:
        _fail("link.distance_m", f"must be >= reference_distance_m ({ref})")

    profiles = dict(base.profiles)
    raw_profiles = data.get("profiles", {})
    if not isinstance(raw_profiles, dict):
        _fail("profiles", "must be an object")
    for name, raw in raw_profiles.items():
        if name.startswith("_"):
            continue
        scenario = _enum("profiles", name, name, Scenario)
        section = f"profiles.{name}"
        values = _section(raw_profiles, name, _PROFILE_KEYS)
        if "path_loss_exponent" in values:
            lo, hi = PATH_LOSS_EXPONENT_RANGE
            psi = _number(section, "path_loss_exponent", values["path_loss_exponent"])
            if not lo <= psi <= hi:
                _fail(f"{section}.path_loss_exponent", f"must lie in [{lo}, {hi}], got {psi}")
        if "shadow_mu_db" in values:
            _number(section, "shadow_mu_db", values["shadow_mu_db"])
        if "shadow_sigma_db" in values:
            _non_negative(section, "shadow_sigma_db", values["shadow_sigma_db"])
        profiles[scenario] = replace(profiles[scenario], **{k: float(v) for k, v in values.items()})
    kw["profiles"] = profiles

    shadowing = _section(data, "shadowing", {"mode": "mode"})
    if "mode" in shadowing:
        kw["shadowing_mode"] = _enum("shadowing", "mode", shadowing["mode"], ShadowingMode)

    rain = _section(data, "rain", _RAIN_KEYS, extra=("depth_components_km",))
    rain_kw = {}
    for key, attr in _RAIN_KEYS.items():
        if attr not in rain:
            continue
        value = rain[attr]
        if attr == "enabled":
            if not isinstance(value, bool):
                _fail(f"rain.{key}", f"must be true or false, got {value!r}")
            rain_kw[attr] = value
        elif attr in ("rain_rate", "rain_path_depth"):
            rain_kw[attr] = float(_non_negative("rain", key, value))
        elif attr == "path_elevation_deg":
            if not 0 <= _number("rain", key, value) <= 90:
                _fail(f"rain.{key}", f"must lie in [0, 90], got {value}")
            rain_kw[attr] = float(value)
        else:
            if not -90 <= _number("rain", key, value) <= 90:
                _fail(f"rain.{key}", f"must lie in [-90, 90], got {value}")
            rain_kw[attr] = float(value)
    if "depth_components_km" in rain:
        parts = rain["depth_components_km"]
        if "rain_path_depth" in rain_kw:
            _fail("rain.depth_components_km", "give either rain_path_depth_km or depth_components_km")
        if not isinstance(parts, dict) or set(parts) - set(_DEPTH_PARTS):
            _fail("rain.depth_components_km", f"must be an object with keys {_DEPTH_PARTS}")
        rain_kw["rain_path_depth"] = float(
            sum(_non_negative("rain.depth_components_km", k, parts.get(k, 0.0)) for k in _DEPTH_PARTS)
        )
    kw["rain"] = RainConfig(**rain_kw)

    secrecy = _section(data, "secrecy", _SECRECY_KEYS)
    sec_kw = {}
    for key, attr in _SECRECY_KEYS.items():
        if attr not in secrecy:
            continue
        value = secrecy[attr]
        if attr == "calibration_scenario":
            sec_kw[attr] = _enum("secrecy", key, value, Scenario)
        elif attr in ("threshold_distance", "capacity_resolution"):
            sec_kw[attr] = float(_positive("secrecy", key, value))
        elif attr == "threshold_capacity" and value is None:
            sec_kw[attr] = None
        else:
            sec_kw[attr] = float(_non_negative("secrecy", key, value))
    calibrate = sec_kw.get("threshold_capacity", 0.0) is None
    if calibrate:
        del sec_kw["threshold_capacity"]
    kw["secrecy"] = SecrecySettings(**sec_kw)

    attack = _section(data, "attack", _ATTACK_KEYS)
    att_kw = {}
    for key, attr in _ATTACK_KEYS.items():
        if attr not in attack:
            continue
        value = attack[attr]
        if attr == "mode":
            att_kw[attr] = _enum("attack", key, value, AttackMode)
        elif attr in ("p_downlink_success", "p_uplink_success"):
            att_kw[attr] = float(_probability("attack", key, value))
        elif attr in ("ping_flood_ttis", "max_cycles"):
            att_kw[attr] = _int_at_least("attack", key, value, 1)
        elif attr == "seed":
            att_kw[attr] = _int_at_least("attack", key, value, 0)
        elif attr == "an_power":
            att_kw[attr] = float(_non_negative("attack", key, value))
        elif attr == "decode_threshold_db":
            att_kw[attr] = float(_number("attack", key, value))
        elif attr == "b_dl_source":
            if value not in ("direct", "sensitivity"):
                _fail(f"attack.{key}", f"must be 'direct' or 'sensitivity', got {value!r}")
            kw["b_dl_source"] = value
        elif attr == "logistic_slope":
            kw["logistic_slope"] = float(_positive("attack", key, value))
    kw["attack"] = AttackConfig(**att_kw)

    deployment = _section(data, "deployment", _DEPLOYMENT_KEYS)
    dep_kw = {}
    for key, attr in _DEPLOYMENT_KEYS.items():
        if attr not in deployment:
            continue
        value = deployment[attr]
        if attr == "user_distances":
            if not isinstance(value, list) or not value:
                _fail(f"deployment.{key}", "must be a non-empty list")
            dep_kw[attr] = tuple(float(_positive("deployment", key, v)) for v in value)
        else:
            dep_kw[attr] = float(_positive("deployment", key, value))
    kw["deployment"] = DeploymentSettings(**dep_kw)

    if "coefficients_path" in data:
        kw["coefficients_path"] = data["coefficients_path"]

    try:
        config = Config(**kw)
        config.link()
    except DomainError as exc:
        raise ValidationError(str(exc)) from None
    if calibrate:
        config = replace(
            config,
            secrecy=replace(config.secrecy, threshold_capacity=calibrate_threshold_capacity(config)),
        )
    return config


def config_to_dict(config):
    def section(obj, keys):
        return {key: _jsonable(getattr(obj, attr)) for key, attr in keys.items()}

    link = {key: _jsonable(getattr(config, attr)) for key, attr in _LINK_KEYS.items()}
    attack = {}
    for key, attr in _ATTACK_KEYS.items():
        if attr == "b_dl_source":
            attack[key] = config.b_dl_source
        elif attr == "logistic_slope":
            attack[key] = config.logistic_slope
        else:
            attack[key] = _jsonable(getattr(config.attack, attr))
    out = {
        "link": link,
        "profiles": {s.value: section(p, _PROFILE_KEYS) for s, p in config.profiles.items()},
        "shadowing": {"mode": config.shadowing_mode.value},
        "rain": section(config.rain, _RAIN_KEYS),
        "secrecy": section(config.secrecy, _SECRECY_KEYS),
        "attack": attack,
        "deployment": section(config.deployment, _DEPLOYMENT_KEYS),
    }
    if config.coefficients_path is not None:
        out["coefficients_path"] = config.coefficients_path
    return out


def _jsonable(value):
    if hasattr(value, "value"):
        return value.value
    if isinstance(value, tuple):
        return list(value)
    return value


def load_config(path=None):
    """Read and validate a JSON config; ``None`` or an empty file gives the defaults."""
    if path is None:
        return Config()
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", path=path) from None
    if not text.strip():
        return Config()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, path=path, line=exc.lineno) from None
    try:
        return config_from_dict(data)
    except ValidationError as exc:
        raise ValidationError(exc.message, path=path, field=exc.field) from None


def save_config(config, path):
    Path(path).write_text(json.dumps(config_to_dict(config), indent=2) + "\n")
