"""Experiment sweeps behind each figure and their CSV output."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path

import numpy as np

from .attack import UserNode, select_target, simulate_attempts
from .channel import (
    Scenario,
    ShadowingMode,
    energy_efficiency,
    link_capacity_bps,
    shadowing_value,
)
from .errors import DomainError, RainfadeError
from .missrate import MissRateParams, analytic_missrate, binomial_pmf, poisson_pmf
from .rain import load_coefficient_table, rain_loss_db
from .secrecy import (
    AttackMode,
    attack_sensitivity,
    downlink_success_probability,
    secrecy_capacity,
)

CSV_HEADER = ("experiment", "scenario", "ar", "x_value", "metric", "value", "units")


class ExperimentName(str, enum.Enum):
    SECRECY_VS_DISTANCE = "SecrecyVsDistance"
    ENERGY_VS_DISTANCE = "EnergyVsDistance"
    SECRECY_VS_FREQUENCY = "SecrecyVsFrequency"
    ENERGY_VS_FREQUENCY = "EnergyVsFrequency"
    MISSRATE_VS_ATTEMPTS = "MissrateVsAttempts"
    MISS_PMF_COMPARISON = "MissPmfComparison"
    SENSITIVITY_BARS = "SensitivityBars"
    DEPLOYMENT_SNAPSHOT = "DeploymentSnapshot"


@dataclass(frozen=True)
class ExperimentSpec:
    name: ExperimentName
    start: float
    stop: float
    step: float
    scenarios: tuple = (Scenario.URBAN, Scenario.RURAL)
    ar: tuple = (False, True)
    replicas: int = 1
    seed: int = 0
    points: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "name", ExperimentName(self.name))
        object.__setattr__(self, "scenarios", tuple(Scenario(s) for s in self.scenarios))
        if self.points is None:
            if not self.step > 0:
                raise DomainError("sweep step must be positive")
            if not self.stop > self.start:
                raise DomainError("sweep stop must exceed start")
        elif not self.points:
            raise DomainError("explicit sweep points must be non-empty")
        if self.replicas < 1:
            raise DomainError("replicas must be >= 1")

    def grid(self):
        if self.points is not None:
            return [float(p) for p in self.points]
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [self.start + k * self.step for k in range(count)]


def default_spec(name, config=None, **overrides):
    """Sweep used for each figure unless overridden."""
    name = ExperimentName(name)
    both = (Scenario.URBAN, Scenario.RURAL)
    table = {
        ExperimentName.SECRECY_VS_DISTANCE: dict(start=10.0, stop=250.0, step=10.0),
        ExperimentName.ENERGY_VS_DISTANCE: dict(start=10.0, stop=250.0, step=10.0),
        ExperimentName.SECRECY_VS_FREQUENCY: dict(start=10e9, stop=100e9, step=5e9),
        ExperimentName.ENERGY_VS_FREQUENCY: dict(start=10e9, stop=100e9, step=5e9),
        ExperimentName.MISSRATE_VS_ATTEMPTS: dict(
            start=10, stop=100, step=10, scenarios=(Scenario.URBAN,), ar=(True,), replicas=20
        ),
        ExperimentName.MISS_PMF_COMPARISON: dict(
            start=0, stop=20, step=1, scenarios=(Scenario.URBAN,), ar=(True,)
        ),
        ExperimentName.SENSITIVITY_BARS: dict(start=50.0, stop=250.0, step=50.0, scenarios=both, ar=(True,)),
        ExperimentName.DEPLOYMENT_SNAPSHOT: dict(start=0, stop=1, step=1, scenarios=both, ar=(True,)),
    }
    kw = dict(table[name])
    if name is ExperimentName.DEPLOYMENT_SNAPSHOT and config is not None:
        kw["points"] = tuple(config.deployment.user_distances)
    kw.update(overrides)
    return ExperimentSpec(name, **kw)


@dataclass(frozen=True, order=True)
class MetricsRecord:
    scenario: str
    ar_enabled: bool
    x_value: float
    metric: str
    value: float = field(compare=False)
    units: str = field(compare=False)
    experiment: str = field(compare=False, default="")

    def row(self):
        return (
            self.experiment,
            self.scenario,
            "on" if self.ar_enabled else "off",
            _fmt(self.x_value),
            self.metric,
            _fmt(self.value),
            self.units,
        )


def _fmt(value):
    return format(float(value), ".9g")


@lru_cache(maxsize=8)
def _table(path):
    return load_coefficient_table(path)


def rain_db_for(config, frequency, ar):
    if not ar:
        return 0.0
    return rain_loss_db(frequency, config.rain, _table(config.coefficients_path))


def secrecy_point(config, scenario, distance, frequency, ar, rng=None):
    """(user capacity, eavesdropper capacity) at one sweep point, bit/s."""
    link = config.link(scenario, distance, frequency)
    rain_db = rain_db_for(config, frequency, ar)
    shadow_u = shadow_e = config.profiles[link.scenario].shadow_mu_db
    if config.shadowing_mode is ShadowingMode.SAMPLED:
        model = config.shadowing(scenario)
        shadow_u = shadowing_value(model, rng)
        shadow_e = shadowing_value(model, rng)
    s = config.secrecy
    c_user = link_capacity_bps(link, shadow_db=shadow_u, rain_db=rain_db, thermal_db=config.thermal_db)
    eav = link.with_distance(distance + s.eavesdropper_offset)
    c_eav = link_capacity_bps(
        eav, shadow_db=shadow_e, rain_db=s.eavesdropper_rain_db, thermal_db=config.thermal_db
    )
    return c_user, c_eav


def attack_config_for(config, scenario=None):
    """Attack settings with b_DL taken directly or derived from the eavesdropper's capacity.

    In ``sensitivity`` mode the per-TTI downlink success is a logistic function
    of how far the eavesdropper's capacity exceeds the HD sensitivity of the
    rained user at the configured distance.
    """
    if config.b_dl_source == "direct":
        return config.attack
    scenario = scenario or config.scenario
    c_user, c_eav = secrecy_point(config, scenario, config.distance, config.frequency, True)
    s = config.secrecy
    required = attack_sensitivity(
        c_user, s.threshold_capacity, AttackMode.HD, step=s.capacity_resolution
    )
    p = downlink_success_probability(c_eav, required, config.logistic_slope)
    return replace(config.attack, p_downlink_success=p)


def _channel_metric(kind, config, scenario, x, ar, rng, sweep_distance):
    distance, frequency = (x, config.frequency) if sweep_distance else (config.distance, x)
    c_user, c_eav = secrecy_point(config, scenario, distance, frequency, ar, rng)
    if kind == "secrecy":
        return secrecy_capacity(c_user, c_eav)
    return energy_efficiency(c_user, config.tx_power)


_CHANNEL_EXPERIMENTS = {
    ExperimentName.SECRECY_VS_DISTANCE: ("secrecy", True, "secrecy_rate", "bit/s"),
    ExperimentName.ENERGY_VS_DISTANCE: ("energy", True, "energy_efficiency", "bit/J"),
    ExperimentName.SECRECY_VS_FREQUENCY: ("secrecy", False, "secrecy_rate", "bit/s"),
    ExperimentName.ENERGY_VS_FREQUENCY: ("energy", False, "energy_efficiency", "bit/J"),
}


def _run_channel(spec, config):
    kind, sweep_distance, metric, units = _CHANNEL_EXPERIMENTS[spec.name]
    stochastic = config.shadowing_mode is ShadowingMode.SAMPLED
    replicas = spec.replicas if stochastic else 1
    out = []
    for scenario in spec.scenarios:
        for ar in spec.ar:
            for x in spec.grid():
                values = []
                for r in range(replicas):
                    rng = np.random.default_rng(spec.seed + r)
                    values.append(_channel_metric(kind, config, scenario, x, ar, rng, sweep_distance))
                out.extend(_aggregate(scenario, ar, x, metric, units, values, stochastic))
    return out


def _aggregate(scenario, ar, x, metric, units, values, stochastic):
    mean = float(np.mean(values))
    recs = [MetricsRecord(scenario.value, ar, x, metric, mean, units)]
    if stochastic:
        stderr = float(np.std(values, ddof=1) / math.sqrt(len(values))) if len(values) > 1 else 0.0
        recs.append(MetricsRecord(scenario.value, ar, x, metric + "_stderr", stderr, units))
    return recs


def _run_missrate(spec, config):
    base = attack_config_for(config)
    p_dl_miss = base.p_downlink_miss
    p_ul_miss = 1.0 - base.p_uplink_success
    out = []
    for scenario in spec.scenarios:
        for ar in spec.ar:
            for x in spec.grid():
                attempts = int(round(x))
                params = MissRateParams(attempts, p_dl_miss, p_ul_miss)
                for mode in AttackMode:
                    cfg = replace(base, mode=mode)
                    missed = [
                        simulate_attempts(cfg, attempts, np.random.default_rng(spec.seed + r))
                        for r in range(spec.replicas)
                    ]
                    tag = mode.value.lower()
                    out.extend(
                        _aggregate(scenario, ar, x, f"missed_attempts_{tag}", "count", missed, True)
                    )
                    rate = analytic_missrate(params, mode).value
                    out.append(
                        MetricsRecord(scenario.value, ar, x, f"analytic_miss_rate_{tag}", rate, "probability")
                    )
    return out


def _run_pmf(spec, config):
    attempts = int(round(spec.stop))
    p_miss = attack_config_for(config).p_downlink_miss
    out = []
    for scenario in spec.scenarios:
        for ar in spec.ar:
            for x in spec.grid():
                u = int(round(x))
                out.append(
                    MetricsRecord(scenario.value, ar, x, "binomial_pmf", binomial_pmf(attempts, u, p_miss), "probability")
                )
                out.append(
                    MetricsRecord(scenario.value, ar, x, "poisson_pmf", poisson_pmf(u, attempts * p_miss), "probability")
                )
    return out


def _run_sensitivity(spec, config):
    s = config.secrecy
    out = []
    for scenario in spec.scenarios:
        for ar in spec.ar:
            for x in spec.grid():
                c_user, _ = secrecy_point(config, scenario, x, config.frequency, ar)
                margin = s.fd_margin_fraction * c_user
                for mode in AttackMode:
                    value = attack_sensitivity(
                        c_user, s.threshold_capacity, mode, fd_margin=margin, step=s.capacity_resolution
                    )
                    out.append(
                        MetricsRecord(scenario.value, ar, x, f"sensitivity_{mode.value.lower()}", value, "bit/s")
                    )
    return out


def deployment_snapshot(user_distances, config, scenario=Scenario.URBAN, ar=True):
    """Per-user throughput with and without the attack.

    The attack (rain plus spoofing) hits only the worst-CSI user; everyone else
    keeps its clear-sky capacity. Under attack the target keeps its rained
    capacity only in the attempts the intruder misses.
    """
    if not user_distances:
        raise DomainError("need at least one user")
    users = [
        UserNode(i + 1, d, scenario, config.frequency, config.reference_distance,
                 config.profiles[Scenario(scenario)].path_loss_exponent)
        for i, d in enumerate(user_distances)
    ]
    target = select_target(users)
    att = attack_config_for(config, scenario)
    miss = {
        AttackMode.HD: att.p_downlink_miss,
        AttackMode.FD: 1.0 - att.p_downlink_success * att.p_uplink_success,
    }
    out = []
    for user in users:
        clear, _ = secrecy_point(config, scenario, user.distance, config.frequency, False)
        is_target = user is target
        rained = secrecy_point(config, scenario, user.distance, config.frequency, ar)[0] if is_target else clear
        x = user.distance
        rows = [
            ("is_target", float(is_target), "flag"),
            ("throughput_no_attack", clear, "bit/s"),
            ("throughput_ar", rained, "bit/s"),
        ]
        for mode, p_miss in miss.items():
            under = rained * p_miss if is_target else clear
            rows.append((f"throughput_{mode.value.lower()}_attack", under, "bit/s"))
        out.extend(MetricsRecord(Scenario(scenario).value, ar, x, m, v, u) for m, v, u in rows)
    return out


def _run_deployment(spec, config):
    out = []
    for scenario in spec.scenarios:
        for ar in spec.ar:
            out.extend(deployment_snapshot(spec.grid(), config, scenario, ar))
    return out


_RUNNERS = {
    ExperimentName.MISSRATE_VS_ATTEMPTS: _run_missrate,
    ExperimentName.MISS_PMF_COMPARISON: _run_pmf,
    ExperimentName.SENSITIVITY_BARS: _run_sensitivity,
    ExperimentName.DEPLOYMENT_SNAPSHOT: _run_deployment,
}


def run_experiment(spec, config):
    """Evaluate ``spec`` and return its records in canonical sorted order."""
    runner = _RUNNERS.get(spec.name, _run_channel)
    try:
        records = runner(spec, config)
    except RainfadeError as exc:
        raise DomainError(f"{spec.name.value}: {exc}") from exc
    return sorted(replace(r, experiment=spec.name.value) for r in records)


def write_csv(records, path):
    if not records:
        raise DomainError("no records to write")
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            writer.writerows(r.row() for r in sorted(records))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def read_csv(path):
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise DomainError(f"unexpected CSV header {header}")
        return [
            MetricsRecord(scenario, ar == "on", float(x), metric, float(value), units, experiment)
            for experiment, scenario, ar, x, metric, value, units in reader
        ]
