import math
from dataclasses import replace

import pytest

from rainfade.channel import LinkConfig, Scenario, ShadowingMode, link_capacity_bps
from rainfade.config import Config
from rainfade.errors import DomainError
from rainfade.experiments import (
    CSV_HEADER,
    ExperimentName,
    ExperimentSpec,
    deployment_snapshot,
    default_spec,
    read_csv,
    run_experiment,
    write_csv,
)
from rainfade.rain import RainConfig, rain_loss_db
from rainfade.secrecy import secrecy_capacity

CFG = Config()


def _by(records, **match):
    return [r for r in records if all(getattr(r, k) == v for k, v in match.items())]


def test_secrecy_vs_distance_row_count():
    records = run_experiment(default_spec("SecrecyVsDistance", CFG), CFG)
    assert len(records) == 25 * 2 * 2
    assert records == sorted(records)
    assert {r.experiment for r in records} == {"SecrecyVsDistance"}


def test_secrecy_rows_match_pure_pipeline():
    records = run_experiment(default_spec("SecrecyVsDistance", CFG), CFG)
    rain_db = rain_loss_db(28e9, RainConfig())
    for rec in records[::20]:
        psi = 3.5 if rec.scenario == "urban" else 2.8
        user = LinkConfig(distance=rec.x_value, path_loss_exponent=psi)
        eav = user.with_distance(rec.x_value + 25.0)
        expected = secrecy_capacity(
            link_capacity_bps(user, rain_db=rain_db if rec.ar_enabled else 0.0),
            link_capacity_bps(eav),
        )
        assert rec.value == pytest.approx(expected, rel=1e-12)


def test_pmf_comparison_columns():
    records = run_experiment(default_spec("MissPmfComparison", CFG), CFG)
    assert len(records) == 2 * 21
    for metric in ("binomial_pmf", "poisson_pmf"):
        total = math.fsum(r.value for r in records if r.metric == metric)
        assert total == pytest.approx(1.0, abs=0.01)


def test_missrate_replicas_and_stderr():
    spec = default_spec("MissrateVsAttempts", CFG, replicas=5)
    records = run_experiment(spec, CFG)
    metrics = {r.metric for r in records}
    assert metrics == {
        "missed_attempts_hd", "missed_attempts_hd_stderr",
        "missed_attempts_fd", "missed_attempts_fd_stderr",
        "analytic_miss_rate_hd", "analytic_miss_rate_fd",
    }
    assert len(records) == len(spec.grid()) * 6


def test_sampled_shadowing_adds_stderr_rows():
    cfg = replace(CFG, shadowing_mode=ShadowingMode.SAMPLED)
    spec = default_spec("SecrecyVsDistance", cfg, replicas=4, scenarios=("urban",), ar=(True,))
    records = run_experiment(spec, cfg)
    assert len(records) == 25 * 2
    assert all(r.value > 0 for r in records if r.metric.endswith("_stderr"))


@pytest.mark.parametrize("name", [e.value for e in ExperimentName])
def test_every_experiment_deterministic(name):
    a = run_experiment(default_spec(name, CFG, replicas=2), CFG)
    b = run_experiment(default_spec(name, CFG, replicas=2), CFG)
    assert [r.row() for r in a] == [r.row() for r in b]


def test_csv_line_count_and_bytes(tmp_path):
    records = run_experiment(default_spec("SecrecyVsDistance", CFG), CFG)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(records, p1)
    write_csv(list(reversed(records)), p2)
    raw = p1.read_bytes()
    assert raw == p2.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert len(lines) == 101
    assert lines[0] == ",".join(CSV_HEADER)


def test_csv_parse_back(tmp_path):
    records = run_experiment(default_spec("EnergyVsFrequency", CFG), CFG)
    path = tmp_path / "e.csv"
    write_csv(records, path)
    back = read_csv(path)
    assert len(back) == len(records)
    for rec, got in zip(records, back):
        assert got.value == pytest.approx(rec.value, rel=1e-8)
        assert (got.scenario, got.ar_enabled, got.metric) == (rec.scenario, rec.ar_enabled, rec.metric)
    ar_column = {line.split(",")[2] for line in path.read_text().splitlines()[1:]}
    assert ar_column == {"on", "off"}


def test_write_csv_rejects_empty(tmp_path):
    with pytest.raises(DomainError):
        write_csv([], tmp_path / "x.csv")


@pytest.mark.parametrize(
    "kwargs",
    [{"step": 0.0}, {"stop": 5.0}, {"replicas": 0}, {"points": ()}],
)
def test_spec_validation(kwargs):
    base = dict(name="SecrecyVsDistance", start=10.0, stop=250.0, step=10.0)
    base.update(kwargs)
    with pytest.raises(DomainError):
        ExperimentSpec(**base)


def test_domain_error_names_experiment():
    spec = default_spec("SecrecyVsFrequency", CFG, start=10e9, stop=200e9, step=10e9)
    with pytest.raises(DomainError, match="SecrecyVsFrequency"):
        run_experiment(spec, CFG)


def test_deployment_targets_farthest_user():
    records = deployment_snapshot([50.0, 120.0, 223.0], CFG, Scenario.URBAN)
    targets = [r.x_value for r in records if r.metric == "is_target" and r.value == 1.0]
    assert targets == [223.0]
    for metric in ("throughput_hd_attack", "throughput_fd_attack", "throughput_ar"):
        under = _by(records, x_value=223.0, metric=metric)[0].value
        clear = _by(records, x_value=223.0, metric="throughput_no_attack")[0].value
        assert under < clear


def test_deployment_rural_neighbour():
    records = deployment_snapshot([215.0, 223.0], CFG, Scenario.RURAL)
    far = _by(records, x_value=223.0, metric="throughput_ar")[0].value
    near = _by(records, x_value=215.0, metric="throughput_ar")[0].value
    assert far < near


def test_deployment_single_user():
    records = deployment_snapshot([80.0], CFG)
    assert _by(records, metric="is_target")[0].value == 1.0
    with pytest.raises(DomainError):
        deployment_snapshot([], CFG)


def test_fd_attack_hurts_target_less_than_hd():
    # FD needs both links, so the intruder succeeds less often
    records = deployment_snapshot([223.0], CFG)
    hd = _by(records, metric="throughput_hd_attack")[0].value
    fd = _by(records, metric="throughput_fd_attack")[0].value
    assert hd < fd
