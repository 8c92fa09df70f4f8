import json
from importlib import resources

import pytest

from rainfade.channel import Scenario, ShadowingMode
from rainfade.config import (
    DEFAULT_THRESHOLD_CAPACITY,
    Config,
    calibrate_threshold_capacity,
    config_from_dict,
    config_to_dict,
    load_config,
    save_config,
)
from rainfade.errors import ConfigError, ValidationError


def _bundled_path():
    return resources.files("rainfade").joinpath("data/default_config.json")


def test_empty_file_gives_defaults(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("")
    cfg = load_config(path)
    assert cfg == Config()
    assert cfg.bandwidth == 800e6
    assert cfg.frequency == 28e9
    assert cfg.noise_power == -106.0
    assert cfg.rain.rain_rate == 50.0
    assert cfg.tx_power == 0.02
    assert cfg.deployment.coverage_range == 250.0
    assert cfg.deployment.ar_coverage_radius == 500.0


def test_none_gives_defaults():
    assert load_config(None) == Config()


def test_bundled_default_matches_code_defaults():
    with resources.as_file(_bundled_path()) as path:
        assert load_config(path) == Config()


def test_stored_threshold_matches_calibration():
    assert calibrate_threshold_capacity(Config()) == pytest.approx(DEFAULT_THRESHOLD_CAPACITY, abs=0.01)
    data = json.loads(_bundled_path().read_text())
    assert data["secrecy"]["threshold_capacity_bps"] == DEFAULT_THRESHOLD_CAPACITY
    assert "calibrat" in data["secrecy"]["_provenance"]


def test_null_threshold_recalibrates():
    cfg = config_from_dict({"secrecy": {"threshold_capacity_bps": None, "threshold_distance_m": 120}})
    assert cfg.secrecy.threshold_capacity == pytest.approx(calibrate_threshold_capacity(cfg))
    assert cfg.secrecy.threshold_capacity > DEFAULT_THRESHOLD_CAPACITY


def test_negative_rain_rate_names_field(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"rain": {"rain_rate_mm_hr": -1}}))
    with pytest.raises(ValidationError) as info:
        load_config(path)
    assert info.value.field == "rain.rain_rate_mm_hr"
    assert "rain_rate_mm_hr" in str(info.value)
    assert str(path) in str(info.value)


def test_syntax_error_reports_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "link": {\n    "frequency_hz": 28e9,\n  }\n}\n')
    with pytest.raises(ConfigError) as info:
        load_config(path)
    assert info.value.line == 4


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")


@pytest.mark.parametrize(
    "data, field",
    [
        ({"link": {"bogus": 1}}, "link.bogus"),
        ({"extra_section": {}}, "extra_section"),
        ({"link": {"bandwidth_hz": 0}}, "link.bandwidth_hz"),
        ({"link": {"distance_m": 0.5}}, "link.distance_m"),
        ({"link": {"scenario": "suburban"}}, "link.scenario"),
        ({"attack": {"p_downlink_success": 2}}, "attack.p_downlink_success"),
        ({"attack": {"max_cycles": 0}}, "attack.max_cycles"),
        ({"profiles": {"urban": {"path_loss_exponent": 9}}}, "profiles.urban.path_loss_exponent"),
    ],
)
def test_validation_errors(data, field):
    with pytest.raises(ValidationError) as info:
        config_from_dict(data)
    assert info.value.field == field


def test_comment_keys_ignored():
    cfg = config_from_dict({"_note": "x", "link": {"_why": "y", "frequency_hz": 38e9}})
    assert cfg.frequency == 38e9


def test_depth_components_are_summed():
    cfg = config_from_dict(
        {"rain": {"depth_components_km": {"scattering": 0.1, "absorption": 0.2, "polarization": 0.05}}}
    )
    assert cfg.rain.rain_path_depth == pytest.approx(0.35)


def test_round_trip(tmp_path):
    cfg = config_from_dict(
        {
            "link": {"frequency_hz": 60e9, "scenario": "rural"},
            "shadowing": {"mode": "sampled"},
            "attack": {"mode": "FD", "seed": 11},
            "deployment": {"user_distances_m": [30, 215, 223]},
        }
    )
    assert cfg.scenario is Scenario.RURAL
    assert cfg.shadowing_mode is ShadowingMode.SAMPLED
    path = tmp_path / "cfg.json"
    save_config(cfg, path)
    assert load_config(path) == cfg
    assert config_from_dict(config_to_dict(cfg)) == cfg


def test_link_uses_scenario_profile():
    cfg = Config()
    assert cfg.link("rural").path_loss_exponent == 2.8
    assert cfg.link().path_loss_exponent == 3.5


def test_schema_documents_every_key():
    from pathlib import Path

    schema = json.loads((Path(__file__).parents[1] / "docs" / "config-schema.json").read_text())
    props = schema["properties"]
    for section, values in config_to_dict(Config()).items():
        assert section in props
        if isinstance(values, dict) and section != "profiles":
            assert set(values) <= set(props[section]["properties"]), section
