import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainfade.channel import (
    DEFAULT_PROFILES,
    SPEED_OF_LIGHT,
    LinkConfig,
    Scenario,
    ShadowingMode,
    ShadowingModel,
    capacity_bps,
    dbm_to_watts,
    energy_efficiency,
    link_capacity_bps,
    path_gain_constant,
    path_loss_db,
    shadowing_samples,
    shadowing_value,
    snr_db,
    watts_to_dbm,
)
from rainfade.errors import DomainError

# frozen from a hand calculation: lambda = c / 28 GHz, r0 = 1 m
Q_28GHZ = -61.390943848727
PL_URBAN_100M = 131.390943848727
SNR_URBAN_100M = -12.380643892088
CAP_URBAN_100M = 64854633.0497


def test_gain_constant_is_zero_when_wavelength_matches_sphere():
    assert path_gain_constant(SPEED_OF_LIGHT / (4 * math.pi), 1.0) == pytest.approx(0.0, abs=1e-12)


def test_gain_constant_28ghz():
    assert path_gain_constant(28e9, 1.0) == pytest.approx(Q_28GHZ, abs=1e-9)


def test_default_link_budget():
    link = LinkConfig()
    pl = path_loss_db(link)
    assert pl == pytest.approx(PL_URBAN_100M, abs=1e-9)
    assert snr_db(link, pl) == pytest.approx(SNR_URBAN_100M, abs=1e-9)
    assert link_capacity_bps(link) == pytest.approx(CAP_URBAN_100M, rel=1e-9)


def test_chain_matches_independent_numpy_oracle():
    link = LinkConfig(distance=57.0, path_loss_exponent=2.8, frequency=38e9)
    lam = SPEED_OF_LIGHT / 38e9
    pl = -20 * np.log10(lam / (4 * np.pi)) + 28 * np.log10(57.0) + 1.5 + 2.0
    snr = 10 * np.log10(0.02 * 1e3) - pl + 106
    expected = 800e6 * np.log2(1 + 10 ** (snr / 10))
    assert link_capacity_bps(link, shadow_db=1.5, rain_db=2.0) == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize(
    "snr, bandwidth, expected",
    [
        (0.0, 1e6, 1e6),
        (10 * math.log10(3), 2e6, 4e6),
        (-math.inf, 800e6, 0.0),
        (10 * math.log10(7), 800e6, 2.4e9),
    ],
)
def test_capacity_examples(snr, bandwidth, expected):
    assert capacity_bps(snr, bandwidth) == pytest.approx(expected, rel=1e-12, abs=1e-9)


def test_capacity_rejects_bad_bandwidth():
    with pytest.raises(DomainError):
        capacity_bps(0.0, 0.0)


def test_energy_efficiency():
    assert energy_efficiency(2e9, 0.02) == pytest.approx(1e11)
    with pytest.raises(DomainError):
        energy_efficiency(1.0, 0.0)


def test_power_conversions_round_trip():
    assert watts_to_dbm(0.02) == pytest.approx(13.0103, abs=1e-4)
    assert dbm_to_watts(watts_to_dbm(0.37)) == pytest.approx(0.37)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"distance": 0.5},
        {"frequency": -1.0},
        {"path_loss_exponent": 7.0},
        {"path_loss_exponent": 1.0},
        {"bandwidth": 0.0},
        {"tx_power": 0.0},
    ],
)
def test_link_validation(kwargs):
    with pytest.raises(DomainError):
        LinkConfig(**kwargs)


def test_negative_rain_rejected():
    with pytest.raises(DomainError):
        path_loss_db(LinkConfig(), rain_db=-1.0)


def test_profiles():
    urban = LinkConfig.for_scenario(Scenario.URBAN)
    rural = LinkConfig.for_scenario("rural")
    assert urban.path_loss_exponent == DEFAULT_PROFILES[Scenario.URBAN].path_loss_exponent
    assert rural.path_loss_exponent < urban.path_loss_exponent
    assert link_capacity_bps(rural) > link_capacity_bps(urban)


def test_deterministic_shadowing_ignores_rng():
    model = ShadowingModel(1.5, 4.0, ShadowingMode.DETERMINISTIC)
    rng = np.random.default_rng(3)
    state = rng.bit_generator.state
    assert shadowing_value(model, rng) == 1.5
    assert rng.bit_generator.state == state


def test_sampled_shadowing_moments():
    model = ShadowingModel(0.0, 4.0, ShadowingMode.SAMPLED)
    draws = shadowing_samples(model, np.random.default_rng(2024), 100_000)
    assert abs(draws.mean()) < 0.05
    assert draws.std() == pytest.approx(4.0, rel=0.02)


def test_sampled_shadowing_is_seeded():
    model = ShadowingModel(0.0, 3.0, ShadowingMode.SAMPLED)
    a = shadowing_value(model, np.random.default_rng(9))
    b = shadowing_value(model, np.random.default_rng(9))
    assert a == b


@settings(max_examples=200, deadline=None)
@given(
    d1=st.floats(1.0, 500.0),
    d2=st.floats(1.0, 500.0),
    psi=st.floats(1.6, 6.5),
)
def test_capacity_non_increasing_in_distance(d1, d2, psi):
    near, far = sorted((d1, d2))
    base = LinkConfig(path_loss_exponent=psi)
    assert link_capacity_bps(base.with_distance(far)) <= link_capacity_bps(base.with_distance(near))


@settings(max_examples=200, deadline=None)
@given(rain=st.floats(0.0, 80.0), extra=st.floats(0.0, 20.0))
def test_capacity_non_increasing_in_rain(rain, extra):
    link = LinkConfig()
    assert link_capacity_bps(link, rain_db=rain + extra) <= link_capacity_bps(link, rain_db=rain)
