"""Command-line entry point.

    rainfade link        link budget for the configured user
    rainfade rain        rain coefficients and path attenuation
    rainfade secrecy     secrecy capacity, feasibility and required rain
    rainfade attack      one simulated RRC attack trace
    rainfade experiment  <name>  one figure's sweep as CSV

Exit codes: 0 success, 2 configuration error, 3 domain error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from dataclasses import replace

import numpy as np

from . import channel, rain, secrecy
from .attack import run_rrc_attack
from .config import load_config
from .errors import ConfigError, DomainError, SearchExhaustedError
from .experiments import (
    CSV_HEADER,
    ExperimentName,
    attack_config_for,
    default_spec,
    rain_db_for,
    run_experiment,
    secrecy_point,
    write_csv,
)

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN = 0, 2, 3


def _common(parser):
    parser.add_argument("--config", help="JSON configuration file")
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument("--seed", type=int, help="override the random seed")
    parser.add_argument("--replicas", type=int, help="replicas for stochastic experiments")
    parser.add_argument("--coefficients", help="rain coefficient table (or $RAINFADE_COEFFS)")
    parser.add_argument("--scenario", choices=[s.value for s in channel.Scenario])
    parser.add_argument("--distance", type=float, help="user distance in m")
    parser.add_argument("--frequency", type=float, help="carrier frequency in Hz")
    parser.add_argument("--no-rain", action="store_true", help="disable artificial rain")


def build_parser():
    parser = argparse.ArgumentParser(prog="rainfade", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("link", "link budget for one user"),
        ("rain", "rain coefficients and attenuation"),
        ("secrecy", "secrecy capacity and required rain attenuation"),
        ("attack", "simulate one RRC attack"),
    ]:
        _common(sub.add_parser(name, help=help_text))
    exp = sub.add_parser("experiment", help="run one figure's sweep and write CSV")
    exp.add_argument("name", choices=[e.value for e in ExperimentName])
    _common(exp)
    return parser


def _resolve_config(args):
    config = load_config(args.config)
    updates = {}
    if args.coefficients:
        updates["coefficients_path"] = args.coefficients
    elif config.coefficients_path is None and os.environ.get(rain.COEFFS_ENV_VAR):
        updates["coefficients_path"] = os.environ[rain.COEFFS_ENV_VAR]
    if args.scenario:
        updates["scenario"] = channel.Scenario(args.scenario)
    if args.distance is not None:
        updates["distance"] = args.distance
    if args.frequency is not None:
        updates["frequency"] = args.frequency
    if args.no_rain:
        updates["rain"] = replace(config.rain, enabled=False)
    if args.seed is not None:
        updates["attack"] = replace(config.attack, seed=args.seed)
    config = replace(config, **updates)
    config.link()
    return config


def _kv_lines(pairs):
    return "".join(f"{k}={format(v, '.9g') if isinstance(v, float) else v}\n" for k, v in pairs)


def cmd_link(config, args):
    link = config.link()
    rain_db = rain_db_for(config, config.frequency, config.rain.enabled)
    pl = channel.path_loss_db(link, config.profiles[link.scenario].shadow_mu_db, rain_db, config.thermal_db)
    snr = channel.snr_db(link, pl)
    cap = channel.capacity_bps(snr, link.bandwidth)
    return _kv_lines([
        ("scenario", link.scenario.value),
        ("distance_m", float(link.distance)),
        ("frequency_hz", float(link.frequency)),
        ("path_gain_constant_db", channel.path_gain_constant(link.frequency, link.reference_distance)),
        ("rain_db", rain_db),
        ("path_loss_db", pl),
        ("snr_db", snr),
        ("capacity_bps", cap),
        ("energy_efficiency_bit_per_j", channel.energy_efficiency(cap, link.tx_power)),
    ])


def cmd_rain(config, args):
    table = rain.load_coefficient_table(config.coefficients_path)
    k_h, k_v, a_h, a_v = rain.power_law_coefficients(config.frequency, table)
    k, a = rain.effective_coefficients(
        k_h, k_v, a_h, a_v, config.rain.path_elevation_deg, config.rain.polarization_tilt_deg
    )
    specific = rain.specific_attenuation(config.frequency, config.rain, table)
    return _kv_lines([
        ("frequency_hz", float(config.frequency)),
        ("k_h", k_h), ("k_v", k_v), ("alpha_h", a_h), ("alpha_v", a_v),
        ("k", k), ("alpha", a),
        ("rain_rate_mm_hr", float(config.rain.rain_rate)),
        ("specific_attenuation_db_per_km", specific),
        ("rain_path_depth_km", float(config.rain.rain_path_depth)),
        ("path_attenuation_db", rain.rain_loss_db(config.frequency, config.rain, table)),
        ("coefficients_sha256", table.checksum),
    ])


def cmd_secrecy(config, args):
    c_user, c_eav = secrecy_point(config, config.scenario, config.distance, config.frequency, False)
    rain_db = rain_db_for(config, config.frequency, config.rain.enabled)
    c_t = config.secrecy.threshold_capacity
    c_s = secrecy.secrecy_capacity(c_user, c_eav)
    c_s_ar = secrecy.ar_degraded_secrecy(config.link(), rain_db, c_eav)
    try:
        required = secrecy.required_ar_attenuation(config.link(), c_eav, c_t)
    except SearchExhaustedError:
        required = float("nan")
    return _kv_lines([
        ("user_capacity_bps", c_user),
        ("eavesdropper_capacity_bps", c_eav),
        ("threshold_capacity_bps", c_t),
        ("secrecy_capacity_bps", c_s),
        ("rain_db", rain_db),
        ("ar_secrecy_capacity_bps", c_s_ar),
        ("attack_feasible", int(secrecy.attack_feasible(c_s, c_t))),
        ("attack_feasible_with_ar", int(secrecy.attack_feasible(c_s_ar, c_t))),
        ("required_ar_attenuation_db", required),
    ])


def cmd_attack(config, args):
    att = attack_config_for(config)
    trace = run_rrc_attack(att, np.random.default_rng(att.seed))
    return trace.to_text()


def cmd_experiment(config, args):
    overrides = {"seed": config.attack.seed}
    if args.replicas is not None:
        overrides["replicas"] = args.replicas
    spec = default_spec(args.name, config, **overrides)
    return run_experiment(spec, config)


COMMANDS = {
    "link": cmd_link,
    "rain": cmd_rain,
    "secrecy": cmd_secrecy,
    "attack": cmd_attack,
    "experiment": cmd_experiment,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = _resolve_config(args)
        result = COMMANDS[args.command](config, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN

    if isinstance(result, list):
        if args.out:
            write_csv(result, args.out)
        else:
            writer = csv.writer(sys.stdout, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            writer.writerows(r.row() for r in result)
    elif args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(result)
    else:
        sys.stdout.write(result)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
