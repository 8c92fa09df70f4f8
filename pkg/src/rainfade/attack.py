"""TTI-indexed model of the half-duplex RRC-setup spoofing attack.

Timeline of one cycle (TTI labels within the RRC setup):

    t1          RRC setup request from device-1 (first cycle only)
    t2 .. tn    ping flood towards device-1
    t(n+1)      spoof attempt on the downlink RRC setup response
    t(n+2)      artificial-noise intrusion at device-2   (success only)
    t(n+3)      RRC setup complete sent to the gNB       (success only)

A failed spoof restarts the cycle at t2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .channel import (
    DEFAULT_PROFILES,
    LinkConfig,
    Scenario,
    dbm_to_watts,
    path_loss_db,
)
from .errors import DomainError
from .secrecy import AttackMode


class EventKind(str, enum.Enum):
    RRC_REQUEST = "RrcRequest"
    PING_FLOOD = "PingFlood"
    SPOOF_ATTEMPT = "SpoofAttempt"
    AN_INTRUSION = "AnIntrusion"
    RRC_COMPLETE = "RrcComplete"


class Outcome(str, enum.Enum):
    CONNECTED = "Connected"
    EXHAUSTED = "Exhausted"


class TraceEvent(NamedTuple):
    tti: int
    cycle: int
    kind: EventKind
    success: bool | None = None

    def to_line(self):
        line = f"tti={self.tti} cycle={self.cycle} event={self.kind.value}"
        if self.success is not None:
            line += f" success={int(self.success)}"
        return line


@dataclass
class AttackTrace:
    events: list = field(default_factory=list)
    outcome: Outcome = Outcome.EXHAUSTED
    cycles_used: int = 0

    @property
    def spoof_attempts(self):
        return [e for e in self.events if e.kind is EventKind.SPOOF_ATTEMPT]

    @property
    def failed_attempts(self):
        return sum(1 for e in self.spoof_attempts if not e.success)

    @property
    def total_ttis(self):
        return self.events[-1].tti if self.events else 0

    def to_text(self):
        lines = [e.to_line() for e in self.events]
        lines.append(f"outcome={self.outcome.value} cycles={self.cycles_used}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        events = []
        outcome, cycles = None, 0
        for line in text.splitlines():
            if not line.strip():
                continue
            fields = dict(part.split("=", 1) for part in line.split())
            if "outcome" in fields:
                outcome = Outcome(fields["outcome"])
                cycles = int(fields.get("cycles", 0))
                continue
            success = fields.get("success")
            events.append(
                TraceEvent(
                    int(fields["tti"]),
                    int(fields["cycle"]),
                    EventKind(fields["event"]),
                    None if success is None else bool(int(success)),
                )
            )
        if outcome is None:
            raise DomainError("trace text has no outcome line")
        return cls(events, outcome, cycles)


@dataclass(frozen=True)
class AttackConfig:
    mode: AttackMode = AttackMode.HD
    p_downlink_success: float = 0.7
    p_uplink_success: float = 0.8
    ping_flood_ttis: int = 4
    max_cycles: int = 10
    an_power: float = 0.02
    decode_threshold_db: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mode", AttackMode(self.mode))
        for name in ("p_downlink_success", "p_uplink_success"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {p}")
        if self.ping_flood_ttis < 1:
            raise DomainError("ping_flood_ttis must be >= 1")
        if self.max_cycles < 1:
            raise DomainError("max_cycles must be >= 1")
        if self.an_power < 0:
            raise DomainError("an_power must be non-negative")

    @property
    def p_downlink_miss(self):
        return 1.0 - self.p_downlink_success

    @property
    def p_cycle_success(self):
        if self.mode is AttackMode.FD:
            return self.p_downlink_success * self.p_uplink_success
        return self.p_downlink_success


def run_rrc_attack(config, rng=None):
    """Simulate one attack until the intruder connects or runs out of cycles.

    Each cycle draws two uniforms, downlink then uplink, in both modes so that
    HD and FD runs with the same seed see the same downlink outcomes.
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)
    n = config.ping_flood_ttis
    fd = config.mode is AttackMode.FD
    events = []
    append = events.append

    append(TraceEvent(1, 1, EventKind.RRC_REQUEST))
    tti = 1
    for cycle in range(1, config.max_cycles + 1):
        for _ in range(n - 1):
            tti += 1
            append(TraceEvent(tti, cycle, EventKind.PING_FLOOD))
        u_dl, u_ul = rng.random(2)
        ok = u_dl < config.p_downlink_success
        if fd:
            ok = ok and u_ul < config.p_uplink_success
        tti += 1
        append(TraceEvent(tti, cycle, EventKind.SPOOF_ATTEMPT, bool(ok)))
        if ok:
            append(TraceEvent(tti + 1, cycle, EventKind.AN_INTRUSION))
            append(TraceEvent(tti + 2, cycle, EventKind.RRC_COMPLETE))
            return AttackTrace(events, Outcome.CONNECTED, cycle)
    return AttackTrace(events, Outcome.EXHAUSTED, config.max_cycles)


def simulate_attempts(config, attempts, rng):
    """Missed spoof attempts over ``attempts`` independent single-cycle attacks."""
    p_dl = config.p_downlink_success
    p_ul = config.p_uplink_success
    draws = rng.random((attempts, 2))
    hit = draws[:, 0] < p_dl
    if config.mode is AttackMode.FD:
        hit &= draws[:, 1] < p_ul
    return int(attempts - np.count_nonzero(hit))


@dataclass
class UserNode:
    """A candidate target; its CSI score is recomputed from distance on every access."""

    id: int
    distance: float
    scenario: Scenario = Scenario.URBAN
    frequency: float = 28e9
    reference_distance: float = 1.0
    path_loss_exponent: float | None = None

    def __post_init__(self):
        if not self.distance > 0:
            raise DomainError(f"user distance must be positive, got {self.distance}")
        self.scenario = Scenario(self.scenario)

    def link(self):
        exponent = self.path_loss_exponent
        if exponent is None:
            exponent = DEFAULT_PROFILES[self.scenario].path_loss_exponent
        return LinkConfig(
            frequency=self.frequency,
            distance=max(self.distance, self.reference_distance),
            reference_distance=self.reference_distance,
            path_loss_exponent=exponent,
            scenario=self.scenario,
        )

    @property
    def csi_score(self):
        """Path loss in dB; larger means worse channel."""
        return path_loss_db(self.link())


def select_target(users):
    """Worst-CSI user (largest path loss); ties go to the smallest id."""
    if not users:
        raise DomainError("cannot select a target from an empty user list")
    return min(users, key=lambda u: (-u.csi_score, u.id))


def ping_flood_accumulate(n, channel_gain, ping_power, noise_samples):
    """Energy collected by device-1 over pings 2..n.

    Each summand is ``channel_gain * sqrt(ping_power) + noise``.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if len(noise_samples) != n - 1:
        raise DomainError(f"expected {n - 1} noise samples, got {len(noise_samples)}")
    amplitude = channel_gain * math.sqrt(ping_power)
    return float((n - 1) * amplitude + np.sum(noise_samples))


def an_sinr_db(signal_gain_db, signal_power, an_gain_db, an_power, noise_power):
    """SINR at device-2 with the intruder's artificial noise as interference.

    Gains are in dB (negative path loss), powers in W, ``noise_power`` in dBm.
    """
    if not signal_power > 0:
        raise DomainError("signal_power must be positive")
    s = signal_power * 10.0 ** (signal_gain_db / 10.0)
    i = an_power * 10.0 ** (an_gain_db / 10.0)
    n = dbm_to_watts(noise_power)
    return 10.0 * math.log10(s / (i + n))


def decode_fails(sinr_db, threshold_db=0.0):
    return sinr_db < threshold_db
