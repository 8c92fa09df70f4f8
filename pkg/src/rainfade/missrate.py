"""Miss-rate probability theory for the HD and FD spoofing attacks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError
from .secrecy import AttackMode

LOG_SPACE_THRESHOLD = 50


class Unbounded:
    """Sentinel for a reciprocal of zero: the attack never misses."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNBOUNDED"


UNBOUNDED = Unbounded()


def _check_prob(p, name="p"):
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {p}")


def _log_comb(i, u):
    return math.lgamma(i + 1) - math.lgamma(u + 1) - math.lgamma(i - u + 1)


def binomial_pmf(i, u, p):
    """P(u misses out of i attempts) with per-attempt miss probability ``p``."""
    if not 0 <= u <= i:
        raise DomainError(f"need 0 <= u <= i, got u={u}, i={i}")
    _check_prob(p)
    # 0**0 == 1 handles the certain-event corners
    if p == 0.0 or p == 1.0:
        return float(u == (i if p == 1.0 else 0))
    if i <= LOG_SPACE_THRESHOLD:
        return math.comb(i, u) * p**u * (1.0 - p) ** (i - u)
    return math.exp(_log_comb(i, u) + u * math.log(p) + (i - u) * math.log1p(-p))


def intruder_success_pmf(i, u, b_dl):
    """P(u downlink captures by the intruder out of i attempts)."""
    return binomial_pmf(i, u, b_dl)


def poisson_pmf(u, lam):
    if lam < 0:
        raise DomainError(f"lambda must be non-negative, got {lam}")
    if u < 0:
        return 0.0
    if lam == 0:
        return float(u == 0)
    return math.exp(u * math.log(lam) - lam - math.lgamma(u + 1))


@dataclass(frozen=True)
class MissRateParams:
    """Per-attempt miss probabilities over ``attempts`` spoof attempts."""

    attempts: int
    miss_prob_downlink: float
    miss_prob_uplink: float = 0.0

    def __post_init__(self):
        if self.attempts < 1:
            raise DomainError("attempts must be >= 1")
        _check_prob(self.miss_prob_downlink, "miss_prob_downlink")
        _check_prob(self.miss_prob_uplink, "miss_prob_uplink")

    @classmethod
    def from_counts(cls, attempts, missed_downlink, missed_uplink=0):
        """From x total attempts, m missed downlinks and m1 missed uplinks."""
        if attempts < 1:
            raise DomainError("attempts must be >= 1")
        return cls(attempts, missed_downlink / attempts, missed_uplink / attempts)


class MissRate(NamedTuple):
    value: float
    clamped: bool = False


def analytic_missrate(params, mode=AttackMode.HD):
    """HD: m/x.  FD: m/x + m1/x, clamped to 1 with ``clamped`` set.

    The FD form adds the uplink and downlink rates directly (the two miss
    events are treated as disjoint), so it can exceed 1 for large inputs.
    """
    hd = params.miss_prob_downlink
    if AttackMode(mode) is AttackMode.HD:
        return MissRate(hd)
    fd = hd + params.miss_prob_uplink
    if fd > 1.0:
        return MissRate(1.0, True)
    return MissRate(fd)


def effectiveness(miss_rate):
    """Reciprocal miss rate; ``UNBOUNDED`` when the attack never misses."""
    _check_prob(miss_rate, "miss_rate")
    if miss_rate == 0:
        return UNBOUNDED
    return 1.0 / miss_rate


def empirical_missrate(traces):
    """Failed spoof attempts divided by all spoof attempts across ``traces``."""
    if not traces:
        raise DomainError("need at least one trace")
    failed = total = 0
    for trace in traces:
        attempts = trace.spoof_attempts
        total += len(attempts)
        failed += sum(1 for e in attempts if not e.success)
    return failed / total
