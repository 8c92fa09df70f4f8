"""Secrecy capacity, attack feasibility and the artificial-rain search.

Artificial rain degrades the legitimate user's link; the eavesdropper sits
just outside the rained area and is unaffected unless an explicit
eavesdropper-side attenuation is given.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .channel import link_capacity_bps
from .errors import DomainError, SearchExhaustedError


class AttackMode(str, enum.Enum):
    HD = "HD"
    FD = "FD"


DEFAULT_SEARCH_CEILING_DB = 300.0
DEFAULT_SEARCH_RESOLUTION_DB = 0.01
DEFAULT_CAPACITY_RESOLUTION = 1e6  # bit/s
DEFAULT_FD_MARGIN_FRACTION = 0.05


@dataclass(frozen=True)
class SecrecyContext:
    user_capacity: float
    eavesdropper_capacity: float
    threshold_capacity: float

    def __post_init__(self):
        for name in ("user_capacity", "eavesdropper_capacity", "threshold_capacity"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be non-negative")

    @property
    def secrecy_capacity(self):
        return secrecy_capacity(self.user_capacity, self.eavesdropper_capacity)

    @property
    def attack_feasible(self):
        return attack_feasible(self.secrecy_capacity, self.threshold_capacity)


def secrecy_capacity(c_user, c_eav):
    """[C_u - C_ev]^+ in bit/s."""
    if c_user < 0 or c_eav < 0:
        raise DomainError("capacities must be non-negative")
    return max(c_user - c_eav, 0.0)


def attack_feasible(c_s, c_t):
    return c_s < c_t


def eavesdropper_capacity(link, offset_m, rain_db=0.0):
    """Capacity of an eavesdropper ``offset_m`` beyond the user on the same bearing."""
    if offset_m < 0:
        raise DomainError(f"eavesdropper offset must be non-negative, got {offset_m}")
    return link_capacity_bps(link.with_distance(link.distance + offset_m), rain_db=rain_db)


def ar_degraded_secrecy(link, rain_db, c_eav):
    """Secrecy capacity once ``rain_db`` of rain loss hits the user's link."""
    return secrecy_capacity(link_capacity_bps(link, rain_db=rain_db), c_eav)


def required_ar_attenuation(
    link,
    c_eav,
    c_t,
    *,
    ceiling_db=DEFAULT_SEARCH_CEILING_DB,
    resolution_db=DEFAULT_SEARCH_RESOLUTION_DB,
):
    """Smallest rain loss (dB) that pushes secrecy capacity below ``c_t``.

    Bisection on a monotone predicate; the returned value always satisfies
    the inequality and is within ``resolution_db`` of the infeasible side.
    """
    def feasible(rain_db):
        return attack_feasible(ar_degraded_secrecy(link, rain_db, c_eav), c_t)

    if feasible(0.0):
        return 0.0
    if not feasible(ceiling_db):
        raise SearchExhaustedError(
            f"secrecy capacity stays >= {c_t:g} bit/s up to {ceiling_db:g} dB of rain"
        )
    lo, hi = 0.0, ceiling_db
    while hi - lo > resolution_db:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


def attack_sensitivity(
    c_user,
    c_t,
    mode=AttackMode.HD,
    fd_margin=None,
    step=DEFAULT_CAPACITY_RESOLUTION,
):
    """Minimum eavesdropper capacity (bit/s) that makes the attack feasible.

    HD needs just over ``c_user - c_t``; FD adds ``fd_margin`` for the uplink
    phase (default 5 % of ``c_user``).
    """
    if c_user < 0:
        raise DomainError("c_user must be non-negative")
    if c_t >= c_user:
        return 0.0
    required = c_user - c_t + step
    if AttackMode(mode) is AttackMode.FD:
        if fd_margin is None:
            fd_margin = DEFAULT_FD_MARGIN_FRACTION * c_user
        if fd_margin < 0:
            raise DomainError("fd_margin must be non-negative")
        required += fd_margin
    return required


def downlink_success_probability(c_attacker, c_required, slope):
    """Logistic map from attacker capacity surplus to a per-TTI success probability.

    ``slope`` is in 1/(bit/s); at ``c_attacker == c_required`` the result is 0.5.
    """
    z = slope * (c_attacker - c_required)
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


def crossover_distance(link, offset_m, rain_db, lo=None, hi=1000.0):
    """User distance where the rained user capacity equals the eavesdropper capacity.

    Below it the user out-performs the eavesdropper; the root is bracketed on
    [``lo``, ``hi``] metres and raises DomainError when no sign change exists.
    """
    lo = link.reference_distance if lo is None else lo

    def gap(d):
        at_d = link.with_distance(d)
        return link_capacity_bps(at_d, rain_db=rain_db) - eavesdropper_capacity(at_d, offset_m)

    g_lo, g_hi = gap(lo), gap(hi)
    if g_lo <= 0 or g_hi >= 0:
        raise DomainError(
            f"no capacity crossover in [{lo:g}, {hi:g}] m "
            f"(gap {g_lo:.3g} -> {g_hi:.3g} bit/s)"
        )
    return brentq(gap, lo, hi, xtol=1e-6)


def threshold_capacity_at(link, offset_m, threshold_distance):
    """Rain-free secrecy capacity of a user at ``threshold_distance``.

    Used to calibrate C_T: beyond this distance the attack is feasible even
    without rain.
    """
    at_d = link.with_distance(threshold_distance)
    return secrecy_capacity(link_capacity_bps(at_d), eavesdropper_capacity(at_d, offset_m))
