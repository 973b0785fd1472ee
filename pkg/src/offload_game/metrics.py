"""Worst-case equilibrium efficiency (price of anarchy) and analytic bounds.

Both ratios come from full Nash enumeration against the exhaustive optimum,
so they are only computed on instances small enough to enumerate.  The
analytic bounds attach when their preconditions hold and are reported as
None otherwise; the measured ratio is always reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .baselines import DEFAULT_PROFILE_CAP, Objective, enumerate_nash, exhaustive_optimize
from .errors import ContentionUnsupported
from .game import access_weight, count_beneficial, system_overhead
from .model import (
    NEVER_BENEFICIAL,
    AccessModel,
    ChannelEnv,
    UserProfile,
    beneficial_threshold,
    cloud_cost_at_rate,
    local_overhead,
)
from .scenario import Scenario

__all__ = ["PoaReport", "poa_beneficial", "poa_overhead", "k_cloud_extremes"]

BENEFICIAL_USERS = "beneficial_users"
SYSTEM_OVERHEAD = "system_overhead"


@dataclass(frozen=True)
class PoaReport:
    """Measured worst-equilibrium-to-optimum ratio plus its analytic band."""

    metric: str  # BENEFICIAL_USERS or SYSTEM_OVERHEAD
    worst_equilibrium: float
    optimum: float
    ratio: float
    bound_low: float | None
    bound_high: float | None
    weight_max: float
    weight_min: float
    threshold_max: float | None  # None when some user can never benefit
    threshold_min: float | None


def _instance_extremes(env: ChannelEnv, users: Sequence[UserProfile]):
    weights = [access_weight(env, u) for u in users]
    thresholds = [beneficial_threshold(env, u) for u in users]
    if any(t is NEVER_BENEFICIAL or not math.isfinite(t) for t in thresholds):
        t_max = t_min = None
    else:
        t_max, t_min = max(thresholds), min(thresholds)
    return max(weights), min(weights), t_max, t_min


def poa_beneficial(scenario: Scenario, profile_cap: int = DEFAULT_PROFILE_CAP) -> PoaReport:
    """Ratio of the fewest offloaders at any equilibrium to the optimum count.

    Always in (0, 1]; defined as 1 when the optimum itself is 0 (nobody can
    ever benefit).  The analytic lower bound needs every threshold finite
    and nonnegative and every weight positive.
    """
    env = scenario.channel_env
    users = scenario.user_profiles
    equilibria = enumerate_nash(scenario, profile_cap)
    worst = min(count_beneficial(env, users, a) for a in equilibria)
    _, optimum = exhaustive_optimize(scenario, Objective.MAX_BENEFICIAL, profile_cap)
    ratio = 1.0 if optimum == 0 else worst / optimum
    q_max, q_min, t_max, t_min = _instance_extremes(env, users)
    bound_low = None
    if t_min is not None and t_min >= 0.0 and q_min > 0.0:
        bound_low = math.floor(t_min / q_max) / (math.floor(t_max / q_min) + 1.0)
    return PoaReport(
        metric=BENEFICIAL_USERS,
        worst_equilibrium=float(worst),
        optimum=float(optimum),
        ratio=ratio,
        bound_low=bound_low,
        bound_high=1.0,
        weight_max=q_max,
        weight_min=q_min,
        threshold_max=t_max,
        threshold_min=t_min,
    )


def poa_overhead(scenario: Scenario, profile_cap: int = DEFAULT_PROFILE_CAP) -> PoaReport:
    """Ratio of the costliest equilibrium's total cost to the minimum total cost.

    Always >= 1.  The analytic upper bound exists only under the
    interference model.
    """
    env = scenario.channel_env
    users = scenario.user_profiles
    equilibria = enumerate_nash(scenario, profile_cap)
    worst = max(system_overhead(env, users, a) for a in equilibria)
    _, optimum = exhaustive_optimize(scenario, Objective.MIN_OVERHEAD, profile_cap)
    ratio = 1.0 if worst == optimum else worst / optimum
    bound_high = None
    if env.access is AccessModel.INTERFERENCE:
        numerator = 0.0
        denominator = 0.0
        for n, u in enumerate(users):
            k_min, k_max = k_cloud_extremes(env, users, n)
            k_local = local_overhead(u)
            numerator += min(k_local, k_max)
            denominator += min(k_local, k_min)
        bound_high = numerator / denominator if denominator > 0 else None
    q_max, q_min, t_max, t_min = _instance_extremes(env, users)
    return PoaReport(
        metric=SYSTEM_OVERHEAD,
        worst_equilibrium=worst,
        optimum=optimum,
        ratio=ratio,
        bound_low=1.0,
        bound_high=bound_high,
        weight_max=q_max,
        weight_min=q_min,
        threshold_max=t_max,
        threshold_min=t_min,
    )


def k_cloud_extremes(env: ChannelEnv, users: Sequence[UserProfile], n: int) -> tuple:
    """Best- and worst-case offloading cost for user n over all profiles.

    Best case: the user has its channel to itself.  Worst case: it faces the
    average co-channel weight, total weight of everyone else spread over the
    channel count, which no equilibrium exceeds.  Interference model only.
    """
    if env.access is not AccessModel.INTERFERENCE:
        raise ContentionUnsupported("cloud-cost extremes are defined for the interference model")
    u = users[n]
    signal = u.transmit_power_mw * u.channel_gain
    others = sum(
        users[i].transmit_power_mw * users[i].channel_gain for i in range(len(users)) if i != n
    )
    spread = others / env.channels
    rate_best = env.bandwidth_hz * math.log2(1.0 + signal / env.noise_mw)
    rate_worst = env.bandwidth_hz * math.log2(1.0 + signal / (env.noise_mw + spread))
    return cloud_cost_at_rate(u, rate_best), cloud_cost_at_rate(u, rate_worst)
