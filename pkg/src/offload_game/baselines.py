"""Centralized reference policies and optimizers.

Two exhaustive oracles (maximize the number of users that gain from
offloading; minimize total cost), full Nash-set enumeration, a categorical
cross-entropy search for instances too large to enumerate, and the two naive
policies everything is compared against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

import numpy as np

from .errors import InstanceTooLarge
from .game import ProfileEvaluator
from .scenario import Scenario

__all__ = [
    "Objective",
    "DEFAULT_PROFILE_CAP",
    "CrossEntropyParams",
    "all_local",
    "all_cloud_random",
    "exhaustive_optimize",
    "enumerate_nash",
    "cross_entropy_optimize",
]

DEFAULT_PROFILE_CAP = 10**7
_CHUNK = 1 << 16


class Objective(Enum):
    MAX_BENEFICIAL = "max_beneficial"  # most offloaders, none of them losing out
    MIN_OVERHEAD = "min_overhead"  # least total cost, unconstrained


def all_local(scenario: Scenario) -> tuple:
    """Everyone computes on-device; the risk-averse reference point."""
    return (0,) * scenario.n_users


def all_cloud_random(scenario: Scenario, seed: int) -> tuple:
    """Everyone offloads via an independently, uniformly drawn channel."""
    rng = np.random.default_rng(seed)
    return tuple(int(c) for c in rng.integers(1, scenario.channels + 1, scenario.n_users))


def _check_cap(scenario: Scenario, profile_cap: int) -> int:
    total = (scenario.channels + 1) ** scenario.n_users
    if total > profile_cap:
        raise InstanceTooLarge(
            f"{scenario.channels + 1}^{scenario.n_users} = {total} profiles "
            f"exceeds the cap {profile_cap}"
        )
    return total


def _profile_chunks(n_users: int, channels: int, total: int) -> Iterator[np.ndarray]:
    """Yield all decision profiles in lexicographic order, (chunk, n_users) at a time."""
    base = channels + 1
    place = base ** np.arange(n_users - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        indices = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        yield (indices[:, np.newaxis] // place) % base


def exhaustive_optimize(
    scenario: Scenario, objective: Objective, profile_cap: int = DEFAULT_PROFILE_CAP
) -> tuple:
    """Scan every profile; returns (best profile, objective value).

    MAX_BENEFICIAL only considers profiles where every offloader gains;
    MIN_OVERHEAD is unconstrained.  Ties resolve to the lexicographically
    smallest profile, which the scan order provides for free.
    """
    total = _check_cap(scenario, profile_cap)
    evaluator = ProfileEvaluator(scenario.channel_env, scenario.user_profiles)
    maximize = objective is Objective.MAX_BENEFICIAL
    best_profile = None
    best_value = None
    for chunk in _profile_chunks(scenario.n_users, scenario.channels, total):
        if maximize:
            offloading = chunk > 0
            feasible = ~np.any(offloading & ~evaluator.beneficial_mask(chunk), axis=1)
            values = np.where(feasible, offloading.sum(axis=1), -1)
            pick = int(np.argmax(values))
            better = best_value is None or values[pick] > best_value
        else:
            values = evaluator.system_overheads(chunk)
            pick = int(np.argmin(values))
            better = best_value is None or values[pick] < best_value
        if better:
            best_value = values[pick]
            best_profile = tuple(int(d) for d in chunk[pick])
    return best_profile, (int(best_value) if maximize else float(best_value))


def enumerate_nash(scenario: Scenario, profile_cap: int = DEFAULT_PROFILE_CAP) -> list:
    """All Nash equilibria, in lexicographic order.  Never empty."""
    total = _check_cap(scenario, profile_cap)
    evaluator = ProfileEvaluator(scenario.channel_env, scenario.user_profiles)
    found = []
    for chunk in _profile_chunks(scenario.n_users, scenario.channels, total):
        for row in chunk[evaluator.nash_mask(chunk)]:
            found.append(tuple(int(d) for d in row))
    return found


@dataclass(frozen=True)
class CrossEntropyParams:
    """Budget and update rule of the cross-entropy search."""

    samples: int = 200  # profiles drawn per iteration
    elite_fraction: float = 0.1  # top fraction refit into the sampling table
    smoothing: float = 0.7  # new table = smoothing*elite_freq + (1-smoothing)*old
    iterations: int = 100
    degenerate_tol: float = 1e-3  # stop once every row has mass 1-tol on one decision

    def __post_init__(self):
        if self.samples < 1 or self.iterations < 1:
            raise ValueError("samples and iterations must be >= 1")
        if not 0.0 < self.elite_fraction <= 1.0:
            raise ValueError("elite fraction must lie in (0, 1]")
        if not 0.0 < self.smoothing <= 1.0:
            raise ValueError("smoothing must lie in (0, 1]")


def cross_entropy_optimize(
    scenario: Scenario,
    objective: Objective,
    params: CrossEntropyParams | None = None,
    seed: int = 0,
) -> tuple:
    """Randomized search over profiles; returns (best profile ever seen, value).

    Maintains one categorical distribution per user over {local, ch 1..M},
    initially uniform.  Each iteration samples profiles, repairs them by
    sending every losing offloader local, scores the repaired profiles,
    refits the elite fraction and smooths the table.  Repair keeps
    MAX_BENEFICIAL samples feasible; for MIN_OVERHEAD it is a strict
    point-wise improvement (a losing offloader's own cost drops and its
    co-channel users only gain), so no optimum is ever repaired away.
    Deterministic per (scenario, params, seed).
    """
    params = params or CrossEntropyParams()
    evaluator = ProfileEvaluator(scenario.channel_env, scenario.user_profiles)
    n_users, n_decisions = scenario.n_users, scenario.channels + 1
    maximize = objective is Objective.MAX_BENEFICIAL
    rng = np.random.default_rng(seed)
    table = np.full((n_users, n_decisions), 1.0 / n_decisions)
    elite_count = math.ceil(params.elite_fraction * params.samples)
    best_profile = None
    best_value = None
    for _ in range(params.iterations):
        draws = rng.random((params.samples, n_users))
        cumulative = np.cumsum(table, axis=1)
        profiles = np.empty((params.samples, n_users), dtype=np.int64)
        for n in range(n_users):
            profiles[:, n] = np.searchsorted(cumulative[n], draws[:, n], side="right")
        np.clip(profiles, 0, n_decisions - 1, out=profiles)
        candidates = evaluator.repair_to_beneficial(profiles)
        if maximize:
            scores = (candidates > 0).sum(axis=1)
            sort_key = -scores
        else:
            scores = evaluator.system_overheads(candidates)
            sort_key = scores
        # primary key: score; ties: lexicographically smallest profile first
        order = np.lexsort(
            tuple(candidates[:, c] for c in range(n_users - 1, -1, -1)) + (sort_key,)
        )
        top = order[0]
        if (
            best_value is None
            or (maximize and scores[top] > best_value)
            or (not maximize and scores[top] < best_value)
        ):
            best_value = scores[top]
            best_profile = candidates[top].copy()
        elite = candidates[order[:elite_count]]
        frequencies = np.empty_like(table)
        for decision in range(n_decisions):
            frequencies[:, decision] = (elite == decision).mean(axis=0)
        table = params.smoothing * frequencies + (1.0 - params.smoothing) * table
        if np.all(table.max(axis=1) >= 1.0 - params.degenerate_tol):
            break
    profile = tuple(int(d) for d in best_profile)
    return profile, (int(best_value) if maximize else float(best_value))
