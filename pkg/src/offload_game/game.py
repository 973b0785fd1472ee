"""Strategic-game layer over the per-user cost model.

Both access models reduce to the same structure through a per-user access
weight: transmit power times channel gain under interference, the contention
weight otherwise.  Everything here is a pure function of immutable values;
ProfileEvaluator additionally precomputes per-user constants so that batches
of decision profiles can be scored with numpy.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .model import (
    LOCAL,
    NEVER_BENEFICIAL,
    AccessModel,
    ChannelEnv,
    UserProfile,
    beneficial_threshold,
    is_beneficial,
    local_overhead,
    user_overhead,
)

__all__ = [
    "BEST_RESPONSE_ATOL",
    "access_weight",
    "channel_load",
    "received_interference",
    "potential",
    "best_response_set",
    "is_nash",
    "count_beneficial",
    "system_overhead",
    "ProfileEvaluator",
]

# Two candidate decisions count as equally good when their costs are this close;
# the improvement test against the status quo stays an exact float comparison.
BEST_RESPONSE_ATOL = 1e-12


def access_weight(env: ChannelEnv, u: UserProfile) -> float:
    """The user's footprint on a shared channel, in the model's weight units."""
    if env.access is AccessModel.INTERFERENCE:
        return u.transmit_power_mw * u.channel_gain
    return u.contention_weight


def channel_load(env: ChannelEnv, users: Sequence[UserProfile], m: int, a: Sequence[int]) -> float:
    """Total access weight currently on channel m (what the base-station measures)."""
    if not 1 <= m <= env.channels:
        raise ValueError(f"channel {m} out of range 1..{env.channels}")
    return sum(access_weight(env, users[i]) for i in range(len(users)) if a[i] == m)


def received_interference(
    env: ChannelEnv, users: Sequence[UserProfile], n: int, m: int, a: Sequence[int]
) -> float:
    """Co-channel weight user n would see on channel m, excluding itself.

    Follows the measurement rule: the total load on m, minus the user's own
    weight when it is currently transmitting there.
    """
    load = channel_load(env, users, m, a)
    if a[n] == m:
        return load - access_weight(env, users[n])
    return load


def _clamped_thresholds(env: ChannelEnv, users: Sequence[UserProfile]) -> list:
    """Beneficiality thresholds with the never-beneficial sentinel clamped to 0.

    Users that can never benefit stay local under any improvement path, so a
    zero stand-in keeps the potential finite without breaking its descent.
    """
    out = []
    for u in users:
        t = beneficial_threshold(env, u)
        out.append(0.0 if t is NEVER_BENEFICIAL else t)
    return out


def potential(env: ChannelEnv, users: Sequence[UserProfile], a: Sequence[int]) -> float:
    """Scalar function that strictly decreases on every improving unilateral move.

    Half the sum of pairwise co-channel weight products, plus each local
    user's weight times its beneficiality threshold.
    """
    weights = [access_weight(env, u) for u in users]
    thresholds = _clamped_thresholds(env, users)
    pair_term = 0.0
    for m in range(1, env.channels + 1):
        total = 0.0
        total_sq = 0.0
        for i in range(len(users)):
            if a[i] == m:
                total += weights[i]
                total_sq += weights[i] * weights[i]
        pair_term += 0.5 * (total * total - total_sq)
    local_term = 0.0
    for i in range(len(users)):
        if a[i] == LOCAL:
            local_term += weights[i] * thresholds[i]
    return pair_term + local_term


def best_response_set(
    env: ChannelEnv, users: Sequence[UserProfile], n: int, a: Sequence[int]
) -> frozenset:
    """Decisions that strictly beat user n's current cost, restricted to the argmin.

    Empty when no strict improvement exists.  Candidates within
    BEST_RESPONSE_ATOL of the best value are all reported, so symmetric
    channels appear together.
    """
    candidates = []
    scratch = list(a)
    for decision in range(env.channels + 1):
        scratch[n] = decision
        candidates.append(user_overhead(env, users, n, scratch))
    current_cost = candidates[a[n]]
    best = min(candidates)
    if not best < current_cost:
        return frozenset()
    return frozenset(
        d
        for d, cost in enumerate(candidates)
        if cost - best <= BEST_RESPONSE_ATOL and cost < current_cost
    )


def is_nash(env: ChannelEnv, users: Sequence[UserProfile], a: Sequence[int]) -> bool:
    """True when no user can strictly reduce its own cost by deviating alone."""
    return all(not best_response_set(env, users, n, a) for n in range(len(users)))


def count_beneficial(env: ChannelEnv, users: Sequence[UserProfile], a: Sequence[int]) -> int:
    """Number of users that offload and are no worse off than computing locally."""
    return sum(
        1 for n in range(len(users)) if a[n] != LOCAL and is_beneficial(env, users, n, a)
    )


def system_overhead(env: ChannelEnv, users: Sequence[UserProfile], a: Sequence[int]) -> float:
    """Total cost across all users under profile a."""
    return sum(user_overhead(env, users, n, a) for n in range(len(users)))


class ProfileEvaluator:
    """Vectorized scoring of decision-profile batches for one fixed instance.

    Profiles are passed as an int array of shape (k, n_users); every method
    is read-only, so one evaluator can serve any number of threads.  The
    per-user interference is derived from channel loads by subtracting the
    user's own weight, mirroring the measurement feedback a running system
    would use.
    """

    def __init__(self, env: ChannelEnv, users: Sequence[UserProfile]):
        self.env = env
        self.users = tuple(users)
        self.n_users = len(users)
        self.channels = env.channels
        self.weights = np.array([access_weight(env, u) for u in users])
        self.local_costs = np.array([local_overhead(u) for u in users])
        coeff_fixed = [
            (
                (u.time_weight + u.energy_weight * u.transmit_power_mw) * u.input_bits,
                u.energy_weight * u.tail_energy_j + u.time_weight * u.task_cycles / u.cloud_rate_hz,
            )
            for u in users
        ]
        self.rate_coeffs = np.array([cf[0] for cf in coeff_fixed])
        self.fixed_cloud_costs = np.array([cf[1] for cf in coeff_fixed])
        self.thresholds = [beneficial_threshold(env, u) for u in users]
        self._phi_thresholds = np.array(_clamped_thresholds(env, users))
        if env.access is AccessModel.INTERFERENCE:
            self._signals = np.array([u.transmit_power_mw * u.channel_gain for u in users])
        else:
            self._peaks = np.array([u.peak_rate_bps for u in users])
            if np.any(self._peaks <= 0):
                raise ValueError("contention peak rate must be > 0 under the contention model")

    def _as_batch(self, profiles) -> np.ndarray:
        batch = np.asarray(profiles, dtype=np.int64)
        if batch.ndim == 1:
            batch = batch[np.newaxis, :]
        if batch.shape[1] != self.n_users:
            raise ValueError(f"profile width {batch.shape[1]} != user count {self.n_users}")
        return batch

    def channel_loads(self, profiles) -> np.ndarray:
        """(k, channels) array of summed access weights per channel."""
        batch = self._as_batch(profiles)
        loads = np.empty((batch.shape[0], self.channels))
        for m in range(1, self.channels + 1):
            loads[:, m - 1] = (batch == m) @ self.weights
        return loads

    def _rates(self, idx: np.ndarray, interference: np.ndarray) -> np.ndarray:
        """Uplink rates for users idx (broadcastable) at the given co-channel weight."""
        if self.env.access is AccessModel.INTERFERENCE:
            signal = self._signals[idx]
            return self.env.bandwidth_hz * np.log2(
                1.0 + signal / (self.env.noise_mw + interference)
            )
        w = self.weights[idx]
        return self._peaks[idx] * w / (w + interference)

    def _cloud_costs(self, idx: np.ndarray, interference: np.ndarray) -> np.ndarray:
        coeff = self.rate_coeffs[idx]
        fixed = self.fixed_cloud_costs[idx]
        with np.errstate(divide="ignore", invalid="ignore"):
            upload = coeff / self._rates(idx, interference)
        return np.where(coeff == 0.0, fixed, upload + fixed)

    def overheads(self, profiles) -> np.ndarray:
        """(k, n_users) per-user costs under each profile."""
        batch = self._as_batch(profiles)
        loads = self.channel_loads(batch)
        cloud = batch > 0
        mu = np.take_along_axis(loads, np.maximum(batch - 1, 0), axis=1) - self.weights
        idx = np.broadcast_to(np.arange(self.n_users), batch.shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            cloud_costs = self._cloud_costs(idx, mu)
        return np.where(cloud, cloud_costs, self.local_costs)

    def system_overheads(self, profiles) -> np.ndarray:
        return self.overheads(profiles).sum(axis=1)

    def beneficial_mask(self, profiles) -> np.ndarray:
        """(k, n_users) True where a user offloads at no loss versus local computing."""
        batch = self._as_batch(profiles)
        costs = self.overheads(batch)
        return (batch > 0) & (costs <= self.local_costs)

    def beneficial_counts(self, profiles) -> np.ndarray:
        return self.beneficial_mask(profiles).sum(axis=1)

    def repair_to_beneficial(self, profiles) -> np.ndarray:
        """Send every non-beneficial offloader local; the rest only gain from it."""
        batch = self._as_batch(profiles)
        keep = self.beneficial_mask(batch)
        return np.where(keep, batch, 0)

    def candidate_overheads(self, profiles) -> np.ndarray:
        """(k, n_users, channels+1) cost of every unilateral decision per user."""
        batch = self._as_batch(profiles)
        k = batch.shape[0]
        loads = self.channel_loads(batch)
        own = batch[:, :, np.newaxis] == np.arange(1, self.channels + 1)
        mu = loads[:, np.newaxis, :] - self.weights[np.newaxis, :, np.newaxis] * own
        idx = np.broadcast_to(np.arange(self.n_users)[:, np.newaxis], mu.shape[1:])
        with np.errstate(divide="ignore", invalid="ignore"):
            cloud_costs = self._cloud_costs(np.broadcast_to(idx, mu.shape), mu)
        out = np.empty((k, self.n_users, self.channels + 1))
        out[:, :, 0] = self.local_costs
        out[:, :, 1:] = cloud_costs
        return out

    def current_and_best(self, profiles):
        """(current cost, best achievable cost) per user; both (k, n_users)."""
        batch = self._as_batch(profiles)
        cand = self.candidate_overheads(batch)
        current = np.take_along_axis(cand, batch[:, :, np.newaxis], axis=2)[:, :, 0]
        return current, cand.min(axis=2)

    def nash_mask(self, profiles) -> np.ndarray:
        """(k,) True where no user has a strictly improving unilateral deviation."""
        current, best = self.current_and_best(profiles)
        return ~np.any(best < current, axis=1)

    def potential(self, profiles) -> np.ndarray:
        """(k,) potential values; same formula as the scalar `potential`."""
        batch = self._as_batch(profiles)
        pair = np.zeros(batch.shape[0])
        for m in range(1, self.channels + 1):
            on = batch == m
            total = on @ self.weights
            total_sq = on @ (self.weights * self.weights)
            pair += 0.5 * (total * total - total_sq)
        local = (batch == 0) @ (self.weights * self._phi_thresholds)
        return pair + local
