"""Per-user communication/computation model.

All quantities are kept in one internal unit convention: bits, seconds,
joules, hertz, milliwatts.  Unit conversion from user-facing documents
(KB, Megacycles, GHz, dBm) happens at the scenario boundary, never here.

A decision profile is a plain tuple of ints: entry n is 0 when user n
computes locally, or a channel index in 1..M when it offloads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

__all__ = [
    "AccessModel",
    "UserProfile",
    "ChannelEnv",
    "DecisionProfile",
    "NEVER_BENEFICIAL",
    "NeverBeneficial",
    "validate_profile",
    "uplink_rate",
    "local_overhead",
    "cloud_overhead",
    "user_overhead",
    "beneficial_threshold",
    "is_beneficial",
]

DecisionProfile = tuple[int, ...]  # entries in {0, .., M}; 0 means local computing

LOCAL = 0  # decision value for on-device computing


class AccessModel(Enum):
    """How co-channel users degrade each other's uplink."""

    INTERFERENCE = "interference"  # SINR-style rate, cellular spectrum sharing
    CONTENTION = "contention"  # weighted packet-level sharing, CSMA-style


@dataclass(frozen=True)
class UserProfile:
    """Immutable per-user constants.

    transmit_power_mw / channel_gain enter the uplink SINR; their product is
    also the user's footprint on co-channel neighbours.  contention_weight
    and peak_rate_bps play the analogous roles under AccessModel.CONTENTION.
    """

    transmit_power_mw: float  # uplink transmit power (mW)
    channel_gain: float  # path gain to the base-station (dimensionless)
    input_bits: float  # task input size to upload (bits)
    task_cycles: float  # CPU cycles to complete the task
    device_rate_hz: float  # device CPU rate (cycles/s)
    cloud_rate_hz: float  # cloud CPU rate assigned to this user (cycles/s)
    energy_per_cycle_j: float = 1e-9  # device energy per CPU cycle (J)
    tail_energy_j: float = 0.0  # radio tail energy after an upload (J)
    time_weight: float = 1.0  # decision weight on completion time, in [0, 1]
    energy_weight: float = 0.0  # decision weight on energy, in [0, 1]
    contention_weight: float = 1.0  # share weight when contending (> 0)
    peak_rate_bps: float = 0.0  # uncontended rate under contention (bits/s)

    def __post_init__(self):
        if self.transmit_power_mw < 0 or self.channel_gain < 0:
            raise ValueError("transmit power and channel gain must be >= 0")
        if self.input_bits <= 0 or self.task_cycles <= 0:
            raise ValueError("task input size and cycle count must be > 0")
        if self.device_rate_hz <= 0 or self.cloud_rate_hz <= 0:
            raise ValueError("device and cloud CPU rates must be > 0")
        if self.energy_per_cycle_j < 0 or self.tail_energy_j < 0:
            raise ValueError("energy coefficients must be >= 0")
        for w in (self.time_weight, self.energy_weight):
            if not 0.0 <= w <= 1.0:
                raise ValueError("decision weights must lie in [0, 1]")
        if self.time_weight == 0.0 and self.energy_weight == 0.0:
            raise ValueError("decision weights must not both be zero")
        if self.contention_weight <= 0:
            raise ValueError("contention weight must be > 0")
        if self.peak_rate_bps < 0:
            raise ValueError("contention peak rate must be >= 0")


@dataclass(frozen=True)
class ChannelEnv:
    """The shared wireless environment: channel count, bandwidth, noise floor."""

    channels: int  # number of uplink channels M
    bandwidth_hz: float  # per-channel bandwidth (Hz)
    noise_mw: float = 1e-10  # background noise power (mW); -100 dBm default
    access: AccessModel = AccessModel.INTERFERENCE

    def __post_init__(self):
        if self.channels < 1:
            raise ValueError("channel count must be >= 1")
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth must be > 0")
        if self.access is AccessModel.INTERFERENCE and self.noise_mw <= 0:
            raise ValueError("noise power must be > 0 under the interference model")


class NeverBeneficial:
    """Sentinel threshold for users whose offloading can never beat local computing.

    Kept as an explicit singleton instead of -inf so that comparisons stay
    total and serialized documents stay finite.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NEVER_BENEFICIAL"


NEVER_BENEFICIAL = NeverBeneficial()


def validate_profile(env: ChannelEnv, users: Sequence[UserProfile], a: Sequence[int]) -> tuple:
    """Check a decision profile against the instance and return it as a tuple."""
    if len(a) != len(users):
        raise ValueError(f"profile length {len(a)} != user count {len(users)}")
    for n, decision in enumerate(a):
        if not isinstance(decision, int) or isinstance(decision, bool):
            raise ValueError(f"profile entry {n} is not an int: {decision!r}")
        if not 0 <= decision <= env.channels:
            raise ValueError(f"profile entry {n} out of range 0..{env.channels}: {decision}")
    return tuple(a)


def _check_cloud_decision(env: ChannelEnv, users: Sequence[UserProfile], n: int, a: Sequence[int]):
    if not 0 <= n < len(users):
        raise IndexError(f"user index {n} out of range")
    if len(a) != len(users):
        raise ValueError(f"profile length {len(a)} != user count {len(users)}")
    if a[n] == LOCAL:
        raise ValueError(f"user {n} computes locally; no uplink quantity is defined")
    if not 1 <= a[n] <= env.channels:
        raise ValueError(f"channel {a[n]} out of range 1..{env.channels}")


def uplink_rate(env: ChannelEnv, users: Sequence[UserProfile], n: int, a: Sequence[int]) -> float:
    """Uplink data rate (bits/s) of user n on its chosen channel a[n] > 0.

    Interference model: bandwidth * log2(1 + own power-gain over noise plus
    the summed power-gain of co-channel users).  Contention model: the peak
    rate scaled by this user's share of the co-channel contention weights.
    """
    _check_cloud_decision(env, users, n, a)
    me = users[n]
    if env.access is AccessModel.INTERFERENCE:
        interference = 0.0
        for i, other in enumerate(users):
            if i != n and a[i] == a[n]:
                interference += other.transmit_power_mw * other.channel_gain
        signal = me.transmit_power_mw * me.channel_gain
        return env.bandwidth_hz * math.log2(1.0 + signal / (env.noise_mw + interference))
    if me.peak_rate_bps <= 0:
        raise ValueError("contention peak rate must be > 0 under the contention model")
    load = 0.0
    for i, other in enumerate(users):
        if i != n and a[i] == a[n]:
            load += other.contention_weight
    return me.peak_rate_bps * me.contention_weight / (me.contention_weight + load)


def local_overhead(u: UserProfile) -> float:
    """Weighted time+energy cost of computing on the device; independent of others."""
    exec_time = u.task_cycles / u.device_rate_hz
    exec_energy = u.energy_per_cycle_j * u.task_cycles
    return u.time_weight * exec_time + u.energy_weight * exec_energy


def _cloud_cost_coefficients(u: UserProfile) -> tuple:
    """(rate_coefficient, rate_independent) so that cloud cost = coeff/r + fixed.

    Grouping the time and energy upload terms keeps the cost well defined
    at zero upload weight even when the rate degenerates to zero.
    """
    coeff = (u.time_weight + u.energy_weight * u.transmit_power_mw) * u.input_bits
    fixed = u.energy_weight * u.tail_energy_j + u.time_weight * u.task_cycles / u.cloud_rate_hz
    return coeff, fixed


def cloud_cost_at_rate(u: UserProfile, rate: float) -> float:
    """Cloud-computing cost for a given uplink rate (bits/s)."""
    coeff, fixed = _cloud_cost_coefficients(u)
    if coeff == 0.0:
        return fixed
    return coeff / rate + fixed


def cloud_overhead(env: ChannelEnv, users: Sequence[UserProfile], n: int, a: Sequence[int]) -> float:
    """Weighted time+energy cost of offloading: upload, tail energy, cloud execution."""
    return cloud_cost_at_rate(users[n], uplink_rate(env, users, n, a))


def user_overhead(env: ChannelEnv, users: Sequence[UserProfile], n: int, a: Sequence[int]) -> float:
    """Cost user n pays under profile a: local cost if a[n]=0, cloud cost otherwise."""
    if a[n] == LOCAL:
        return local_overhead(users[n])
    return cloud_overhead(env, users, n, a)


def beneficial_threshold(env: ChannelEnv, u: UserProfile):
    """Largest co-channel weight sum at which offloading still beats local computing.

    Under interference the returned value is in power-gain (mW) units, under
    contention in contention-weight units.  Offloading is beneficial exactly
    when the user's received co-channel weight is <= this threshold.  Returns
    NEVER_BENEFICIAL when the local cost cannot be beaten at any rate.
    """
    coeff, fixed = _cloud_cost_coefficients(u)
    headroom = local_overhead(u) - fixed  # cost budget available for the upload
    if headroom <= 0.0:
        return NEVER_BENEFICIAL
    if env.access is AccessModel.INTERFERENCE:
        if coeff == 0.0:
            return math.inf  # upload is free; any interference is tolerable
        exponent = coeff / (env.bandwidth_hz * headroom)
        try:
            denom = 2.0 ** exponent - 1.0
        except OverflowError:
            return -env.noise_mw  # required rate unreachable at any interference
        if denom == 0.0:
            return math.inf  # required rate negligible against the budget
        signal = u.transmit_power_mw * u.channel_gain
        return signal / denom - env.noise_mw
    if u.peak_rate_bps <= 0:
        raise ValueError("contention peak rate must be > 0 under the contention model")
    if coeff == 0.0:
        return math.inf
    return (headroom * u.peak_rate_bps / coeff - 1.0) * u.contention_weight


def is_beneficial(env: ChannelEnv, users: Sequence[UserProfile], n: int, a: Sequence[int]) -> bool:
    """True when offloading under profile a costs user n no more than computing locally.

    Only defined for users that actually offload (a[n] > 0); ties count as
    beneficial.
    """
    _check_cloud_decision(env, users, n, a)
    return cloud_overhead(env, users, n, a) <= local_overhead(users[n])
