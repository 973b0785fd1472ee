"""Unit and property tests for the game layer."""

import numpy as np
import pytest

from offload_game import (
    ProfileEvaluator,
    access_weight,
    beneficial_threshold,
    best_response_set,
    channel_load,
    count_beneficial,
    is_beneficial,
    is_nash,
    potential,
    received_interference,
    system_overhead,
    user_overhead,
)
from offload_game.game import BEST_RESPONSE_ATOL
from offload_game.model import AccessModel
from support import (
    integer_contention_scenario,
    never_beneficial_user,
    random_instance,
    random_profile,
    simple_env,
    simple_user,
    small_paper_scenario,
)


def find_improving_deviation(rng, env, users, a):
    """(user, new decision) with strictly lower cost, or None at an equilibrium."""
    for n in rng.permutation(len(users)):
        n = int(n)
        current = user_overhead(env, users, n, a)
        for d in rng.permutation(env.channels + 1):
            d = int(d)
            if d == a[n]:
                continue
            b = list(a)
            b[n] = d
            if user_overhead(env, users, n, tuple(b)) < current:
                return n, d
    return None


class TestAccessWeight:
    def test_interference_power_gain_product(self):
        u = simple_user(transmit_power_mw=100.0, channel_gain=1e-8)
        assert access_weight(simple_env(), u) == 100.0 * 1e-8

    def test_contention_weight(self):
        u = simple_user(contention_weight=3.0)
        assert access_weight(simple_env(access=AccessModel.CONTENTION), u) == 3.0

    def test_zero_gain(self):
        u = simple_user(channel_gain=0.0)
        assert access_weight(simple_env(), u) == 0.0


class TestInterferenceAndLoad:
    def test_empty_channel(self):
        env = simple_env(channels=2)
        users = [simple_user(), simple_user()]
        assert received_interference(env, users, 0, 2, (1, 1)) == 0.0
        assert channel_load(env, users, 2, (1, 1)) == 0.0

    def test_two_cochannel_users(self):
        env = simple_env()
        users = [simple_user(), simple_user(channel_gain=1.0), simple_user(channel_gain=2.0)]
        assert received_interference(env, users, 0, 1, (1, 1, 1)) == 3.0

    def test_measurement_subtraction_identity(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            env, users = random_instance(rng)
            a = random_profile(rng, env, users)
            for n in range(len(users)):
                if a[n] == 0:
                    continue
                assert received_interference(env, users, n, a[n], a) == (
                    channel_load(env, users, a[n], a) - access_weight(env, users[n])
                )

    def test_loads_partition_offloading_weight(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            env, users = random_instance(rng)
            a = random_profile(rng, env, users)
            total = sum(channel_load(env, users, m, a) for m in range(1, env.channels + 1))
            offloading = sum(access_weight(env, users[n]) for n in range(len(users)) if a[n] > 0)
            assert total == pytest.approx(offloading, rel=1e-12, abs=1e-15)


class TestPotential:
    def test_all_local_is_weighted_threshold_sum(self):
        rng = np.random.default_rng(13)
        env, users = random_instance(rng, finite_thresholds=True)
        a = (0,) * len(users)
        expected = sum(
            access_weight(env, u) * beneficial_threshold(env, u) for u in users
        )
        assert potential(env, users, a) == pytest.approx(expected, rel=1e-12)

    def test_two_unit_users_sharing_a_channel(self):
        env = simple_env(channels=2)
        users = [simple_user(), simple_user()]
        assert potential(env, users, (1, 1)) == 1.0
        assert potential(env, users, (1, 2)) == 0.0

    @pytest.mark.parametrize("access", list(AccessModel))
    def test_improving_deviation_strictly_decreases_potential(self, access):
        rng = np.random.default_rng(14)
        done = 0
        while done < 500:
            env, users = random_instance(rng, access=access, finite_thresholds=True)
            a = random_profile(rng, env, users)
            move = find_improving_deviation(rng, env, users, a)
            if move is None:
                continue
            n, d = move
            b = list(a)
            b[n] = d
            assert potential(env, users, tuple(b)) < potential(env, users, a)
            done += 1

    def test_integer_instances_drop_by_at_least_minimum_weight(self):
        rng = np.random.default_rng(15)
        done = 0
        while done < 300:
            scenario = integer_contention_scenario(int(rng.integers(2, 7)), int(rng.integers(1, 4)), int(rng.integers(10_000)))
            env, users = scenario.channel_env, scenario.user_profiles
            q_min = min(access_weight(env, u) for u in users)
            a = random_profile(rng, env, users)
            move = find_improving_deviation(rng, env, users, a)
            if move is None:
                continue
            n, d = move
            b = list(a)
            b[n] = d
            drop = potential(env, users, a) - potential(env, users, tuple(b))
            assert drop >= q_min - 1e-9
            done += 1

    def test_bounds_for_nonnegative_thresholds(self):
        rng = np.random.default_rng(16)
        for i in range(50):
            scenario = small_paper_scenario(5, 2, seed=i, time_only=True)
            env, users = scenario.channel_env, scenario.user_profiles
            weights = [access_weight(env, u) for u in users]
            thresholds = [beneficial_threshold(env, u) for u in users]
            assert all(t >= 0 for t in thresholds)
            q_max, t_max, n = max(weights), max(thresholds), len(users)
            upper = 0.5 * q_max * q_max * n * n + q_max * t_max * n
            for _ in range(20):
                a = random_profile(rng, env, users)
                assert 0.0 <= potential(env, users, a) <= upper


class TestBestResponse:
    def test_symmetric_empty_channels_tie(self):
        env = simple_env(channels=2, bandwidth_hz=1.0, noise_mw=1.0)
        user = simple_user(transmit_power_mw=30.0, channel_gain=1.0, input_bits=6.0,
                           task_cycles=2.0, device_rate_hz=1.0, cloud_rate_hz=4.0)
        assert beneficial_threshold(env, user) > 0
        assert best_response_set(env, [user], 0, (0,)) == {1, 2}

    def test_empty_at_unique_minimum(self):
        env = simple_env(channels=1)
        u = simple_user(cloud_rate_hz=100.0, input_bits=0.5, transmit_power_mw=30.0)
        a = min(
            ((d,) for d in (0, 1)), key=lambda p: user_overhead(env, [u], 0, p)
        )
        assert best_response_set(env, [u], 0, a) == frozenset()

    def test_never_beneficial_user_returns_local(self):
        env = simple_env(channels=2)
        users = [never_beneficial_user(), simple_user()]
        assert best_response_set(env, users, 0, (1, 1)) == {0}

    @pytest.mark.parametrize("access", list(AccessModel))
    def test_members_are_equal_cost_strict_improvements(self, access):
        rng = np.random.default_rng(17)
        for _ in range(200):
            env, users = random_instance(rng, access=access)
            a = random_profile(rng, env, users)
            for n in range(len(users)):
                delta = best_response_set(env, users, n, a)
                if not delta:
                    continue
                current = user_overhead(env, users, n, a)
                costs = []
                for d in delta:
                    b = list(a)
                    b[n] = d
                    costs.append(user_overhead(env, users, n, tuple(b)))
                assert all(c < current for c in costs)
                assert max(costs) - min(costs) <= BEST_RESPONSE_ATOL


class TestNashAndCounting:
    def test_all_never_beneficial_all_local_is_nash(self):
        env = simple_env(channels=2)
        users = [never_beneficial_user(), never_beneficial_user()]
        assert is_nash(env, users, (0, 0))
        assert count_beneficial(env, users, (0, 0)) == 0

    def test_single_user_with_positive_threshold_wants_to_move(self):
        env = simple_env(bandwidth_hz=1.0, noise_mw=1.0)
        user = simple_user(transmit_power_mw=30.0, channel_gain=1.0, input_bits=6.0,
                           task_cycles=2.0, device_rate_hz=1.0, cloud_rate_hz=4.0)
        assert not is_nash(env, [user], (0,))
        assert count_beneficial(env, [user], (1,)) == 1

    def test_system_overhead_sums_user_costs(self):
        rng = np.random.default_rng(18)
        env, users = random_instance(rng)
        a = random_profile(rng, env, users)
        expected = sum(user_overhead(env, users, n, a) for n in range(len(users)))
        assert system_overhead(env, users, a) == pytest.approx(expected, rel=1e-15)


class TestProfileEvaluator:
    @pytest.mark.parametrize("access", list(AccessModel))
    def test_matches_scalar_functions(self, access):
        rng = np.random.default_rng(19)
        for _ in range(30):
            env, users = random_instance(rng, access=access)
            evaluator = ProfileEvaluator(env, users)
            profiles = [random_profile(rng, env, users) for _ in range(20)]
            batch = np.array(profiles)
            costs = evaluator.overheads(batch)
            nash = evaluator.nash_mask(batch)
            counts = evaluator.beneficial_counts(batch)
            phis = evaluator.potential(batch)
            for k, a in enumerate(profiles):
                for n in range(len(users)):
                    assert costs[k, n] == pytest.approx(
                        user_overhead(env, users, n, a), rel=1e-12
                    )
                assert bool(nash[k]) == is_nash(env, users, a)
                assert counts[k] == count_beneficial(env, users, a)
                assert phis[k] == pytest.approx(potential(env, users, a), rel=1e-12, abs=1e-15)

    def test_candidate_costs_match_unilateral_rewrites(self):
        rng = np.random.default_rng(20)
        env, users = random_instance(rng)
        evaluator = ProfileEvaluator(env, users)
        a = random_profile(rng, env, users)
        cand = evaluator.candidate_overheads([a])[0]
        for n in range(len(users)):
            for d in range(env.channels + 1):
                b = list(a)
                b[n] = d
                assert cand[n, d] == pytest.approx(
                    user_overhead(env, users, n, tuple(b)), rel=1e-12
                )

    def test_repair_sends_exactly_the_losing_offloaders_local(self):
        rng = np.random.default_rng(21)
        for _ in range(50):
            env, users = random_instance(rng)
            evaluator = ProfileEvaluator(env, users)
            a = random_profile(rng, env, users)
            repaired = tuple(int(d) for d in evaluator.repair_to_beneficial([a])[0])
            for n in range(len(users)):
                if a[n] == 0:
                    assert repaired[n] == 0
                elif is_beneficial(env, users, n, a):
                    assert repaired[n] == a[n]
                else:
                    assert repaired[n] == 0
            # everyone still offloading is beneficial afterwards
            for n in range(len(users)):
                if repaired[n] > 0:
                    assert is_beneficial(env, users, n, repaired)

    def test_rejects_wrong_width(self):
        env, users = random_instance(np.random.default_rng(22))
        with pytest.raises(ValueError, match="width"):
            ProfileEvaluator(env, users).overheads([(0,) * (len(users) + 1)])
