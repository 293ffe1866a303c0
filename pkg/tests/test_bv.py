"""Unreliable-oracle game: noise bookkeeping, closed form, baselines."""

import math

import numpy as np
import pytest

from parrondo import bv, statevec

import oracles

ATOL = 1e-12


def test_flip_candidates_small():
    assert list(bv.flip_candidates(3, 1)) == [1, 3, 5, 7]
    assert list(bv.flip_candidates(2, 3)) == [1, 2]
    for n in range(2, 8):
        assert bv.flip_candidates(n, 1).size == 1 << (n - 1)


def test_alpha_zero_rejected_everywhere():
    with pytest.raises(ValueError):
        bv.flip_candidates(3, 0)
    with pytest.raises(ValueError):
        bv.NoiseRealization(3, 0, frozenset())
    with pytest.raises(ValueError):
        bv.run_game(3, 0, bv.NOISELESS, seed=1)
    with pytest.raises(ValueError):
        bv.single_reflection_baseline(3, 0, 1)


def test_noise_realization_validates_members():
    bv.NoiseRealization(3, 1, frozenset({1, 3}))
    with pytest.raises(ValueError):
        bv.NoiseRealization(3, 1, frozenset({2}))  # 2 . 1 = 0
    with pytest.raises(ValueError):
        bv.NoiseRealization(3, 1, frozenset({9}))  # out of range


def test_noisy_oracle_limits():
    state = statevec.uniform_state(3)
    # nothing unflipped -> the reliable phase oracle
    everything = bv.NoiseRealization(3, 5, frozenset())
    assert np.array_equal(
        bv.noisy_oracle(state, everything), statevec.phase_oracle(state, 5)
    )
    # everything unflipped -> the oracle never fired
    nothing = bv.NoiseRealization(3, 5, frozenset(int(y) for y in bv.flip_candidates(3, 5)))
    assert np.array_equal(bv.noisy_oracle(state, nothing), state)


def test_noisy_oracle_sign_pattern():
    realization = bv.NoiseRealization(3, 1, frozenset({1, 3}))
    got = bv.noisy_oracle(statevec.uniform_state(3), realization)
    amp = 1.0 / math.sqrt(8.0)
    want = np.array([amp, amp, amp, amp, amp, -amp, amp, -amp])
    assert np.max(np.abs(got - want)) < ATOL


def test_noisy_oracle_rejects_size_mismatch():
    realization = bv.NoiseRealization(3, 1, frozenset())
    with pytest.raises(ValueError, match="qubits"):
        bv.noisy_oracle(statevec.uniform_state(4), realization)


def test_run_game_noiseless_is_certain():
    for n, alpha in ((2, 1), (4, 9), (6, 33)):
        result = bv.run_game(n, alpha, bv.NOISELESS, seed=3)
        assert abs(result.success_probability - 1.0) < ATOL
        assert result.realization.unflipped == frozenset()


def test_run_game_fixed_half_is_exactly_one_quarter():
    for seed in range(5):
        result = bv.run_game(4, 5, bv.FIXED_HALF, seed)
        assert len(result.realization.unflipped) == 4
        assert abs(result.success_probability - 0.25) < ATOL


def test_run_game_matches_closed_form_and_dense_oracle():
    for seed in range(8):
        result = bv.run_game(4, 11, bv.INDEPENDENT, seed)
        count = len(result.realization.unflipped)
        assert abs(result.success_probability - bv.exact_success(4, count)) < ATOL
        dense = oracles.bv_success_dense(4, 11, result.realization.unflipped)
        assert abs(result.success_probability - dense) < ATOL


def test_run_game_is_deterministic():
    a = bv.run_game(5, 7, bv.INDEPENDENT, seed=123)
    b = bv.run_game(5, 7, bv.INDEPENDENT, seed=123)
    assert a == b


def test_exact_success_endpoints():
    assert bv.exact_success(5, 0) == 1.0
    assert bv.exact_success(5, 1 << 4) == 0.0
    assert bv.exact_success(5, 1 << 3) == 0.25
    with pytest.raises(ValueError):
        bv.exact_success(5, (1 << 4) + 1)
    with pytest.raises(ValueError):
        bv.exact_success(5, -1)


def test_independent_exhaustive_mean_values():
    assert abs(bv.independent_exhaustive_mean(3, 1) - 0.3125) < ATOL
    assert abs(bv.independent_exhaustive_mean(4, 1) - 0.28125) < ATOL
    # alpha choice is irrelevant
    assert abs(bv.independent_exhaustive_mean(3, 6) - 0.3125) < ATOL
    with pytest.raises(ValueError):
        bv.independent_exhaustive_mean(5, 1)


def test_independent_monte_carlo_mean_tracks_formula():
    n, trials = 10, 2000
    children = np.random.SeedSequence(2718).spawn(trials)
    values = np.array(
        [bv.run_game(n, 3, bv.INDEPENDENT, s).success_probability for s in children]
    )
    want = 0.25 + 2.0 ** -(n + 1)
    standard_error = values.std(ddof=1) / math.sqrt(trials)
    assert abs(values.mean() - want) <= 4 * standard_error


def test_baseline_values_and_y_independence():
    assert abs(bv.single_reflection_baseline(3, 1, 1) - 0.0625) < ATOL
    assert abs(bv.single_reflection_baseline(2, 1, 1) - 0.25) < ATOL
    values = {
        round(bv.single_reflection_baseline(3, 1, int(y)), 15)
        for y in bv.flip_candidates(3, 1)
    }
    assert len(values) == 1
    with pytest.raises(ValueError, match="y . alpha"):
        bv.single_reflection_baseline(3, 1, 2)


def test_combined_game_beats_single_reflections():
    # strict separation from n=3 up; n=2 is the boundary where both equal 1/4
    for n in range(3, 11):
        assert 0.25 > 4.0 / 4.0**n
    assert 4.0 / 4.0**2 == 0.25


def test_draw_realization_modes():
    rng = np.random.default_rng(1)
    assert bv.draw_realization(4, 5, bv.NOISELESS, rng).unflipped == frozenset()
    fixed = bv.draw_realization(4, 5, bv.FIXED_HALF, rng)
    assert len(fixed.unflipped) == 4
    with pytest.raises(ValueError, match="mode"):
        bv.draw_realization(4, 5, "half", rng)
