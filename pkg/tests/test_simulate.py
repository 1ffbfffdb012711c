import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from hawkes_rf import (
    PRESETS,
    Exponential,
    Family,
    HawkesModel,
    SimulationConfig,
    SimulationError,
    simulate,
    stability,
)
from hawkes_rf.likelihood import compensator
from factories import FAMILIES, stationary_model


def rescaled_gaps(model, seq):
    return np.diff(np.concatenate(([0.0], compensator(model, seq, seq.times))))


def test_deterministic_per_seed_and_stream():
    model = PRESETS[Family.RAY]
    a = simulate(SimulationConfig(model, 2000.0, 42, stream=(3, 1)))
    b = simulate(SimulationConfig(model, 2000.0, 42, stream=(3, 1)))
    c = simulate(SimulationConfig(model, 2000.0, 42, stream=(3, 2)))
    d = simulate(SimulationConfig(model, 2000.0, 43, stream=(3, 1)))
    assert a.to_text() == b.to_text()
    assert a != c and a != d


@settings(max_examples=40, deadline=None)
@given(family=st.sampled_from(FAMILIES), seed=st.integers(0, 2**64 - 1), horizon=st.floats(1.0, 300.0))
def test_times_ascending_within_window(family, seed, horizon):
    model = stationary_model(family, np.random.default_rng(seed % 2**32))
    seq = simulate(SimulationConfig(model, horizon, seed))
    assert seq.horizon == horizon
    assert np.all(np.diff(seq.times) > 0)
    assert seq.n_events == 0 or (seq.times[0] > 0 and seq.times[-1] <= horizon)


def test_vanishing_kernel_is_poisson():
    model = HawkesModel(0.5, Exponential(1e-12, 1.0))
    n = simulate(SimulationConfig(model, 10_000.0, 1)).n_events
    assert abs(n - 5000) <= 4 * np.sqrt(5000)


@pytest.mark.parametrize("family", FAMILIES)
def test_zero_background_gives_empty_sequence(family):
    model = HawkesModel(0.0, PRESETS[Family(family)].kernel)
    assert simulate(SimulationConfig(model, 1000.0, 2)).n_events == 0


@pytest.mark.parametrize("family", FAMILIES)
def test_time_rescaling_presets(family):
    model = PRESETS[Family(family)]
    seq = simulate(SimulationConfig(model, 12_000.0, 5, stream=(Family(family).code,)))
    assert seq.n_events >= 5000
    assert stats.kstest(rescaled_gaps(model, seq), "expon").pvalue > 0.01


@pytest.mark.parametrize("family", FAMILIES)
def test_time_rescaling_strongly_exciting(family):
    model = stationary_model(family, np.random.default_rng(77), ratio_range=(0.6, 0.8))
    seq = simulate(SimulationConfig(model, 5000.0, 6))
    horizon = 5000.0
    while seq.n_events < 5000:
        horizon *= 2
        seq = simulate(SimulationConfig(model, horizon, 6))
    assert stats.kstest(rescaled_gaps(model, seq), "expon").pvalue > 0.01


@pytest.mark.parametrize("family", FAMILIES)
def test_mean_rate_matches_steady_rate(family):
    model = PRESETS[Family(family)]
    rates = [simulate(SimulationConfig(model, 10_000.0, 9, stream=(k,))).n_events / 10_000.0 for k in range(8)]
    expected = stability(model).steady_rate
    se = np.std(rates, ddof=1) / np.sqrt(len(rates))
    assert abs(np.mean(rates) - expected) <= 4 * se


def test_unstable_model_refused():
    model = HawkesModel(0.5, Exponential(0.5, 0.2))
    with pytest.raises(SimulationError, match="non-stationary"):
        simulate(SimulationConfig(model, 100.0, 1))


def test_runaway_under_override_raises():
    model = HawkesModel(0.5, Exponential(0.5, 0.2))
    with pytest.raises(SimulationError, match="exceeded"):
        simulate(SimulationConfig(model, 1e6, 1, allow_unstable=True, max_events=10_000))


def test_unstable_override_short_horizon():
    model = HawkesModel(0.5, Exponential(0.3, 0.2))
    seq = simulate(SimulationConfig(model, 20.0, 1, allow_unstable=True))
    assert np.all(np.diff(seq.times) > 0)


@pytest.mark.parametrize("kwargs", [{"horizon": 0.0, "seed": 1}, {"horizon": 1.0, "seed": -1}, {"horizon": 1.0, "seed": 2**64}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SimulationConfig(PRESETS[Family.EXP], **kwargs)
