import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tails import Clayton, Schedule
from tails.empirical import (
    MAX_RANK,
    MID_RANK,
    GridTooDeep,
    PairedSample,
    SeriesSample,
    auto_tail_level,
    auto_tail_lower,
    auto_tail_param,
    empirical_copula_cdf,
    empirical_lambda_path,
    pseudo_observations,
)
from tails.estimators import LOWER, UPPER
from tails.sampling import iid_series, moving_max_series, sample_copula


@pytest.fixture(scope="module")
def moving_max():
    return moving_max_series(10**6, 3)


def concordant(n=1000):
    x = np.arange(n, dtype=float)
    return PairedSample(x, x.copy())


def test_copula_cdf_examples():
    assert empirical_copula_cdf(concordant(), 0.5, 0.5) == 0.5
    s = PairedSample([1.0, 1, 2, 2], [1.0, 2, 1, 2])
    assert empirical_copula_cdf(s, 0.5, 0.5, MAX_RANK) == 0.25


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 300), u=st.floats(0, 1))
def test_copula_cdf_margin_is_floor(seed, n, u):
    rng = np.random.default_rng(seed)
    s = PairedSample(rng.random(n), rng.random(n))
    assert empirical_copula_cdf(s, u, 1.0) == np.floor(n * u) / n


def test_max_and_mid_ranks_differ_on_ties():
    s = PairedSample([1.0, 1, 2, 2], [1.0, 2, 1, 2])
    assert pseudo_observations(s, MAX_RANK)[0].tolist() == [0.5, 0.5, 1, 1]
    assert pseudo_observations(s, MID_RANK)[0].tolist() == [0.375, 0.375, 0.875, 0.875]
    with pytest.raises(ValueError):
        pseudo_observations(s, "min")


def test_sample_validation():
    with pytest.raises(ValueError):
        PairedSample([1.0, 2.0], [1.0])
    with pytest.raises(ValueError):
        PairedSample([1.0, np.nan], [1.0, 2.0])
    with pytest.raises(ValueError):
        SeriesSample([1.0, 2.0, 3.0]).lagged(2)


def test_path_examples():
    grid = Schedule.explicit([0.6, 0.8, 0.9, 0.95])
    est = empirical_lambda_path(concordant(), UPPER, grid)
    np.testing.assert_allclose(est.ratios, 1.0, rtol=1e-12)
    assert not est.converged
    x = np.arange(1000, dtype=float)
    est = empirical_lambda_path(PairedSample(x, -x), UPPER, grid)
    assert np.all(est.ratios == 0.0)


def test_clayton_lower_recovery():
    s = sample_copula(Clayton(2.0), 200_000, 20240601)
    est = empirical_lambda_path(s, LOWER, Schedule.explicit([0.005]))
    assert est.ratios[0] == pytest.approx(2 ** -0.5, abs=0.05)


def test_grid_too_deep():
    with pytest.raises(GridTooDeep):
        empirical_lambda_path(concordant(100), UPPER, Schedule.explicit([0.95]))
    with pytest.raises(GridTooDeep):
        auto_tail_level(iid_series(100, 1), 1, 0.02)


def test_default_grid_respects_depth():
    est = empirical_lambda_path(concordant(5000), LOWER)
    assert est.t.min() >= 10 / 5000
    assert est.t.min() * 0.5 < 10 / 5000


def test_auto_level_iid():
    assert auto_tail_level(iid_series(10**6, 9), 1, 0.95) == pytest.approx(0.05, abs=0.01)


def test_auto_level_copy_series():
    const = SeriesSample(np.full(500, 3.0))
    for t in (0.5, 0.9, 0.97):
        assert auto_tail_level(const, 1, t) == 1.0
    ramp = SeriesSample(np.arange(500.0))
    assert auto_tail_level(ramp, 1, 0.9) == 1.0


def test_auto_param_and_lower_copy_series():
    # a strictly increasing series makes every lagged pair concordant
    ramp = SeriesSample(np.arange(1001.0))
    grid = Schedule.explicit([0.1, 0.5, 0.9, 0.95])
    np.testing.assert_allclose(auto_tail_param(ramp, 1, grid).values, 1.0, rtol=1e-12)
    np.testing.assert_allclose(auto_tail_lower(ramp, 1, grid).values, 1.0, rtol=1e-12)


def test_auto_param_iid():
    s = iid_series(10**6, 5)
    path = auto_tail_param(s, 1, Schedule.explicit([0.9, 0.99]))
    np.testing.assert_allclose(path.values, [0.1, 0.01], rtol=0.1)
    low = auto_tail_lower(s, 1, Schedule.explicit([0.05]))
    assert low.values[0] == pytest.approx(0.05, abs=0.005)


def test_moving_max_levels(moving_max):
    assert auto_tail_level(moving_max, 1, 0.999) == pytest.approx(0.5, abs=0.05)
    assert auto_tail_level(moving_max, 2, 0.999) == pytest.approx(0.0, abs=0.02)


def test_moving_max_paths(moving_max):
    grid = Schedule.explicit([0.9, 0.99, 0.999])
    up = auto_tail_param(moving_max, 1, grid)
    assert up.extrapolated == pytest.approx(0.5, abs=0.05)
    neg = SeriesSample(-moving_max.values)
    low = auto_tail_lower(neg, 1, Schedule.explicit([0.1, 0.01, 0.001]))
    assert low.extrapolated == pytest.approx(0.5, abs=0.05)


def test_undefined_level_is_nan_not_zero():
    s = SeriesSample(np.full(100, 1.0))
    assert np.isnan(auto_tail_level(s, 1, 0.6, MID_RANK))
    path = auto_tail_param(s, 1, Schedule.explicit([0.6]), MID_RANK)
    assert path.values[0] == 0.0


def test_auto_path_serializes_nan_as_null():
    from tails.empirical import AutoTailPath

    p = AutoTailPath(1, UPPER, np.array([0.9]), np.array([np.nan]), np.nan)
    d = p.to_dict()
    assert d["path"]["value"] == [None] and d["last_admissible"] is None


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_rank_invariance_is_bit_exact(seed):
    rng = np.random.default_rng(seed)
    s = sample_copula(Clayton(1.5), 2000, int(rng.integers(2**63)))
    moved = PairedSample(np.exp(s.x), s.y ** 3 + 7)
    grid = Schedule.explicit([0.9, 0.95, 0.99])
    for side in (UPPER, LOWER):
        a = empirical_lambda_path(s, side, grid).ratios
        b = empirical_lambda_path(moved, side, grid).ratios
        assert np.array_equal(a, b)
    series = SeriesSample(rng.standard_normal(2000))
    a = auto_tail_param(series, 2, grid).values
    b = auto_tail_param(SeriesSample(np.arctan(series.values)), 2, grid).values
    assert np.array_equal(a, b)


def test_iid_level_mean_within_three_standard_errors():
    t = 0.9
    vals = np.array([auto_tail_level(iid_series(10**5, seed), 1, t) for seed in range(100)])
    se = vals.std(ddof=1) / np.sqrt(vals.size)
    assert abs(vals.mean() - (1 - t)) < 3 * se


def test_reflection_maps_upper_to_lower():
    s = sample_copula(Clayton(2.0), 1000, 4)
    refl = PairedSample(-s.x, -s.y)
    t = np.array([0.9, 0.95, 0.98])
    up = empirical_lambda_path(s, UPPER, Schedule.explicit(t)).ratios
    low = empirical_lambda_path(refl, LOWER, Schedule.explicit(1 - t)).ratios
    np.testing.assert_allclose(up, low, rtol=1e-12)


def test_volume_ratio_equals_exceedance_level_at_aligned_t():
    s = iid_series(5001, 8)
    m = s.n - 1
    for k in (4000, 4500, 4900):
        t = k / m
        ratio = auto_tail_param(s, 1, Schedule.explicit([t])).values[0]
        assert ratio == pytest.approx(auto_tail_level(s, 1, t), rel=1e-12)
