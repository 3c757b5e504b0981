import numpy as np
import pytest
from numpy.testing import assert_allclose

from tails import Clayton, Comonotone, Gumbel, Independence, Rect, Schedule, volume
from tails.discrete import DiscretePMF
from tails.estimators import upper_ratio
from tails.margins import Margin
from tails.regvar import (
    brv_consistency,
    brv_monte_carlo,
    corner_volume,
    default_xs,
    matched_schedule,
    nu_estimate,
    tail_quantile,
)

from conftest import random_checkerboard

SOURCES = [Margin.uniform(), Margin.unit_frechet(), Margin.unit_pareto(),
           Margin.exponential(2.0), Margin.discrete(DiscretePMF.bernoulli(0.5)),
           Margin.discrete(DiscretePMF([-1.0, 0.0, 4.0], [0.2, 0.5, 0.3]))]


def test_tail_quantile_examples():
    assert tail_quantile(Margin.uniform(), 10) == pytest.approx(0.9, abs=1e-15)
    assert tail_quantile(Margin.unit_pareto(), 100) == 100
    assert tail_quantile(Margin.discrete(DiscretePMF.bernoulli(0.5)), 3) == 1.0


@pytest.mark.parametrize("f", SOURCES, ids=lambda m: m.kind)
def test_tail_quantile_is_infimum(f):
    for x in (1.5, 4.0, 1e3):
        y = tail_quantile(f, x)
        assert f.sf(y) <= 1 / x * (1 + 1e-12)
        if f.kind != "discrete":
            assert f.sf(y * (1 - 1e-6) - 1e-9) > 1 / x


@pytest.mark.parametrize("f", SOURCES, ids=lambda m: m.kind)
def test_tail_quantile_monotone(f):
    vals = [tail_quantile(f, x) for x in np.logspace(1e-3, 8, 100)]
    assert np.all(np.diff(vals) >= 0)


def test_tail_quantile_rejects_small_x():
    with pytest.raises(ValueError):
        tail_quantile(Margin.uniform(), 1.0)


def test_nu_examples():
    res = nu_estimate(Independence(), 1, 1, 10.0 ** np.arange(1, 7))
    assert_allclose(res.nu_path, 1 / res.x_schedule, rtol=1e-9)
    assert res.nu_estimate == pytest.approx(0, abs=1e-6)
    res = nu_estimate(Comonotone(), 2, 3, 10.0 ** np.arange(1, 7))
    assert_allclose(res.nu_path, 2.0, rtol=1e-9)
    assert res.nu_estimate == pytest.approx(2.0, abs=1e-9)
    res = nu_estimate(Gumbel(2.0))
    assert res.nu_estimate == pytest.approx(2 - np.sqrt(2), abs=1e-3)


def test_nu_rejects_degenerate_boxes():
    for w, z in ((0, 1), (1, 0), (-1, 1)):
        with pytest.raises(ValueError):
            nu_estimate(Independence(), w, z)
    with pytest.raises(ValueError):
        nu_estimate(Independence(), 5, 1, [2.0, 10.0])
    with pytest.raises(ValueError):
        nu_estimate(Independence(), 1, 1, [100.0, 10.0])


def test_consistency_examples():
    for c in (Comonotone(), Independence()):
        res = brv_consistency(c)
        assert res.discrepancy < 1e-6
        assert res.max_path_gap <= 1e-12
    res = brv_consistency(Clayton(2.0))
    assert res.lambda_tilde_u == pytest.approx(0, abs=1e-6)
    assert res.discrepancy < 1e-6


@pytest.mark.parametrize("c", [Gumbel(2.0), Gumbel(3.0), Clayton(1.0), Independence()], ids=repr)
def test_substitution_identity_pointwise(c):
    t, xs = matched_schedule(default_xs())
    for ti, x in zip(t, xs):
        assert abs(x * corner_volume(c, 1, 1, x) - upper_ratio(c, ti)) <= 1e-12


def test_unmatched_schedule_limits_agree():
    res = brv_consistency(Gumbel(2.0), schedule=Schedule.geometric(0.2, 0.2, 8))
    assert np.isnan(res.max_path_gap)
    assert res.discrepancy < 1e-3


def test_comonotone_homogeneity():
    c = Comonotone()
    for a in (0.5, 2.0, 3.0):
        for x in (1e2, 1e3, 1e4):
            lhs = x * corner_volume(c, a * 1.0, a * 2.0, x)
            rhs = a * x * corner_volume(c, 1.0, 2.0, x)
            assert lhs == pytest.approx(rhs, rel=1e-10)


def test_independence_path_decays_as_inverse_x():
    res = nu_estimate(Independence(), 1.5, 0.5, 10.0 ** np.arange(1, 7))
    p, x = res.nu_path, res.x_schedule
    assert_allclose(p[1:] / p[:-1], x[:-1] / x[1:], rtol=1e-9)


def test_checkerboard_corner_volume_uses_partition():
    c = random_checkerboard(np.random.default_rng(17))
    for x in (1.5, 7.0, 1e3):
        rect = Rect(1 - 1 / x, 1.0, 1 - 0.5 / x, 1.0)
        assert corner_volume(c, 0.5, 1.0, x) == pytest.approx(volume(c, rect), abs=1e-12)


def test_monte_carlo_with_pareto_margins():
    c = Gumbel(2.0)
    mc = brv_monte_carlo(c, Margin.unit_pareto(), Margin.unit_pareto(), 100.0, n=10**6, seed=1)
    assert mc == pytest.approx(upper_ratio(c, 0.99), abs=0.03)


def test_monte_carlo_mixed_margins():
    # exponential and Frechet margins share the copula's corner mass
    c = Comonotone()
    mc = brv_monte_carlo(c, Margin.exponential(1.0), Margin.unit_frechet(), 50.0,
                         n=10**5, seed=2)
    assert mc == pytest.approx(1.0, abs=0.1)


def test_result_serialization():
    d = brv_consistency(Gumbel(2.0)).to_dict()
    assert d["label"] == "brv_consistency"
    assert len(d["nu_path"]) == len(d["lambda_path"]) == 8
