import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from tails import (
    Clayton,
    Comonotone,
    Copula,
    Gaussian,
    Gumbel,
    Independence,
    NonMonotoneError,
    Rect,
    StudentT,
    cdf,
    survival,
    validate_grid,
    volume,
)

from conftest import CLOSED_FORM, QUADRATURE, SLOW_QUADRATURE

unit = st.floats(0.0, 1.0, allow_nan=False)


class Corrupted(Copula):
    name = "corrupted"

    def _cdf(self, u, v):
        return u * v**2 + 0.1


class Asymmetric(Copula):
    """u v (1 + 0.5 (1 - u) v (1 - v)): 2-increasing but not exchangeable."""

    def _cdf(self, u, v):
        return u * v * (1 + 0.5 * (1 - u) * v * (1 - v))


def test_cdf_examples():
    assert cdf(Independence(), 0.3, 0.7) == pytest.approx(0.21, abs=1e-15)
    assert cdf(Comonotone(), 0.3, 0.7) == 0.3
    assert cdf(Clayton(1.0), 0.5, 0.5) == pytest.approx(1 / 3, abs=1e-15)


def test_volume_examples():
    assert volume(Independence(), Rect(0.2, 0.5, 0.1, 0.4)) == pytest.approx(0.09, abs=1e-15)
    assert volume(Comonotone(), Rect(0.9, 1, 0.9, 1)) == pytest.approx(0.1, abs=1e-15)


@pytest.mark.parametrize("c", CLOSED_FORM + QUADRATURE, ids=repr)
def test_origin_box_volume_is_cdf(c):
    for u, v in [(0.3, 0.8), (0.05, 0.5), (0.9, 0.99)]:
        assert volume(c, Rect(0, u, 0, v)) == c.cdf(u, v)


def test_survival_examples():
    assert survival(Independence(), 0.9, 0.9) == pytest.approx(0.01, abs=1e-15)
    assert survival(Comonotone(), 0.9, 0.8) == pytest.approx(0.1, abs=1e-15)
    assert survival(Clayton(1.0), 0.5, 0.5) == pytest.approx(1 / 3, abs=1e-15)


@pytest.mark.parametrize("c", CLOSED_FORM + QUADRATURE, ids=repr)
def test_survival_matches_four_term_formula(c):
    g = np.linspace(0, 1, 21)
    uu, vv = np.meshgrid(g, g)
    assert_allclose(c.survival(uu, vv), 1 - uu - vv + c.cdf(uu, vv), atol=1e-14)


def test_rect_rejects_bad_input():
    with pytest.raises(ValueError):
        Rect(0.5, 0.4, 0, 1)
    with pytest.raises(ValueError):
        Rect(-0.1, 0.4, 0, 1)
    with pytest.raises(ValueError):
        Rect(0, 1.2, 0, 1)


def test_cdf_rejects_out_of_range():
    with pytest.raises(ValueError):
        Independence().cdf(1.5, 0.2)
    with pytest.raises(ValueError):
        Independence().cdf(np.nan, 0.2)


@pytest.mark.parametrize("make", [
    lambda: Clayton(0), lambda: Clayton(-1), lambda: Gumbel(0.99),
    lambda: Gaussian(1.0), lambda: Gaussian(-1.0), lambda: StudentT(0.2, 0), lambda: StudentT(1, 3),
])
def test_parameter_ranges(make):
    with pytest.raises(ValueError):
        make()


def test_clayton_and_gumbel_limits_are_not_special_cased():
    # Gumbel(1) is the product copula by formula, not by dispatch
    g = Gumbel(1.0)
    assert type(g) is Gumbel
    assert_allclose(g.cdf(0.3, 0.6), 0.18, atol=1e-15)
    assert type(Clayton(1e-6)) is Clayton


@pytest.mark.parametrize("c", CLOSED_FORM, ids=repr)
def test_boundary_identities_closed_form(c):
    g = np.linspace(0, 1, 101)
    assert_allclose(c.cdf(g, 0 * g), 0, atol=1e-12)
    assert_allclose(c.cdf(0 * g, g), 0, atol=1e-12)
    assert_allclose(c.cdf(g, 1 + 0 * g), g, atol=1e-12)
    assert_allclose(c.cdf(1 + 0 * g, g), g, atol=1e-12)


@pytest.mark.parametrize("c", QUADRATURE + SLOW_QUADRATURE, ids=repr)
def test_boundary_identities_quadrature(c):
    g = np.linspace(0, 1, 11)
    assert_allclose(c.cdf(g, 0 * g), 0, atol=1e-8)
    assert_allclose(c.cdf(g, 1 + 0 * g), g, atol=1e-8)
    assert_allclose(c.cdf(1 + 0 * g, g), g, atol=1e-8)


@pytest.mark.parametrize("c", CLOSED_FORM + QUADRATURE, ids=repr)
def test_random_rect_volumes_nonnegative(c):
    rng = np.random.default_rng(11)
    pts = np.sort(rng.random((10_000, 2, 2)), axis=2)
    u1, u2 = pts[:, 0, 0], pts[:, 0, 1]
    v1, v2 = pts[:, 1, 0], pts[:, 1, 1]
    vol = c.cdf(u2, v2) - c.cdf(u2, v1) - c.cdf(u1, v2) + c.cdf(u1, v1)
    assert vol.min() >= -1e-9


@pytest.mark.parametrize("c", CLOSED_FORM + QUADRATURE, ids=repr)
@settings(max_examples=200, deadline=None)
@given(u=unit, v=unit)
def test_frechet_bounds_and_exchangeability(c, u, v):
    val = c.cdf(u, v)
    assert max(u + v - 1, 0) - 1e-12 <= val <= min(u, v) + 1e-12
    assert val == pytest.approx(c.cdf(v, u), abs=1e-12)


@pytest.mark.parametrize("c", CLOSED_FORM + QUADRATURE, ids=repr)
@settings(max_examples=50, deadline=None)
@given(a=unit, b=unit, c_=unit, d=unit, k=st.integers(1, 6), m=st.integers(1, 6))
def test_volume_additivity_over_grid_partitions(c, a, b, c_, d, k, m):
    u1, u2 = sorted((a, b))
    v1, v2 = sorted((c_, d))
    us = np.linspace(u1, u2, k + 1)
    vs = np.linspace(v1, v2, m + 1)
    us[-1], vs[-1] = u2, v2
    whole = volume(c, Rect(u1, u2, v1, v2))
    parts = sum(volume(c, Rect(us[i], us[i + 1], vs[j], vs[j + 1]))
                for i in range(k) for j in range(m))
    assert parts == pytest.approx(whole, abs=1e-12)


def test_validate_grid_examples():
    assert validate_grid(Independence(), 100).max_violation == 0.0
    assert validate_grid(Clayton(2.0), 100).max_violation <= 1e-12


def test_validate_grid_reports_corrupted_boundary():
    rep = validate_grid(Corrupted(), 100)
    mag, (u, v) = rep.boundary["v=1"]
    assert mag == pytest.approx(0.1)
    assert v == 1.0
    assert rep.max_violation >= 0.1


def test_validate_grid_reports_asymmetry():
    rep = validate_grid(Asymmetric(), 50)
    assert rep.symmetry[0] > 1e-3
    assert rep.increasing[0] == 0.0


def test_volume_raises_on_genuinely_negative_mass():
    class Bad(Copula):
        def _cdf(self, u, v):
            return np.maximum(u, v)

    with pytest.raises(NonMonotoneError):
        volume(Bad(), Rect(0.4, 0.6, 0.4, 0.6))


@pytest.mark.parametrize("c", [Gaussian(0.3), StudentT(0.3, 4.0)], ids=repr)
def test_validate_grid_quadrature_families(c):
    rep = validate_grid(c, 8 if isinstance(c, StudentT) else 100)
    assert rep.max_violation <= c.cdf_tol
