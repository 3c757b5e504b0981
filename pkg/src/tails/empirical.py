"""Empirical copulas, empirical tail paths and auto tail dependence of a series.

Pseudo-observations are ranks divided by the sample size.  With
``MAX_RANK`` tied values share their largest rank, which reproduces the
right-continuous empirical cdf, so ``R_i / n > t`` is exactly the event
``X_i > F_n^{-1}(t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from tails.estimators import LOWER, UPPER, Schedule, TailEstimate, _check_side

MAX_RANK = "max"
MID_RANK = "mid"

#: minimum expected number of points in an empirical tail box
DEFAULT_MIN_POINTS = 10

UNDEFINED = math.nan


class GridTooDeep(ValueError):
    """A level leaves fewer than the required expected points in the tail box."""


@dataclass(frozen=True)
class PairedSample:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape:
            raise ValueError("x and y must be 1-d arrays of equal length")
        if x.size < 2:
            raise ValueError("need at least 2 pairs")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("sample contains non-finite values")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self):
        return self.x.size


@dataclass(frozen=True)
class SeriesSample:
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("series needs at least 2 values")
        if not np.all(np.isfinite(v)):
            raise ValueError("series contains non-finite values")
        object.__setattr__(self, "values", v)

    @property
    def n(self):
        return self.values.size

    def lagged(self, h):
        """Pairs ``(X_i, X_{i+h})`` for ``i = 1..n-h``."""
        if not 1 <= h <= self.n - 2:
            raise ValueError(f"lag must satisfy 1 <= h <= n - 2, got {h}")
        return PairedSample(self.values[:-h], self.values[h:])


def _ranks(x, method):
    if method == MAX_RANK:
        return stats.rankdata(x, method="max")
    if method == MID_RANK:
        return stats.rankdata(x, method="average")
    raise ValueError(f"unknown rank method {method!r}")


def pseudo_observations(s, method=MAX_RANK):
    """Ranks scaled to (0, 1]: ``(R_i / n, S_i / n)``."""
    return _ranks(s.x, method) / s.n, _ranks(s.y, method) / s.n


def empirical_copula_cdf(s, u, v, method=MAX_RANK):
    """``(1/n) #{i : R_i/n <= u and S_i/n <= v}``."""
    pu, pv = pseudo_observations(s, method)
    return float(np.count_nonzero((pu <= u) & (pv <= v))) / s.n


def _check_depth(t, n, min_points):
    if min(t, 1.0 - t) < min_points / n:
        raise GridTooDeep(
            f"level t={t} leaves fewer than {min_points} expected points with n={n}")


def _tail_counts(pu, pv, side, t):
    if side == UPPER:
        return np.count_nonzero((pu > t) & (pv > t))
    return np.count_nonzero((pu <= t) & (pv <= t))


def empirical_grid(n, side=UPPER, t0=0.1, ratio=0.5, min_points=DEFAULT_MIN_POINTS):
    """Geometric schedule truncated at the deepest admissible level for ``n`` points."""
    k = 0
    while t0 * ratio ** (k + 1) >= min_points / n:
        k += 1
    return Schedule.geometric(t0, ratio, k + 1)


def empirical_lambda_path(s, side=UPPER, grid=None, method=MAX_RANK,
                          min_points=DEFAULT_MIN_POINTS):
    """Volume ratios of the empirical copula along ``grid``.

    The upper volume ``V([t,1]^2)`` is the fraction of pairs with both
    pseudo-observations above ``t``; the lower one is ``C_n(t, t)``.  No
    extrapolation is attempted: ``extrapolated`` is the deepest ratio and
    ``converged`` is always false.
    """
    _check_side(side)
    grid = grid or empirical_grid(s.n, side, min_points=min_points)
    t = grid.points(side)
    for ti in t:
        _check_depth(ti, s.n, min_points)
    pu, pv = pseudo_observations(s, method)
    counts = np.array([_tail_counts(pu, pv, side, ti) for ti in t], dtype=float)
    denom = (1.0 - t) if side == UPPER else t
    ratios = counts / s.n / denom
    est = TailEstimate(side, t, ratios, float(ratios[-1]), False, "last_value",
                       label=f"empirical_{side}")
    est.warnings.append("empirical path: no extrapolation beyond the deepest admissible level")
    if np.any(ratios > 1.0 + 1e-9):
        est.warnings.append("ratios above 1: heavy ties distort the empirical margins")
    return est


def auto_tail_level(s, h, t, method=MAX_RANK, min_points=DEFAULT_MIN_POINTS):
    """Empirical ``P(X_{i+h} > F^{-1}(t) | X_i > F^{-1}(t))``.

    Returns ``nan`` (undefined) when no lagged pair exceeds the level in its
    first coordinate.
    """
    pairs = s.lagged(h)
    _check_depth(t, pairs.n, min_points)
    pu, pv = pseudo_observations(pairs, method)
    cond = pu > t
    k = np.count_nonzero(cond)
    if k == 0:
        return UNDEFINED
    return float(np.count_nonzero(cond & (pv > t))) / k


@dataclass
class AutoTailPath:
    lag: int
    side: str
    t: np.ndarray
    values: np.ndarray
    extrapolated: float
    converged: bool = False
    warnings: list = field(default_factory=list)

    @property
    def path(self):
        return list(zip(self.t.tolist(), self.values.tolist()))

    def to_dict(self):
        vals = [None if math.isnan(v) else v for v in self.values.tolist()]
        last = None if math.isnan(self.extrapolated) else self.extrapolated
        out = {
            "label": f"auto_tail_{self.side}",
            "lag": self.lag,
            "side": self.side,
            "path": {"t": self.t.tolist(), "value": vals},
            "last_admissible": last,
            "converged": self.converged,
        }
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


def _auto_path(s, h, grid, method, side, min_points):
    pairs = s.lagged(h)
    est = empirical_lambda_path(pairs, side, grid or empirical_grid(pairs.n, side,
                                                                     min_points=min_points),
                                method, min_points)
    last = est.ratios[~np.isnan(est.ratios)]
    return AutoTailPath(h, side, est.t, est.ratios,
                        float(last[-1]) if last.size else UNDEFINED,
                        warnings=est.warnings)


def auto_tail_param(s, h=1, grid=None, method=MAX_RANK, min_points=DEFAULT_MIN_POINTS):
    """Generalized upper auto tail dependence at lag ``h``.

    Evaluates ``V([t,1]^2) / (1 - t)`` on the empirical copula of the lagged
    pairs ``(X_i, X_{i+h})``.
    """
    return _auto_path(s, h, grid, method, UPPER, min_points)


def auto_tail_lower(s, h=1, grid=None, method=MAX_RANK, min_points=DEFAULT_MIN_POINTS):
    """Lower-tail mirror of :func:`auto_tail_param`: ``V([0,t]^2) / t``."""
    return _auto_path(s, h, grid, method, LOWER, min_points)
