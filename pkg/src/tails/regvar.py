"""Bivariate regular variation of a copula's upper corner.

The limit measure of the corner box is

    nu(w, z) = lim_{x -> inf} x * V_C([1 - z/x, 1] x [1 - w/x, 1]),

and ``nu(1, 1)`` coincides with the generalized upper tail coefficient
under the substitution ``t = 1 - 1/x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from tails.copulas import Rect, volume
from tails.discrete import Checkerboard
from tails.estimators import (
    AITKEN,
    DEFAULT_TOL,
    Schedule,
    extrapolate,
    lambda_tilde_upper,
    partitioned_volume,
)
from tails.margins import Margin
from tails.sampling import apply_margin, sample_copula

# a tail quantile source is any margin
TailQuantileFn = Margin


def tail_quantile(f, x):
    """``U(x) = inf{y : 1 - F(y) <= 1/x}`` for the margin ``f``."""
    return f.tail_quantile(x)


def default_xs():
    """x = 10**k, k = 1..8."""
    return 10.0 ** np.arange(1, 9)


@dataclass
class BRVCheckResult:
    x_schedule: np.ndarray
    nu_path: np.ndarray
    nu_estimate: float
    nu_converged: bool
    lambda_tilde_u: float = float("nan")
    lambda_path: np.ndarray | None = None
    lambda_converged: bool = False
    max_path_gap: float = float("nan")
    w: float = 1.0
    z: float = 1.0
    warnings: list = field(default_factory=list)

    @property
    def discrepancy(self):
        return abs(self.nu_estimate - self.lambda_tilde_u)

    def to_dict(self):
        out = {
            "label": "brv_consistency",
            "w": self.w,
            "z": self.z,
            "x_schedule": self.x_schedule.tolist(),
            "nu_path": self.nu_path.tolist(),
            "nu_estimate": self.nu_estimate,
            "nu_converged": self.nu_converged,
            "lambda_tilde_u": self.lambda_tilde_u,
            "discrepancy": self.discrepancy,
        }
        if self.lambda_path is not None:
            out["lambda_path"] = self.lambda_path.tolist()
            out["lambda_converged"] = self.lambda_converged
            out["max_path_gap"] = self.max_path_gap
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


def corner_volume(c, w, z, x):
    """``V_C([1 - z/x, 1] x [1 - w/x, 1])``, piecewise over cells for checkerboards."""
    rect = Rect(1.0 - z / x, 1.0, 1.0 - w / x, 1.0)
    if isinstance(c, Checkerboard):
        return partitioned_volume(c, rect)
    return volume(c, rect)


def nu_estimate(c, w=1.0, z=1.0, xs=None, tol=DEFAULT_TOL):
    """Path ``x * V_C(corner box)`` over ``xs`` and its Aitken-accelerated limit."""
    if not (w > 0 and z > 0):
        raise ValueError("w and z must be positive (the set must avoid the origin)")
    xs = default_xs() if xs is None else np.asarray(xs, dtype=float)
    if np.any(np.diff(xs) <= 0) or np.any(xs <= max(w, z, 1.0)):
        raise ValueError("xs must be strictly increasing and exceed max(w, z, 1)")
    path = np.array([x * corner_volume(c, w, z, x) for x in xs])
    # x * V never exceeds min(w, z)
    value, converged, _ = extrapolate(path, AITKEN, tol, bounds=(0.0, min(w, z)))
    res = BRVCheckResult(xs, path, value, converged, w=w, z=z)
    if not converged:
        res.warnings.append("nu path not converged")
    return res


def matched_schedule(xs):
    """Upper-tail levels ``t = 1 - 1/x`` and the x values they represent exactly.

    ``1 - t`` is exact in floating point for ``t >= 1/2``, so the returned
    ``1 / (1 - t)`` makes ``x * V`` and ``V / (1 - t)`` the same arithmetic.
    """
    t = 1.0 - 1.0 / np.asarray(xs, dtype=float)
    return t, 1.0 / (1.0 - t)


def brv_consistency(c, xs=None, schedule=None, tol=DEFAULT_TOL):
    """Compare ``nu(1, 1)`` with the generalized upper tail coefficient.

    Without ``schedule`` the two paths are matched through ``t = 1 - 1/x``
    and must agree pointwise.  With an explicit ``schedule`` only the limits
    are compared.
    """
    xs = default_xs() if xs is None else np.asarray(xs, dtype=float)
    matched = schedule is None
    if matched:
        t, xs = matched_schedule(xs)
        schedule = Schedule.explicit(t)
    res = nu_estimate(c, 1.0, 1.0, xs, tol)
    lam = lambda_tilde_upper(c, schedule, tol=tol)
    res.lambda_tilde_u = lam.extrapolated
    res.lambda_path = lam.ratios
    res.lambda_converged = lam.converged
    if matched:
        res.max_path_gap = float(np.max(np.abs(lam.ratios - res.nu_path)))
    if not lam.converged:
        res.warnings.append("lambda_tilde_upper path not converged")
    return res


def brv_monte_carlo(c, margin_x, margin_y, x, a=1.0, b=1.0, n=100_000, seed=0):
    """Monte Carlo ``x * P(X / U_X(x) > a, Y / U_Y(x) > b)`` under copula ``c``.

    Works for any pair of margins.  ``U_X`` and ``U_Y`` are the tail
    quantile functions of the two margins.
    """
    s = sample_copula(c, n, seed)
    xv = apply_margin(s.x, margin_x)
    yv = apply_margin(s.y, margin_y)
    ux, uy = margin_x.tail_quantile(x), margin_y.tail_quantile(x)
    hits = np.count_nonzero((xv / ux > a) & (yv / uy > b))
    return x * hits / n
