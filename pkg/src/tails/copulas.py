"""Bivariate copula families, the C-volume functional and grid validation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from tails._bvn import bvn_lower, bvn_upper, bvt_lower_scalar

# Volumes below this are treated as genuine 2-increasing violations.
NEGATIVE_VOLUME_TOL = 1e-9


class NonMonotoneError(ValueError):
    """A computed C-volume is negative beyond floating tolerance."""


def _check_unit(name, x):
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {x!r}")
    return arr


@dataclass(frozen=True)
class Rect:
    """The box ``[u1, u2] x [v1, v2]`` inside the unit square."""

    u1: float
    u2: float
    v1: float
    v2: float

    def __post_init__(self):
        for name in ("u1", "u2", "v1", "v2"):
            val = float(getattr(self, name))
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {val!r}")
            object.__setattr__(self, name, val)
        if self.u1 > self.u2 or self.v1 > self.v2:
            raise ValueError(f"degenerate ordering in {self!r}")

    @classmethod
    def lower_square(cls, t):
        return cls(0.0, t, 0.0, t)

    @classmethod
    def upper_square(cls, t):
        return cls(t, 1.0, t, 1.0)

    @property
    def area(self):
        return (self.u2 - self.u1) * (self.v2 - self.v1)


class Copula:
    """Base class for a bivariate copula evaluated through its cdf.

    Subclasses implement ``_cdf`` on broadcast float arrays.  ``_survival``
    defaults to ``1 - u - v + C(u, v)`` and is overridden where a better
    conditioned formula exists.
    """

    name = "copula"
    #: absolute accuracy of ``cdf``; drives boundary-check tolerances
    cdf_tol = 1e-12
    continuous_margins = True

    def cdf(self, u, v):
        u = _check_unit("u", u)
        v = _check_unit("v", v)
        out = self._cdf(*np.broadcast_arrays(u, v))
        return out if np.ndim(out) else float(out)

    def survival(self, u, v):
        """P(U > u, V > v), i.e. the C-volume of ``[u, 1] x [v, 1]``."""
        u = _check_unit("u", u)
        v = _check_unit("v", v)
        out = self._survival(*np.broadcast_arrays(u, v))
        return out if np.ndim(out) else float(out)

    def _cdf(self, u, v):
        raise NotImplementedError

    def _survival(self, u, v):
        return 1.0 - u - v + self._cdf(u, v)

    def params(self):
        return {}

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{type(self).__name__}({args})"


class Independence(Copula):
    name = "independence"

    def _cdf(self, u, v):
        return u * v

    def _survival(self, u, v):
        return (1.0 - u) * (1.0 - v)


class Comonotone(Copula):
    """Upper Fréchet bound ``min(u, v)``."""

    name = "comonotone"

    def _cdf(self, u, v):
        return np.minimum(u, v)

    def _survival(self, u, v):
        return 1.0 - np.maximum(u, v)


class Countermonotone(Copula):
    """Lower Fréchet bound ``max(u + v - 1, 0)``."""

    name = "countermonotone"

    def _cdf(self, u, v):
        return np.maximum(u + v - 1.0, 0.0)

    def _survival(self, u, v):
        return np.maximum(1.0 - u - v, 0.0)


@dataclass(frozen=True, repr=False)
class Clayton(Copula):
    r"""Clayton copula :math:`(u^{-\theta} + v^{-\theta} - 1)^{-1/\theta}`, ``theta > 0``."""

    theta: float
    name = "clayton"

    def __post_init__(self):
        if not self.theta > 0:
            raise ValueError(f"Clayton requires theta > 0, got {self.theta}")

    def params(self):
        return {"theta": self.theta}

    def _cdf(self, u, v):
        th = self.theta
        with np.errstate(divide="ignore", over="ignore"):
            s = u ** -th + v ** -th - 1.0
            out = s ** (-1.0 / th)
        return np.where((u == 0) | (v == 0), 0.0, out)

    def _survival(self, u, v):
        th = self.theta
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            # log C = -log1p(expm1(-th log u) + expm1(-th log v)) / th
            eu = np.expm1(-th * np.log(u))
            ev = np.expm1(-th * np.log(v))
            log_c = -np.log1p(eu + ev) / th
            out = (1.0 - u) + (1.0 - v) + np.expm1(log_c)
        return np.where((u == 0) | (v == 0), 1.0 - np.maximum(u, v), np.maximum(out, 0.0))

    def lower_tail(self):
        return 2.0 ** (-1.0 / self.theta)

    def conditional_cdf(self, v, u):
        """P(V <= v | U = u), the partial derivative of C in ``u``."""
        th = self.theta
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            log_h = (-th - 1.0) * np.log(u) + (-1.0 / th - 1.0) * np.log(
                u ** -th + v ** -th - 1.0)
            out = np.exp(log_h)
        return np.where(v <= 0, 0.0, np.where(v >= 1, 1.0, out))


@dataclass(frozen=True, repr=False)
class Gumbel(Copula):
    r"""Gumbel copula :math:`\exp(-((-\ln u)^\theta + (-\ln v)^\theta)^{1/\theta})`, ``theta >= 1``."""

    theta: float
    name = "gumbel"

    def __post_init__(self):
        if not self.theta >= 1:
            raise ValueError(f"Gumbel requires theta >= 1, got {self.theta}")

    def params(self):
        return {"theta": self.theta}

    def _log_cdf(self, u, v):
        th = self.theta
        with np.errstate(divide="ignore"):
            a = (-np.log(u)) ** th + (-np.log(v)) ** th
        return -(a ** (1.0 / th))

    def _cdf(self, u, v):
        return np.exp(self._log_cdf(u, v))

    def _survival(self, u, v):
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (1.0 - u) + (1.0 - v) + np.expm1(self._log_cdf(u, v))
        return np.maximum(out, 0.0)

    def upper_tail(self):
        return 2.0 - 2.0 ** (1.0 / self.theta)

    def conditional_cdf(self, v, u):
        """P(V <= v | U = u)."""
        th = self.theta
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            lu, lv = -np.log(u), -np.log(v)
            a = lu ** th + lv ** th
            log_h = (-(a ** (1.0 / th)) + (th - 1.0) * np.log(lu) + lu
                     + (1.0 / th - 1.0) * np.log(a))
            out = np.exp(log_h)
        return np.where(v <= 0, 0.0, np.where(v >= 1, 1.0, out))


def _probit_pair(u):
    """Standard normal quantile with the upper half taken from ``1 - u``."""
    with np.errstate(divide="ignore"):
        return np.where(u > 0.5, -special.ndtri(1.0 - u), special.ndtri(u))


@dataclass(frozen=True, repr=False)
class Gaussian(Copula):
    """Gaussian copula with correlation ``rho`` in (-1, 1)."""

    rho: float
    name = "gaussian"
    cdf_tol = 1e-10

    def __post_init__(self):
        if not -1 < self.rho < 1:
            raise ValueError(f"Gaussian requires -1 < rho < 1, got {self.rho}")

    def params(self):
        return {"rho": self.rho}

    def _cdf(self, u, v):
        return bvn_lower(_probit_pair(u), _probit_pair(v), self.rho)

    def _survival(self, u, v):
        return bvn_upper(_probit_pair(u), _probit_pair(v), self.rho)


@dataclass(frozen=True, repr=False)
class StudentT(Copula):
    """Student-t copula with correlation ``rho`` and ``nu > 0`` degrees of freedom.

    Only one orthant is ever integrated: the lower one below the
    anti-diagonal and, by radial symmetry, the reflected one above it.  cdf
    and survival both derive from that single value, so they are consistent
    to rounding and small probabilities keep their relative accuracy.
    """

    rho: float
    nu: float
    name = "student_t"
    cdf_tol = 1e-8

    def __post_init__(self):
        if not -1 < self.rho < 1:
            raise ValueError(f"StudentT requires -1 < rho < 1, got {self.rho}")
        if not self.nu > 0:
            raise ValueError(f"StudentT requires nu > 0, got {self.nu}")

    def params(self):
        return {"rho": self.rho, "nu": self.nu}

    def _orthant(self, u, v):
        # lower orthant probability at t-quantiles of u, v
        out = np.empty(u.shape)
        for idx in np.ndindex(u.shape):
            a = float(special.stdtrit(self.nu, u[idx])) if 0 < u[idx] < 1 else (
                -math.inf if u[idx] == 0 else math.inf)
            b = float(special.stdtrit(self.nu, v[idx])) if 0 < v[idx] < 1 else (
                -math.inf if v[idx] == 0 else math.inf)
            out[idx] = bvt_lower_scalar(a, b, self.rho, self.nu)
        return out

    def _cdf_and_survival(self, u, v):
        upper = (u + v) > 1.0
        c = np.empty(u.shape)
        s = np.empty(u.shape)
        if np.any(~upper):
            uu, vv = u[~upper], v[~upper]
            c[~upper] = self._orthant(uu, vv)
            s[~upper] = 1.0 - uu - vv + c[~upper]
        if np.any(upper):
            uu, vv = u[upper], v[upper]
            s[upper] = self._orthant(1.0 - uu, 1.0 - vv)
            c[upper] = uu + vv - 1.0 + s[upper]
        return c, s

    def _cdf(self, u, v):
        c, _ = self._cdf_and_survival(u, v)
        return np.clip(c, np.maximum(u + v - 1.0, 0.0), np.minimum(u, v))

    def _survival(self, u, v):
        _, s = self._cdf_and_survival(u, v)
        return np.clip(s, np.maximum(1.0 - u - v, 0.0), np.minimum(1.0 - u, 1.0 - v))


def cdf(c, u, v):
    """C(u, v) for the copula ``c``."""
    return c.cdf(u, v)


def survival(c, u, v):
    """Joint survival ``1 - u - v + C(u, v)``, the volume of ``[u, 1] x [v, 1]``."""
    return c.survival(u, v)


def _clamp_volume(vol, rect):
    if vol < -NEGATIVE_VOLUME_TOL:
        raise NonMonotoneError(f"negative C-volume {vol:.3e} on {rect}")
    return max(vol, 0.0)


def volume(c, rect):
    """C-volume of ``rect``: ``C(u2,v2) - C(u2,v1) - C(u1,v2) + C(u1,v1)``.

    Boxes anchored at the origin return ``C(u2, v2)`` and boxes anchored at
    ``(1, 1)`` use the copula's survival routine; both are the same algebra
    as the four-term sum with less cancellation.  Negative round-off above
    ``-NEGATIVE_VOLUME_TOL`` is clamped to zero.
    """
    if rect.u1 == 0.0 and rect.v1 == 0.0:
        vol = c.cdf(rect.u2, rect.v2)
    elif rect.u2 == 1.0 and rect.v2 == 1.0:
        vol = c.survival(rect.u1, rect.v1)
    else:
        vals = c.cdf(np.array([rect.u2, rect.u2, rect.u1, rect.u1]),
                     np.array([rect.v2, rect.v1, rect.v2, rect.v1]))
        vol = vals[0] - vals[1] - vals[2] + vals[3]
    return _clamp_volume(float(vol), rect)


@dataclass
class ValidationReport:
    """Worst violations of the copula axioms found on a regular grid."""

    n: int
    boundary: dict = field(default_factory=dict)
    increasing: tuple = (0.0, None)
    symmetry: tuple = (0.0, None)

    @property
    def max_violation(self):
        mags = [m for m, _ in self.boundary.values()]
        mags += [self.increasing[0], self.symmetry[0]]
        return max(mags)

    @property
    def worst(self):
        """(kind, magnitude, location) of the largest violation."""
        items = [(f"boundary {edge}", m, loc) for edge, (m, loc) in self.boundary.items()]
        items += [("2-increasing", *self.increasing), ("symmetry", *self.symmetry)]
        return max(items, key=lambda it: it[1])

    def ok(self, tol=0.0):
        return self.max_violation <= tol

    def to_dict(self):
        kind, mag, loc = self.worst
        return {
            "n": self.n,
            "max_violation": self.max_violation,
            "worst": {"kind": kind, "magnitude": mag, "location": loc},
            "boundary": {e: {"magnitude": m, "location": loc}
                         for e, (m, loc) in self.boundary.items()},
            "increasing": {"magnitude": self.increasing[0], "location": self.increasing[1]},
            "symmetry": {"magnitude": self.symmetry[0], "location": self.symmetry[1]},
        }


def _argmax_loc(err, us, vs):
    i, j = np.unravel_index(int(np.argmax(err)), err.shape)
    return float(err[i, j]), (float(us[i]), float(vs[j]))


def validate_grid(c, n=100, chunk=256):
    """Check boundary conditions, 2-increasingness and symmetry on an ``n x n`` grid.

    Violations are measured, never raised.  Boundary checks use the ``n + 1``
    grid points on each edge; the 2-increasing check covers all ``n**2``
    cells.  Rows are processed in chunks so large ``n`` stays bounded in memory.
    """
    if not 2 <= n <= 10_000:
        raise ValueError("n must be in [2, 10000]")
    g = np.linspace(0.0, 1.0, n + 1)
    zeros, ones = np.zeros_like(g), np.ones_like(g)
    report = ValidationReport(n=n)
    edges = {
        "v=0": (np.abs(c.cdf(g, zeros)), lambda x: (float(x), 0.0)),
        "u=0": (np.abs(c.cdf(zeros, g)), lambda x: (0.0, float(x))),
        "v=1": (np.abs(c.cdf(g, ones) - g), lambda x: (float(x), 1.0)),
        "u=1": (np.abs(c.cdf(ones, g) - g), lambda x: (1.0, float(x))),
    }
    for edge, (err, loc) in edges.items():
        i = int(np.argmax(err))
        report.boundary[edge] = (float(err[i]), loc(g[i]))

    worst_inc = (0.0, None)
    prev = None
    start = 0
    # rows of C on the grid, one chunk at a time (overlapping by one row)
    while start <= n:
        stop = min(start + chunk, n + 1)
        uu, vv = np.meshgrid(g[start:stop], g, indexing="ij")
        block = c.cdf(uu, vv)
        rows = block if prev is None else np.vstack([prev, block])
        us = g[start:stop] if prev is None else g[start - 1:stop]
        if rows.shape[0] >= 2:
            vol = rows[1:, 1:] - rows[1:, :-1] - rows[:-1, 1:] + rows[:-1, :-1]
            m, loc = _argmax_loc(-vol, us[:-1], g[:-1])
            if m > worst_inc[0]:
                worst_inc = (m, loc)
        prev = block[-1:]
        start = stop
    report.increasing = worst_inc

    # symmetry on a coarser sub-grid keeps this O(n^2) with a small constant
    step = max(1, n // 200)
    gs = g[::step]
    uu, vv = np.meshgrid(gs, gs, indexing="ij")
    asym = np.abs(c.cdf(uu, vv) - c.cdf(vv, uu))
    report.symmetry = _argmax_loc(asym, gs, gs) if asym.max() > 0 else (0.0, None)
    return report
