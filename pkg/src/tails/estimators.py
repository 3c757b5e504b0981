"""Generalized (volume-based) tail dependence and its numerical limits.

The upper coefficient is the limit of ``V_C([t,1]^2) / (1 - t)`` as t -> 1
and the lower one the limit of ``V_C([0,t]^2) / t`` as t -> 0.  Both are
evaluated on a schedule of t values approaching the limit point and then
extrapolated.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from tails.copulas import Rect, volume
from tails.discrete import Checkerboard, partition_masses

log = logging.getLogger(__name__)

UPPER = "upper"
LOWER = "lower"
LAST_VALUE = "last_value"
AITKEN = "aitken"

DEFAULT_TOL = 1e-6
# Aitken denominators below this are treated as degenerate
DEGENERATE_DENOM = 1e-15
RATIO_SLACK = 1e-9


def _check_side(side):
    if side not in (UPPER, LOWER):
        raise ValueError(f"side must be 'upper' or 'lower', got {side!r}")
    return side


@dataclass(frozen=True)
class Schedule:
    """Levels at which the tail ratio is evaluated.

    A geometric schedule with base ``t0``, ratio ``r`` and ``count`` K gives
    lower-tail levels ``t0 * r**k`` (k = 0..K-1); for the upper tail the
    same levels are reflected, ``1 - t0 * r**k``.  Explicit schedules are
    used as given, ordered towards the limit point of the requested side.
    """

    kind: str = "geometric"
    t0: float = 0.1
    ratio: float = 0.1
    count: int = 8
    values: tuple = ()

    def __post_init__(self):
        if self.kind == "geometric":
            if not (0 < self.t0 < 1 and 0 < self.ratio < 1 and self.count >= 1):
                raise ValueError("geometric schedule needs 0 < t0 < 1, 0 < r < 1, K >= 1")
        elif self.kind == "explicit":
            vals = tuple(float(t) for t in self.values)
            if not vals or any(not 0 < t < 1 for t in vals) or len(set(vals)) != len(vals):
                raise ValueError("explicit schedule needs distinct t values in (0, 1)")
            object.__setattr__(self, "values", vals)
        else:
            raise ValueError(f"unknown schedule kind {self.kind!r}")

    @classmethod
    def geometric(cls, t0=0.1, ratio=0.1, count=8):
        return cls("geometric", t0=t0, ratio=ratio, count=count)

    @classmethod
    def explicit(cls, values):
        return cls("explicit", values=tuple(values))

    @classmethod
    def default(cls):
        """t = 10**-k (lower) and 1 - 10**-k (upper), k = 1..8."""
        return cls.geometric(0.1, 0.1, 8)

    @classmethod
    def parse(cls, text):
        """Parse ``geometric:<t0>,<r>,<K>`` or ``explicit:<t1>,<t2>,...``."""
        kind, _, rest = text.partition(":")
        parts = [p for p in rest.split(",") if p.strip()]
        if kind == "geometric":
            if len(parts) != 3:
                raise ValueError(f"bad geometric schedule {text!r}")
            return cls.geometric(float(parts[0]), float(parts[1]), int(parts[2]))
        if kind == "explicit":
            return cls.explicit(float(p) for p in parts)
        raise ValueError(f"bad schedule {text!r}")

    def points(self, side):
        """Levels ordered so they approach the side's limit point."""
        _check_side(side)
        if self.kind == "geometric":
            gaps = self.t0 * self.ratio ** np.arange(self.count)
            return gaps if side == LOWER else 1.0 - gaps
        t = np.array(sorted(self.values))
        return t[::-1] if side == LOWER else t

    def to_dict(self):
        if self.kind == "geometric":
            return {"kind": self.kind, "t0": self.t0, "ratio": self.ratio, "count": self.count}
        return {"kind": self.kind, "values": list(self.values)}


@dataclass
class TailEstimate:
    """A tail ratio path together with its extrapolated limit."""

    side: str
    t: np.ndarray
    ratios: np.ndarray
    extrapolated: float
    converged: bool
    method: str
    label: str = ""
    extension: str | None = None
    warnings: list = field(default_factory=list)

    @property
    def path(self):
        return list(zip(self.t.tolist(), self.ratios.tolist()))

    @property
    def raw_last(self):
        return float(self.ratios[-1])

    def to_dict(self):
        out = {
            "label": self.label,
            "side": self.side,
            "path": {"t": self.t.tolist(), "ratio": self.ratios.tolist()},
            "raw_last": self.raw_last,
            "extrapolated": self.extrapolated,
            "converged": self.converged,
            "method": self.method,
        }
        if self.extension:
            out["extension"] = self.extension
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


def aitken(x):
    """Aitken delta-squared transform of a sequence.

    Returns the accelerated sequence (length ``len(x) - 2``) and a mask of
    triples whose second difference was too small to use; at those
    positions the raw value is carried through.
    """
    x = np.asarray(x, dtype=float)
    if x.size < 3:
        raise ValueError("Aitken acceleration needs at least 3 points")
    d1 = x[2:] - x[1:-1]
    d0 = x[1:-1] - x[:-2]
    den = d1 - d0
    degenerate = np.abs(den) < DEGENERATE_DENOM
    safe = np.where(degenerate, 1.0, den)
    acc = np.where(degenerate, x[2:], x[2:] - d1 * d1 / safe)
    return acc, degenerate


def extrapolate(path, method=AITKEN, tol=DEFAULT_TOL, bounds=(0.0, 1.0)):
    """Numerical limit of a ratio path.

    ``path`` is a sequence of ``(t, ratio)`` pairs (or bare ratios) ordered
    towards the limit.  Returns ``(value, converged, method_used)``.
    ``LAST_VALUE`` returns the final ratio.  ``AITKEN`` returns the last
    accelerated value.  If every Aitken denominator degenerates, the
    result falls back to ``LAST_VALUE``.  Convergence means the last two raw
    ratios, or the last two accelerated values, differ by less than ``tol``.
    The accelerated value is clipped to ``bounds``.
    """
    ratios = np.asarray([p[1] if np.ndim(p) else p for p in path], dtype=float)
    if ratios.size == 0:
        raise ValueError("empty path")
    raw_conv = ratios.size >= 2 and abs(ratios[-1] - ratios[-2]) < tol
    if method == LAST_VALUE or ratios.size < 3:
        if method == AITKEN:
            log.debug("path too short for Aitken; using last value")
        return float(ratios[-1]), bool(raw_conv), LAST_VALUE
    if method != AITKEN:
        raise ValueError(f"unknown extrapolation method {method!r}")
    acc, degenerate = aitken(ratios)
    if degenerate.all():
        log.debug("degenerate Aitken acceleration; falling back to last value")
        return float(ratios[-1]), bool(raw_conv), LAST_VALUE
    acc_conv = acc.size >= 2 and abs(acc[-1] - acc[-2]) < tol
    value = float(np.clip(acc[-1], *bounds))
    return value, bool(raw_conv or acc_conv), AITKEN


def _estimate(side, t, ratios, method, tol, label, c=None):
    value, converged, used = extrapolate(ratios, method, tol)
    est = TailEstimate(side, np.asarray(t, dtype=float), np.asarray(ratios, dtype=float),
                       value, converged, used, label=label,
                       extension=getattr(c, "extension", None))
    if not converged:
        est.warnings.append("not converged: the schedule ended before the ratios stabilized")
    return est


def upper_ratio(c, t):
    """``V_C([t,1]^2) / (1 - t)``."""
    return volume(c, Rect.upper_square(t)) / (1.0 - t)


def lower_ratio(c, t):
    """``V_C([0,t]^2) / t``."""
    return volume(c, Rect.lower_square(t)) / t


def lambda_tilde_upper(c, schedule=None, method=AITKEN, tol=DEFAULT_TOL):
    """Generalized upper tail dependence of the copula ``c``."""
    t = (schedule or Schedule.default()).points(UPPER)
    ratios = np.array([upper_ratio(c, ti) for ti in t])
    return _estimate(UPPER, t, ratios, method, tol, "lambda_tilde_upper", c)


def lambda_tilde_lower(c, schedule=None, method=AITKEN, tol=DEFAULT_TOL):
    """Generalized lower tail dependence of the copula ``c``."""
    t = (schedule or Schedule.default()).points(LOWER)
    ratios = np.array([lower_ratio(c, ti) for ti in t])
    return _estimate(LOWER, t, ratios, method, tol, "lambda_tilde_lower", c)


def _require_continuous(c):
    if not getattr(c, "continuous_margins", True):
        raise ValueError(
            f"{c!r} has jumps; the standard tail dependence formula may be ill-posed")


def standard_upper_ratio(c, t):
    """``2 - (1 - C(t,t)) / (1 - t)``."""
    return 2.0 - (1.0 - c.cdf(t, t)) / (1.0 - t)


def standard_lower_ratio(c, t):
    """``C(t,t) / t``."""
    return c.cdf(t, t) / t


def lambda_standard_upper_path(c, schedule=None, method=AITKEN, tol=DEFAULT_TOL):
    """Classical upper tail dependence path, for continuous-margin copulas only."""
    _require_continuous(c)
    t = (schedule or Schedule.default()).points(UPPER)
    ratios = np.array([standard_upper_ratio(c, ti) for ti in t])
    return _estimate(UPPER, t, ratios, method, tol, "lambda_standard_upper", c)


def lambda_standard_lower_path(c, schedule=None, method=AITKEN, tol=DEFAULT_TOL):
    """Classical lower tail dependence path, for continuous-margin copulas only."""
    _require_continuous(c)
    t = (schedule or Schedule.default()).points(LOWER)
    ratios = np.array([standard_lower_ratio(c, ti) for ti in t])
    return _estimate(LOWER, t, ratios, method, tol, "lambda_standard_lower", c)


def partitioned_volume(c, rect):
    """Volume of ``rect`` summed over the pieces between grid-node lines."""
    return float(partition_masses(c.grid, rect).sum())


def partitioned_volume_ratio(c, side, t):
    """Tail ratio of a checkerboard copula computed piecewise over its cells."""
    if not isinstance(c, Checkerboard):
        raise TypeError("partitioned evaluation needs a Checkerboard copula")
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")
    if _check_side(side) == UPPER:
        return partitioned_volume(c, Rect.upper_square(t)) / (1.0 - t)
    return partitioned_volume(c, Rect.lower_square(t)) / t
