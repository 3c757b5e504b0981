"""Univariate margins: quantile transforms and tail quantile functions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from tails.discrete import DiscretePMF


@dataclass(frozen=True)
class Margin:
    """A univariate distribution given by kind.

    ``kind`` is one of ``uniform``, ``unit_frechet``, ``unit_pareto``,
    ``exponential`` (with ``rate``) or ``discrete`` (with ``pmf``).
    """

    kind: str
    rate: float = 1.0
    pmf: DiscretePMF | None = None

    KINDS = ("uniform", "unit_frechet", "unit_pareto", "exponential", "discrete")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown margin kind {self.kind!r}")
        if self.kind == "exponential" and not self.rate > 0:
            raise ValueError("exponential rate must be positive")
        if self.kind == "discrete" and self.pmf is None:
            raise ValueError("discrete margin needs a pmf")

    @classmethod
    def uniform(cls):
        return cls("uniform")

    @classmethod
    def unit_frechet(cls):
        return cls("unit_frechet")

    @classmethod
    def unit_pareto(cls):
        return cls("unit_pareto")

    @classmethod
    def exponential(cls, rate=1.0):
        return cls("exponential", rate=rate)

    @classmethod
    def discrete(cls, pmf):
        return cls("discrete", pmf=pmf)

    def sf(self, y):
        """Survival function ``1 - F(y)``."""
        y = np.asarray(y, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            if self.kind == "uniform":
                return np.clip(1.0 - y, 0.0, 1.0)
            if self.kind == "unit_frechet":
                return np.where(y > 0, -np.expm1(-1.0 / y), 1.0)
            if self.kind == "unit_pareto":
                return np.where(y >= 1, 1.0 / y, 1.0)
            if self.kind == "exponential":
                return np.where(y > 0, np.exp(-self.rate * y), 1.0)
        return self.pmf.sf(y)

    def ppf(self, q):
        """Right-continuous generalized inverse ``inf{y : F(y) >= q}``."""
        q = np.asarray(q, dtype=float)
        with np.errstate(divide="ignore"):
            if self.kind == "uniform":
                return q.copy()
            if self.kind == "unit_frechet":
                return -1.0 / np.log(q)
            if self.kind == "unit_pareto":
                return 1.0 / (1.0 - q)
            if self.kind == "exponential":
                return -np.log1p(-q) / self.rate
        return self.pmf.ppf(q)

    def tail_quantile(self, x):
        """``U(x) = inf{y : sf(y) <= 1/x}`` for ``x > 1``."""
        if not x > 1:
            raise ValueError(f"tail quantile needs x > 1, got {x}")
        p = 1.0 / x
        if self.kind == "uniform":
            return 1.0 - p
        if self.kind == "unit_frechet":
            # 1 - exp(-1/y) <= p  <=>  y >= -1 / log1p(-p)
            return -1.0 / math.log1p(-p)
        if self.kind == "unit_pareto":
            return float(x)
        if self.kind == "exponential":
            return math.log(x) / self.rate
        sf_atoms = self.pmf.sf(self.pmf.support)
        idx = int(np.argmax(sf_atoms <= p))
        return float(self.pmf.support[idx])
