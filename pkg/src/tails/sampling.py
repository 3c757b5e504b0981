"""Seeded sampling from the copula families and derived processes.

All randomness comes from numpy's PCG64 generator seeded through
``SeedSequence(seed)``.  Independent parallel streams are obtained with
:func:`spawn_streams`, which uses ``SeedSequence.spawn``.
"""

from __future__ import annotations

import numpy as np
from scipy import special

from tails.copulas import (
    Clayton,
    Comonotone,
    Countermonotone,
    Gaussian,
    Gumbel,
    Independence,
    StudentT,
)
from tails.discrete import Checkerboard
from tails.empirical import PairedSample, SeriesSample

BISECTION_TOL = 1e-12
_BISECTION_STEPS = int(np.ceil(np.log2(1.0 / BISECTION_TOL)))


class RootFindFailure(RuntimeError):
    """Conditional-cdf inversion did not bracket a root."""


def rng_for(seed):
    """PCG64 generator for a 64-bit unsigned seed."""
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn_streams(seed, k):
    """``k`` statistically independent generators derived from one seed."""
    children = np.random.SeedSequence(int(seed)).spawn(k)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def _open_uniform(rng, n):
    u = rng.random(n)
    # random() is on [0, 1); 0 breaks the log transforms
    while np.any(u == 0.0):
        zeros = u == 0.0
        u[zeros] = rng.random(int(zeros.sum()))
    return u


def invert_conditional(cond_cdf, u, p, steps=_BISECTION_STEPS):
    """Solve ``cond_cdf(v, u) = p`` for v in [0, 1] by vectorized bisection."""
    lo = np.zeros_like(p)
    hi = np.ones_like(p)
    if not (np.all(cond_cdf(lo, u) <= p) and np.all(cond_cdf(hi, u) >= p)):
        raise RootFindFailure("conditional cdf does not bracket the target on [0, 1]")
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        below = cond_cdf(mid, u) < p
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    v = 0.5 * (lo + hi)
    if np.any(~np.isfinite(v)):
        raise RootFindFailure("non-finite root from conditional inversion")
    return v


def sample_copula(c, n, seed):
    """Draw ``n`` pairs with uniform margins from the copula ``c``."""
    rng = rng_for(seed)
    if isinstance(c, Independence):
        return PairedSample(rng.random(n), rng.random(n))
    if isinstance(c, Comonotone):
        u = rng.random(n)
        return PairedSample(u, u.copy())
    if isinstance(c, Countermonotone):
        u = rng.random(n)
        return PairedSample(u, 1.0 - u)
    if isinstance(c, (Clayton, Gumbel)):
        u = _open_uniform(rng, n)
        p = _open_uniform(rng, n)
        return PairedSample(u, invert_conditional(c.conditional_cdf, u, p))
    if isinstance(c, Gaussian):
        z1 = rng.standard_normal(n)
        z2 = c.rho * z1 + np.sqrt(1.0 - c.rho ** 2) * rng.standard_normal(n)
        return PairedSample(special.ndtr(z1), special.ndtr(z2))
    if isinstance(c, StudentT):
        z1 = rng.standard_normal(n)
        z2 = c.rho * z1 + np.sqrt(1.0 - c.rho ** 2) * rng.standard_normal(n)
        s = np.sqrt(rng.chisquare(c.nu, n) / c.nu)
        return PairedSample(special.stdtr(c.nu, z1 / s), special.stdtr(c.nu, z2 / s))
    if isinstance(c, Checkerboard):
        g = c.grid
        mass = np.clip(g.cell_mass, 0.0, None).ravel()
        cells = rng.choice(mass.size, size=n, p=mass / mass.sum())
        i, j = np.unravel_index(cells, g.cell_mass.shape)
        du = g.u_nodes[i + 1] - g.u_nodes[i]
        dv = g.v_nodes[j + 1] - g.v_nodes[j]
        return PairedSample(g.u_nodes[i] + du * rng.random(n),
                            g.v_nodes[j] + dv * rng.random(n))
    raise TypeError(f"no sampler for {c!r}")


def apply_margin(u, margin):
    """Map uniform values through the margin's generalized inverse cdf."""
    return margin.ppf(np.asarray(u, dtype=float))


def unit_frechet(rng, n):
    """Unit Fréchet variates ``-1 / log(U)``."""
    return -1.0 / np.log(_open_uniform(rng, n))


def moving_max_series(n, seed):
    """``X_i = max(Z_i, Z_{i+1})`` with i.i.d. unit Fréchet ``Z``.

    Stationary, with lag-1 upper auto tail dependence 1/2 and none at lag 2
    or more.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    z = unit_frechet(rng_for(seed), n + 1)
    return SeriesSample(np.maximum(z[:-1], z[1:]))


def iid_series(n, seed):
    """I.i.d. uniform series."""
    return SeriesSample(rng_for(seed).random(n))
