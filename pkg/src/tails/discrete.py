"""Subcopulas of discrete joint laws and their checkerboard extension."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from tails.copulas import Copula, Rect

_MASS_TOL = 1e-12
_GRID_TOL = 1e-12


class InconsistentMargins(ValueError):
    """A joint pmf disagrees with its stated margins or does not sum to one."""


class NonIncreasingGrid(ValueError):
    """A subcopula grid has a cell with negative mass."""


@dataclass(frozen=True)
class DiscretePMF:
    """Probability mass function on a strictly increasing set of atoms."""

    support: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        support = np.asarray(self.support, dtype=float)
        probs = np.asarray(self.probs, dtype=float)
        if support.ndim != 1 or support.shape != probs.shape or support.size == 0:
            raise ValueError("support and probs must be non-empty 1-d arrays of equal length")
        if np.any(np.diff(support) <= 0):
            raise ValueError("support must be strictly increasing")
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > _MASS_TOL:
            raise ValueError("probs must be non-negative and sum to 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def bernoulli(cls, p):
        return cls(np.array([0.0, 1.0]), np.array([1.0 - p, p]))

    def cdf(self, y):
        idx = np.searchsorted(self.support, y, side="right")
        cum = np.concatenate([[0.0], np.cumsum(self.probs)])
        return cum[idx]

    def sf(self, y):
        # tail sums avoid 1 - cdf cancellation
        tail = np.concatenate([np.cumsum(self.probs[::-1])[::-1], [0.0]])
        return tail[np.searchsorted(self.support, y, side="right")]

    def ppf(self, q):
        """Generalized inverse ``inf{y : F(y) >= q}``."""
        cum = np.cumsum(self.probs)
        cum[-1] = 1.0
        idx = np.searchsorted(cum, np.asarray(q, dtype=float), side="left")
        return self.support[np.minimum(idx, self.support.size - 1)]


@dataclass(frozen=True)
class JointPMF:
    """Bivariate discrete law: ``mass[i, j] = P(X = row atom i, Y = col atom j)``."""

    row_margin: DiscretePMF
    col_margin: DiscretePMF
    mass: np.ndarray

    def __post_init__(self):
        mass = np.asarray(self.mass, dtype=float)
        object.__setattr__(self, "mass", mass)
        shape = (self.row_margin.probs.size, self.col_margin.probs.size)
        if mass.shape != shape:
            raise InconsistentMargins(f"mass shape {mass.shape} != margins {shape}")
        if np.any(mass < 0):
            raise InconsistentMargins("negative mass")
        if abs(mass.sum() - 1.0) > _MASS_TOL:
            raise InconsistentMargins(f"total mass {mass.sum()!r} != 1")
        if np.max(np.abs(mass.sum(axis=1) - self.row_margin.probs)) > _MASS_TOL:
            raise InconsistentMargins("row sums disagree with row margin")
        if np.max(np.abs(mass.sum(axis=0) - self.col_margin.probs)) > _MASS_TOL:
            raise InconsistentMargins("column sums disagree with column margin")

    @classmethod
    def from_mass(cls, mass, row_support=None, col_support=None):
        """Build margins from the row and column sums of ``mass``."""
        mass = np.asarray(mass, dtype=float)
        rows, cols = mass.shape
        rs = np.arange(rows, dtype=float) if row_support is None else row_support
        cs = np.arange(cols, dtype=float) if col_support is None else col_support
        try:
            return cls(DiscretePMF(rs, mass.sum(axis=1)), DiscretePMF(cs, mass.sum(axis=0)), mass)
        except InconsistentMargins:
            raise
        except ValueError as exc:
            raise InconsistentMargins(str(exc)) from exc


@dataclass(frozen=True)
class SubcopulaGrid:
    """Copula values on the product of the margins' ranges.

    ``values[i, j] = C(u_nodes[i], v_nodes[j])``; node lists start at 0 and
    end at 1.
    """

    u_nodes: np.ndarray
    v_nodes: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u_nodes, dtype=float)
        v = np.asarray(self.v_nodes, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        for name, nodes in (("u_nodes", u), ("v_nodes", v)):
            if nodes.ndim != 1 or nodes.size < 2 or nodes[0] != 0.0 or nodes[-1] != 1.0:
                raise ValueError(f"{name} must start at 0 and end at 1")
            if np.any(np.diff(nodes) <= 0):
                raise ValueError(f"{name} must be strictly increasing")
        if vals.shape != (u.size, v.size):
            raise ValueError("values shape does not match node lists")
        if (np.max(np.abs(vals[0])) > _GRID_TOL or np.max(np.abs(vals[:, 0])) > _GRID_TOL
                or np.max(np.abs(vals[-1] - v)) > _GRID_TOL
                or np.max(np.abs(vals[:, -1] - u)) > _GRID_TOL):
            raise ValueError("grid values violate copula boundary conditions")
        object.__setattr__(self, "u_nodes", u)
        object.__setattr__(self, "v_nodes", v)
        object.__setattr__(self, "values", vals)

    @property
    def cell_mass(self):
        """Volume of each grid cell (rectangle between adjacent nodes)."""
        g = self.values
        return g[1:, 1:] - g[1:, :-1] - g[:-1, 1:] + g[:-1, :-1]

    def is_increasing(self, tol=_GRID_TOL):
        return bool(np.min(self.cell_mass) >= -tol)


def subcopula_from_joint(j):
    """Subcopula grid of a discrete joint law.

    Nodes are the cumulative marginal probabilities (with 0 prepended) and
    values the cumulative joint mass.  Zero-probability atoms would repeat a
    node and are dropped.
    """
    u = np.concatenate([[0.0], np.cumsum(j.row_margin.probs)])
    v = np.concatenate([[0.0], np.cumsum(j.col_margin.probs)])
    vals = np.zeros((u.size, v.size))
    vals[1:, 1:] = j.mass.cumsum(axis=0).cumsum(axis=1)
    keep_u = np.concatenate([[True], j.row_margin.probs > 0])
    keep_v = np.concatenate([[True], j.col_margin.probs > 0])
    u, v = u[keep_u], v[keep_v]
    vals = vals[np.ix_(keep_u, keep_v)]
    u[-1] = v[-1] = 1.0
    vals[-1, :] = v
    vals[:, -1] = u
    return SubcopulaGrid(u, v, vals)


class Checkerboard(Copula):
    """Multilinear (checkerboard) extension of a subcopula grid.

    Each grid cell's mass is spread uniformly over the cell, so the cdf is
    bilinear inside every cell and exact at the nodes.
    """

    name = "checkerboard"
    continuous_margins = False
    extension = "checkerboard (multilinear)"

    def __init__(self, grid):
        if not grid.is_increasing():
            raise NonIncreasingGrid(
                f"cell mass {np.min(grid.cell_mass):.3e} < 0 in subcopula grid")
        self.grid = grid

    def params(self):
        return {"u_nodes": self.grid.u_nodes.tolist(), "v_nodes": self.grid.v_nodes.tolist()}

    def __repr__(self):
        g = self.grid
        return f"Checkerboard({g.u_nodes.size - 1}x{g.v_nodes.size - 1} cells)"

    @staticmethod
    def _locate(nodes, x):
        i = np.clip(np.searchsorted(nodes, x, side="right") - 1, 0, nodes.size - 2)
        frac = (x - nodes[i]) / (nodes[i + 1] - nodes[i])
        return i, frac

    def _cdf(self, u, v):
        g = self.grid
        i, a = self._locate(g.u_nodes, u)
        j, b = self._locate(g.v_nodes, v)
        V = g.values
        return ((1 - a) * (1 - b) * V[i, j] + a * (1 - b) * V[i + 1, j]
                + (1 - a) * b * V[i, j + 1] + a * b * V[i + 1, j + 1])

    def _survival(self, u, v):
        # closed form over cells avoids the cancellation in 1 - u - v + C
        g = self.grid
        fu = _overlap_fraction(g.u_nodes[None, :], u.ravel()[:, None], 1.0)
        fv = _overlap_fraction(g.v_nodes[None, :], v.ravel()[:, None], 1.0)
        return np.einsum("pi,ij,pj->p", fu, g.cell_mass, fv).reshape(u.shape)

    def box_mass(self, rect):
        """Closed-form volume: sum of cell mass times the cell's overlapped fraction."""
        g = self.grid
        fu = _overlap_fraction(g.u_nodes, rect.u1, rect.u2)
        fv = _overlap_fraction(g.v_nodes, rect.v1, rect.v2)
        return float(fu @ g.cell_mass @ fv)


def _overlap_fraction(nodes, lo, hi):
    left, right = nodes[..., :-1], nodes[..., 1:]
    overlap = np.clip(np.minimum(right, hi) - np.maximum(left, lo), 0.0, None)
    return overlap / (right - left)


def checkerboard_extend(g):
    """Extend a subcopula grid to a full copula by multilinear interpolation."""
    return Checkerboard(g)


def _partition_lines(g, r):
    us = np.concatenate([[r.u1], g.u_nodes[(g.u_nodes > r.u1) & (g.u_nodes < r.u2)], [r.u2]])
    vs = np.concatenate([[r.v1], g.v_nodes[(g.v_nodes > r.v1) & (g.v_nodes < r.v2)], [r.v2]])
    if r.u1 == r.u2:
        us = us[:2]
    if r.v1 == r.v2:
        vs = vs[:2]
    return us, vs


def discontinuity_partition(g, r):
    """Split ``r`` along the grid-node lines of ``g``.

    The pieces are the maximal sub-boxes on which the checkerboard extension
    is smooth.  Their union is ``r`` and their interiors are disjoint.
    """
    if isinstance(g, Checkerboard):
        g = g.grid
    us, vs = _partition_lines(g, r)
    return [Rect(us[a], us[a + 1], vs[b], vs[b + 1])
            for a in range(us.size - 1) for b in range(vs.size - 1)]


def _piece_cells(nodes, lines):
    lo, hi = lines[:-1], lines[1:]
    i = np.clip(np.searchsorted(nodes, 0.5 * (lo + hi), side="right") - 1, 0, nodes.size - 2)
    return i, (hi - lo) / (nodes[i + 1] - nodes[i])


def partition_masses(g, r):
    """Volumes of the :func:`discontinuity_partition` pieces of ``r``, as a 2-d array.

    Each piece lies inside one cell, so its volume is the cell mass times
    the fraction of the cell it covers.
    """
    if isinstance(g, Checkerboard):
        g = g.grid
    us, vs = _partition_lines(g, r)
    i, fu = _piece_cells(g.u_nodes, us)
    j, fv = _piece_cells(g.v_nodes, vs)
    # rounding in the grid differences can leave cell masses of order -1e-16
    mass = np.clip(g.cell_mass, 0.0, None)
    return mass[np.ix_(i, j)] * fu[:, None] * fv[None, :]


def _read_rows(path):
    rows = []
    with open(path, newline="") as fh:
        for line in csv.reader(fh):
            if not line or line[0].lstrip().startswith("#"):
                continue
            rows.append([c.strip() for c in line])
    return rows


def read_joint_pmf(path, row_margin_path=None, col_margin_path=None):
    """Load a JointPMF from CSV.

    Single-file form: the first row holds the column atoms (its first cell is
    ignored), the first column holds the row atoms, the body holds masses.

    Three-file form: ``path`` is a header-free mass matrix and each margin
    file has ``atom,prob`` lines.

    Raises ``ValueError`` (including ``InconsistentMargins``) on malformed input.
    """
    rows = _read_rows(path)
    if not rows:
        raise ValueError(f"{path}: empty file")
    if row_margin_path is None and col_margin_path is None:
        try:
            col_atoms = [float(x) for x in rows[0][1:]]
            row_atoms = [float(r[0]) for r in rows[1:]]
            mass = [[float(x) for x in r[1:]] for r in rows[1:]]
        except (ValueError, IndexError) as exc:
            raise ValueError(f"{path}: malformed joint pmf ({exc})") from exc
        if any(len(r) != len(col_atoms) for r in mass):
            raise ValueError(f"{path}: ragged mass matrix")
        return JointPMF.from_mass(np.array(mass), np.array(row_atoms), np.array(col_atoms))
    if row_margin_path is None or col_margin_path is None:
        raise ValueError("both margin files are required in the three-file form")
    try:
        mass = np.array([[float(x) for x in r] for r in rows])
        margins = []
        for p in (row_margin_path, col_margin_path):
            mr = np.array([[float(x) for x in r] for r in _read_rows(p)])
            margins.append(DiscretePMF(mr[:, 0], mr[:, 1]))
    except (ValueError, IndexError) as exc:
        raise ValueError(f"malformed joint pmf input ({exc})") from exc
    return JointPMF(margins[0], margins[1], mass)
