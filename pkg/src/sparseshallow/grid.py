"""Discretization of the parameter domain and the design matrix.

The grid Omega_M is a lattice of cell centers, so every domain point is
within half a cell diagonal of a grid point. The design matrix has entries
``A[i, j] = sigma(<a_j, x_i> + b_j)`` for features x_i and grid points
(a_j, b_j).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import RELU, Activation, Dataset, ParamDomain, ShallowParams

MAX_ENTRIES = 10**7
MIN_WIDENING = 1e-3


class GridTooLargeError(ValueError):
    def __init__(self, m_points: int, n_rows: int, cap: int):
        super().__init__(
            f"grid would have M = {m_points} points ({m_points * n_rows} design entries), "
            f"above the cap of {cap}"
        )
        self.m_points = m_points


@dataclass(frozen=True)
class ParamGrid:
    """Grid points (M, d+1), the N x M design matrix and a Hausdorff bound."""

    points: np.ndarray
    design: np.ndarray
    hausdorff_bound: float
    domain: ParamDomain

    @property
    def m(self) -> int:
        return self.points.shape[0]

    def theta(self, omega) -> ShallowParams:
        """Network putting weight ``omega[j]`` on grid point j (nonzeros only)."""
        omega = np.asarray(omega, dtype=float)
        keep = np.flatnonzero(omega != 0.0)
        return ShallowParams(omega[keep], self.points[keep, :-1], self.points[keep, -1])

    def design_text(self) -> str:
        """Row-major text dump of the design matrix, one row per line."""
        return "\n".join(" ".join(f"{v:.17g}" for v in row) for row in self.design) + "\n"


def _axis_centers(lo: float, hi: float, step: float) -> np.ndarray:
    count = max(1, int(np.ceil((hi - lo) / step - 1e-9)))
    width = (hi - lo) / count
    return lo + (np.arange(count) + 0.5) * width


def uniform_grid(
    domain: ParamDomain, step: float, n_rows: int = 1, max_entries: int = MAX_ENTRIES
):
    """Cell-center lattice of ``domain`` with cells of side at most ``step``.

    Returns ``(points, hausdorff_bound)`` with bound ``(step/2) * sqrt(d+1)``.
    ``n_rows`` is the number of features the design matrix will have, used
    only for the size cap. For the unit ball, centers of all cells that can
    meet the ball are projected onto it; projection is non-expansive, so the
    same bound holds.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    if domain.kind == "hypercube":
        lo, hi = domain.lo, domain.hi
    else:
        lo, hi = -np.ones(domain.dim), np.ones(domain.dim)
    if step > float(np.min(hi - lo)) + 1e-12:
        raise ValueError(f"step {step} exceeds the smallest side length {float(np.min(hi - lo))}")
    axes = [_axis_centers(l, h, step) for l, h in zip(lo, hi)]
    m_points = int(np.prod([ax.size for ax in axes]))
    if m_points * max(1, n_rows) > max_entries:
        raise GridTooLargeError(m_points, max(1, n_rows), max_entries)
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.column_stack([g.ravel() for g in mesh])
    bound = 0.5 * step * np.sqrt(domain.dim)
    if domain.kind == "unit-ball":
        points = points[np.linalg.norm(points, axis=1) <= 1.0 + bound]
        points = np.unique(domain.project(points), axis=0)
    return points, float(bound)


def design_matrix(points, features, act: Activation = RELU) -> np.ndarray:
    """N x M matrix sigma(<a_j, x_i> + b_j)."""
    X = features.features if isinstance(features, Dataset) else np.asarray(features, dtype=float)
    X = np.atleast_2d(X)
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if P.shape[1] != X.shape[1] + 1:
        raise ValueError(f"grid points have dimension {P.shape[1]}, features need {X.shape[1] + 1}")
    return act(X @ P[:, :-1].T + P[:, -1])


def build_grid(domain: ParamDomain, step: float, data, act: Activation = RELU, **kw) -> ParamGrid:
    X = data.features if isinstance(data, Dataset) else np.atleast_2d(data)
    points, bound = uniform_grid(domain, step, n_rows=X.shape[0], **kw)
    return ParamGrid(points, design_matrix(points, X, act), bound, domain)


def nested_grids(
    domain: ParamDomain, steps: Sequence[float], data, act: Activation = RELU
) -> list:
    """Grids whose point sets grow along ``steps`` (sorted coarse to fine).

    Cell-center lattices do not nest under halving, so grid k is the union of
    the lattices for ``steps[:k+1]``; its Hausdorff bound is that of the
    finest lattice it contains.
    """
    steps = list(steps)
    if any(s2 >= s1 for s1, s2 in zip(steps, steps[1:])):
        raise ValueError("steps must be strictly decreasing")
    X = data.features if isinstance(data, Dataset) else np.atleast_2d(data)
    grids, acc = [], np.zeros((0, domain.dim))
    for step in steps:
        pts, bound = uniform_grid(domain, step, n_rows=X.shape[0])
        acc = np.unique(np.vstack([acc, pts]), axis=0)
        grids.append(ParamGrid(acc, design_matrix(acc, X, act), bound, domain))
    return grids


def bounding_domain(theta: ShallowParams, margin: float = 0.0) -> ParamDomain:
    """Smallest box containing every (a_j, b_j), widened by ``margin``.

    The box is widened further, to at least ``delta = max(1e-3, margin)``
    on each side of 0, so that it contains a ball around the origin.
    """
    if theta.size == 0:
        raise ValueError("cannot bound an empty network")
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    inner = theta.inner
    delta = max(MIN_WIDENING, margin)
    lo = np.minimum(inner.min(axis=0) - margin, -delta)
    hi = np.maximum(inner.max(axis=0) + margin, delta)
    return ParamDomain.hypercube(lo, hi)


def dataset_constants(data) -> float:
    """D_X = min_i sqrt(||x_i||^2 + 1)."""
    X = data.features if isinstance(data, Dataset) else np.atleast_2d(np.asarray(data, dtype=float))
    if X.shape[0] == 0:
        raise ValueError("empty dataset")
    return float(np.sqrt(np.min(np.sum(X * X, axis=1)) + 1.0))


def grid_size(domain: ParamDomain, step: float) -> int:
    """Number of lattice cells (before any ball projection) for ``step``."""
    lo, hi = (domain.lo, domain.hi) if domain.kind == "hypercube" else (-np.ones(domain.dim), np.ones(domain.dim))
    return int(np.prod([_axis_centers(l, h, step).size for l, h in zip(lo, hi)]))


def step_for_size(domain: ParamDomain, target: int) -> float:
    """Largest step whose lattice has at least ``target`` cells.

    Cell counts jump in integer steps per axis, so the result is the first
    count at or above the target, not an exact match.
    """
    if target < 1:
        raise ValueError("target must be >= 1")
    lo, hi = (domain.lo, domain.hi) if domain.kind == "hypercube" else (-np.ones(domain.dim), np.ones(domain.dim))
    smallest = float(np.min(hi - lo))
    if grid_size(domain, smallest) >= target:
        return smallest
    a, b = smallest / (target + 1.0), smallest  # size(a) >= target > size(b)
    for _ in range(100):
        mid = 0.5 * (a + b)
        if grid_size(domain, mid) >= target:
            a = mid
        else:
            b = mid
    return a
