"""Constructive exact representation of N samples with N neurons.

Samples are handled in an order where each new point is an extreme point of
the convex hull of the points handled so far. A hyperplane separating the new
point from the earlier ones gives a neuron that vanishes on all earlier
points, so the weights solve a triangular system one at a time.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import simplex
from .model import RELU, Activation, Dataset, ParamDomain, ShallowParams

SEPARATION_TOL = 1e-10


def in_hull(point, others) -> bool:
    """True if ``point`` is a convex combination of the rows of ``others``.

    Feasibility LP: lambda >= 0, sum(lambda) = 1, sum_j lambda_j x_j = point.
    """
    P = np.atleast_2d(np.asarray(others, dtype=float))
    x = np.asarray(point, dtype=float).ravel()
    if P.shape[0] == 0 or P.size == 0:
        return False
    A_eq = np.vstack([P.T, np.ones(P.shape[0])])
    b_eq = np.append(x, 1.0)
    sol = simplex.solve(simplex.LpProblem(np.zeros(P.shape[0]), A_eq=A_eq, b_eq=b_eq))
    return sol.ok


def extreme_point_order(features) -> list:
    """Processing order for the construction.

    Returns ``order`` such that ``order[k]`` is an extreme point of the hull
    of ``features[order[:k+1]]``. It is built from the back: repeatedly take
    the lowest-index remaining point that is not in the hull of the others.
    """
    X = np.atleast_2d(np.asarray(features, dtype=float))
    remaining = list(range(X.shape[0]))
    backwards = []
    while remaining:
        for pos, i in enumerate(remaining):
            rest = remaining[:pos] + remaining[pos + 1 :]
            if not in_hull(X[i], X[rest]):
                backwards.append(i)
                remaining.pop(pos)
                break
        else:  # unreachable for distinct points: a finite set has a vertex
            raise RuntimeError("no extreme point found; are the features distinct?")
    return backwards[::-1]


def _inner_box(domain: ParamDomain):
    if domain.kind == "hypercube":
        return domain.lo, domain.hi
    # largest cube inside the unit ball
    r = 1.0 / np.sqrt(domain.dim)
    return -r * np.ones(domain.dim), r * np.ones(domain.dim)


class Separator(NamedTuple):
    a: np.ndarray
    b: float
    margin: float


def separating_direction(point, others, domain: ParamDomain) -> Separator:
    """(a, b) in the domain with <a, x> + b <= -delta on ``others`` and
    >= delta at ``point``, for the largest attainable delta.

    For a box domain the LP runs over the box. For the unit ball it runs
    over the largest inscribed cube, which keeps the answer in the ball.
    """
    x = np.asarray(point, dtype=float).ravel()
    P = np.atleast_2d(np.asarray(others, dtype=float)).reshape(-1, x.size)
    if domain.dim != x.size + 1:
        raise ValueError(f"domain has dimension {domain.dim}, expected {x.size + 1}")
    lo, hi = _inner_box(domain)
    q = x.size + 1
    # variables z = (a, b) - lo in [0, hi - lo], then delta >= 0
    Ph = np.column_stack([P, np.ones(P.shape[0])])
    xh = np.append(x, 1.0)
    A_ub = np.vstack(
        [
            np.column_stack([Ph, np.ones(P.shape[0])]),
            np.append(-xh, 1.0)[None, :],
            np.column_stack([np.eye(q), np.zeros(q)]),
        ]
    )
    b_ub = np.concatenate([-Ph @ lo, [xh @ lo], hi - lo])
    c = np.zeros(q + 1)
    c[-1] = -1.0
    sol = simplex.solve(simplex.LpProblem(c, A_ub=A_ub, b_ub=b_ub))
    if not sol.ok or -sol.value <= SEPARATION_TOL:
        raise ValueError("not separable: the point lies in the hull of the others")
    ab = np.clip(sol.x[:q] + lo, lo, hi)
    return Separator(ab[:-1], float(ab[-1]), float(-sol.value))


def exact_representation(
    data: Dataset, domain: ParamDomain, act: Activation = RELU
) -> ShallowParams:
    """N-neuron network interpolating ``data`` exactly (up to rounding).

    Neuron k is inactive on every sample handled before it, so
    ``omega_k = (y - sum_{j<k} omega_j sigma_j(x)) / sigma_k(x)`` at the
    k-th handled sample x.
    """
    X, Y = data.features, data.labels
    order = extreme_point_order(X)
    a = np.zeros((data.n, data.dim))
    b = np.zeros(data.n)
    omega = np.zeros(data.n)
    for k, i in enumerate(order):
        sep = separating_direction(X[i], X[order[:k]], domain)
        a[k], b[k] = sep.a, sep.b
        acts = act(a[: k + 1] @ X[i] + b[: k + 1])
        omega[k] = (Y[i] - acts[:k] @ omega[:k]) / acts[k]
    return ShallowParams(omega, a, b, domain)
