"""Exact optimal-transport distances between empirical measures and the
generalization bounds built on them.

The ground metric is Euclidean: on the concatenated vector (x, y) for joint
measures of features and labels, and on x alone for feature measures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from . import simplex
from .model import RELU, Activation, Dataset, ShallowParams, predict, residual_r, sensitivity

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Finitely supported probability measure sum_i weights[i] * delta_atoms[i]."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        if atoms.ndim == 1:
            atoms = atoms[:, None]
        w = np.asarray(self.weights, dtype=float).ravel()
        if atoms.ndim != 2 or atoms.shape[0] != w.size or w.size == 0:
            raise ValueError(f"atoms {atoms.shape} and weights {w.shape} do not match")
        if not np.all(np.isfinite(atoms)):
            raise ValueError("atoms must be finite")
        if np.any(w < 0) or abs(w.sum() - 1.0) > WEIGHT_TOL * max(1, w.size):
            raise ValueError("weights must be nonnegative and sum to 1")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, points) -> "EmpiricalMeasure":
        pts = np.asarray(points, dtype=float)
        n = pts.shape[0]
        return cls(pts, np.full(n, 1.0 / n))

    @property
    def size(self) -> int:
        return self.weights.size

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    @property
    def is_uniform(self) -> bool:
        return bool(np.all(np.abs(self.weights - 1.0 / self.size) <= WEIGHT_TOL))


def joint_measure(features, labels) -> EmpiricalMeasure:
    """Uniform measure on the points (x_i, y_i)."""
    X = np.atleast_2d(np.asarray(features, dtype=float))
    if X.shape[0] == 1 and np.ndim(features) == 1:
        X = X.T
    y = np.asarray(labels, dtype=float).ravel()
    return EmpiricalMeasure.uniform(np.column_stack([X, y]))


def data_measure(data: Dataset) -> EmpiricalMeasure:
    return joint_measure(data.features, data.labels)


def feature_measure(data: Dataset) -> EmpiricalMeasure:
    return EmpiricalMeasure.uniform(data.features)


def cost_matrix(mu: EmpiricalMeasure, nu: EmpiricalMeasure) -> np.ndarray:
    if mu.dim != nu.dim:
        raise ValueError(f"measures live in different dimensions ({mu.dim} vs {nu.dim})")
    diff = mu.atoms[:, None, :] - nu.atoms[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=2))


def transport_lp(mu: EmpiricalMeasure, nu: EmpiricalMeasure) -> simplex.LpProblem:
    """Transportation LP over the plan pi (row-major, n*m variables).

    Row sums equal mu's weights and column sums nu's. Both families add up
    to 1, so one column constraint is redundant and is left out.
    """
    C = cost_matrix(mu, nu)
    n, m = C.shape
    rows = np.kron(np.eye(n), np.ones((1, m)))
    cols = np.kron(np.ones((1, n)), np.eye(m))[: m - 1]
    A_eq = np.vstack([rows, cols])
    b_eq = np.concatenate([mu.weights, nu.weights[: m - 1]])
    return simplex.LpProblem(C.ravel(), A_eq=A_eq, b_eq=b_eq, meta={"kind": "transport", "shape": (n, m)})


def _assignment_mean(C: np.ndarray) -> float:
    r, c = linear_sum_assignment(C)
    return float(C[r, c].mean())


def kr_distance(mu: EmpiricalMeasure, nu: EmpiricalMeasure, method: str = "lp") -> float:
    """Kantorovich-Rubinstein (Wasserstein-1) distance.

    ``method="lp"`` solves the transportation LP with the package's simplex
    solver. ``"matching"`` requires two uniform measures of equal size, where
    an optimal plan is a permutation, and solves the assignment problem.
    ``"auto"`` picks matching when it applies and the LP otherwise.
    """
    if method not in ("lp", "matching", "auto"):
        raise ValueError(f"unknown method {method!r}")
    C = cost_matrix(mu, nu)
    square = mu.size == nu.size and mu.is_uniform and nu.is_uniform
    if method == "matching" and not square:
        raise ValueError("matching needs two uniform measures of the same size")
    if method == "matching" or (method == "auto" and square):
        return _assignment_mean(C)
    if mu.size == 1 or nu.size == 1:
        # the only coupling is the product measure
        return float(mu.weights @ C @ nu.weights)
    sol = simplex.solve(transport_lp(mu, nu))
    if not sol.ok:
        raise simplex.SimplexStallError(f"transport LP ended with status {sol.status}")
    return max(0.0, float(sol.value))


def _check_square(mu: EmpiricalMeasure, nu: EmpiricalMeasure):
    if mu.size != nu.size:
        raise ValueError(f"W_p is defined here for equal sizes only ({mu.size} vs {nu.size})")
    if not (mu.is_uniform and nu.is_uniform):
        raise ValueError("W_p is defined here for uniform weights only")


def bottleneck_distance(C: np.ndarray) -> float:
    """min over permutations tau of max_i C[i, tau(i)].

    Binary search over the sorted distinct entries; a threshold t is
    feasible when the bipartite graph {C <= t} has a perfect matching.
    """
    n = C.shape[0]
    levels = np.unique(C)
    lo, hi = 0, levels.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        match = maximum_bipartite_matching(csr_matrix(C <= levels[mid]), perm_type="column")
        if np.all(match >= 0) and match.size == n:
            hi = mid
        else:
            lo = mid + 1
    return float(levels[lo])


def wasserstein_p(mu: EmpiricalMeasure, nu: EmpiricalMeasure, p: float = 1.0) -> float:
    """W_p between uniform measures of equal size; ``p=np.inf`` is the
    bottleneck distance."""
    if not p >= 1:
        raise ValueError("p must be >= 1")
    _check_square(mu, nu)
    C = cost_matrix(mu, nu)
    if np.isinf(p):
        return bottleneck_distance(C)
    return _assignment_mean(C**p) ** (1.0 / p)


@dataclass
class GeneralizationReport:
    """Both sides of the KR generalization bound, term by term."""

    lhs: float  # d_KR(m_test, m_pred)
    dkr_data: float  # d_KR(m_train, m_test)
    dkr_features: float  # d_KR(m_X, m_X')
    bias: float
    deviation: float
    r: float

    @property
    def rhs(self) -> float:
        return self.dkr_data + self.dkr_features + self.r

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.margin >= -1e-8

    def to_text(self) -> str:
        rows = [
            ("lhs_dkr_test_pred", self.lhs),
            ("dkr_train_test", self.dkr_data),
            ("dkr_features", self.dkr_features),
            ("bias", self.bias),
            ("deviation", self.deviation),
            ("r", self.r),
            ("rhs", self.rhs),
            ("margin", self.margin),
        ]
        return "".join(f"{k}\t{v:.12g}\n" for k, v in rows) + f"holds\t{self.holds}\n"


def prediction_measure(theta: ShallowParams, test: Dataset, act: Activation = RELU) -> EmpiricalMeasure:
    return joint_measure(test.features, predict(theta, test.features, act))


def generalization_report(
    theta: ShallowParams, train: Dataset, test: Dataset, act: Activation = RELU, method: str = "lp"
) -> GeneralizationReport:
    lhs = kr_distance(data_measure(test), prediction_measure(theta, test, act), method)
    dkr_data = kr_distance(data_measure(train), data_measure(test), method)
    dkr_x = kr_distance(feature_measure(train), feature_measure(test), method)
    res = residual_r(theta, train, dkr_x, act)
    return GeneralizationReport(lhs, dkr_data, dkr_x, res.bias, res.deviation, res.total)


@dataclass
class MeanLpReport:
    """Mean-l^p error bound for N' = N; p = inf gives the max-error version."""

    p: float
    lhs: float  # l^p mean of test errors
    w_p: float  # W_p(m_train, m_test)
    train_error: float  # l^p mean of training errors
    deviation: float

    @property
    def rhs(self) -> float:
        return self.w_p + self.train_error + self.deviation

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.margin >= -1e-8


def _lp_mean(v: np.ndarray, p: float) -> float:
    v = np.abs(v)
    if np.isinf(p):
        return float(v.max())
    return float(np.mean(v**p) ** (1.0 / p))


def mean_lp_report(
    theta: ShallowParams, train: Dataset, test: Dataset, p: float = 1.0, act: Activation = RELU
) -> MeanLpReport:
    if train.n != test.n:
        raise ValueError("the mean-l^p bound needs equally sized train and test sets")
    w = wasserstein_p(data_measure(train), data_measure(test), p)
    lhs = _lp_mean(test.labels - predict(theta, test.features, act), p)
    train_err = _lp_mean(predict(theta, train.features, act) - train.labels, p)
    return MeanLpReport(float(p), lhs, w, train_err, w * sensitivity(theta, act))
