"""Datasets, parameter domains, activations and shallow ReLU networks.

A shallow network is the finite sum

    f(x) = sum_j omega_j * sigma(<a_j, x> + b_j)

and the same neuron list doubles as the discrete signed measure
``sum_j omega_j * delta_(a_j, b_j)`` on the parameter domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

ZERO_TOL = 1e-12  # |omega| at or below this counts as an inactive neuron
DOMAIN_SLACK = 1e-9


@dataclass(frozen=True)
class Activation:
    """A Lipschitz activation with sigma(z) = 0 for z <= 0 and > 0 for z > 0."""

    kind: str = "relu"
    lipschitz: float = 1.0

    def __post_init__(self):
        if self.kind not in _ACTIVATIONS:
            raise ValueError(f"unknown activation {self.kind!r}")
        if not self.lipschitz > 0:
            raise ValueError("lipschitz constant must be positive")

    def __call__(self, z):
        return _ACTIVATIONS[self.kind](np.asarray(z, dtype=float))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "lipschitz": self.lipschitz}

    @classmethod
    def from_dict(cls, d: dict) -> "Activation":
        return cls(kind=d.get("kind", "relu"), lipschitz=float(d.get("lipschitz", 1.0)))


_ACTIVATIONS = {"relu": lambda z: np.maximum(z, 0.0)}

RELU = Activation()


@dataclass(frozen=True)
class ParamDomain:
    """Compact parameter set for (a, b) in R^(d+1) containing a ball around 0.

    Either an axis-aligned box ``[lo, hi]`` with ``lo < 0 < hi`` in every
    coordinate, or the closed unit ball.
    """

    kind: str
    lo: Optional[np.ndarray] = None
    hi: Optional[np.ndarray] = None
    dim: int = 0

    def __post_init__(self):
        if self.kind == "hypercube":
            lo = np.atleast_1d(np.asarray(self.lo, dtype=float))
            hi = np.atleast_1d(np.asarray(self.hi, dtype=float))
            if lo.shape != hi.shape or lo.ndim != 1 or lo.size == 0:
                raise ValueError("lo and hi must be 1-d arrays of equal length")
            if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
                raise ValueError("domain bounds must be finite")
            if not (np.all(lo < 0) and np.all(hi > 0)):
                raise ValueError("hypercube must contain the origin in its interior (lo < 0 < hi)")
            object.__setattr__(self, "lo", lo)
            object.__setattr__(self, "hi", hi)
            object.__setattr__(self, "dim", lo.size)
        elif self.kind == "unit-ball":
            if int(self.dim) < 1:
                raise ValueError("unit ball needs dim >= 1")
            object.__setattr__(self, "dim", int(self.dim))
        else:
            raise ValueError(f"unknown domain kind {self.kind!r}")

    @classmethod
    def hypercube(cls, lo, hi) -> "ParamDomain":
        return cls("hypercube", lo=lo, hi=hi)

    @classmethod
    def unit_ball(cls, dim: int) -> "ParamDomain":
        return cls("unit-ball", dim=dim)

    def contains(self, points, tol: float = DOMAIN_SLACK) -> np.ndarray:
        """Closed-set membership test with slack ``tol`` for each row."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.dim:
            raise ValueError(f"points have dimension {pts.shape[1]}, domain has {self.dim}")
        if self.kind == "hypercube":
            return np.all((pts >= self.lo - tol) & (pts <= self.hi + tol), axis=1)
        return np.linalg.norm(pts, axis=1) <= 1.0 + tol

    def project(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.kind == "hypercube":
            return np.clip(pts, self.lo, self.hi)
        norms = np.linalg.norm(pts, axis=1, keepdims=True)
        return pts / np.maximum(norms, 1.0)

    def to_dict(self) -> dict:
        if self.kind == "hypercube":
            return {"kind": self.kind, "lo": self.lo.tolist(), "hi": self.hi.tolist()}
        return {"kind": self.kind, "dim": self.dim}

    @classmethod
    def from_dict(cls, d: dict) -> "ParamDomain":
        if d["kind"] == "hypercube":
            return cls.hypercube(d["lo"], d["hi"])
        return cls.unit_ball(d["dim"])


@dataclass(frozen=True)
class Dataset:
    """N feature/label pairs with pairwise distinct, finite features."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.features, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        y = np.asarray(self.labels, dtype=float).ravel()
        if X.ndim != 2 or X.shape[0] != y.size:
            raise ValueError(f"features {X.shape} and labels {y.shape} do not match")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise ValueError("dataset entries must be finite")
        if X.shape[0] > 1 and np.unique(X, axis=0).shape[0] != X.shape[0]:
            raise ValueError("feature rows must be pairwise distinct")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)

    @property
    def n(self) -> int:
        return self.labels.size

    @property
    def dim(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class ShallowParams:
    """Neuron list Theta = {(omega_j, a_j, b_j)}.

    ``a`` has shape (P, d). An empty network (P = 0) evaluates to 0 for any
    input dimension. If ``domain`` is given, every (a_j, b_j) must lie in it.
    """

    omega: np.ndarray
    a: np.ndarray
    b: np.ndarray
    domain: Optional[ParamDomain] = field(default=None, compare=False)

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float).ravel()
        b = np.asarray(self.b, dtype=float).ravel()
        a = np.asarray(self.a, dtype=float)
        if a.ndim == 1:
            a = a.reshape(omega.size, -1) if omega.size else a.reshape(0, a.size)
        if a.ndim != 2 or a.shape[0] != omega.size or b.size != omega.size:
            raise ValueError(
                f"inconsistent neuron arrays: omega {omega.shape}, a {a.shape}, b {b.shape}"
            )
        if not (np.all(np.isfinite(omega)) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("network parameters must be finite")
        if self.domain is not None and omega.size:
            inside = self.domain.contains(np.column_stack([a, b]))
            if not np.all(inside):
                raise ValueError(f"{int((~inside).sum())} neuron(s) lie outside the domain")
        for arr in (omega, a, b):
            arr.setflags(write=False)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def empty(cls, dim: int = 0) -> "ShallowParams":
        return cls(np.zeros(0), np.zeros((0, dim)), np.zeros(0))

    @classmethod
    def from_neurons(cls, neurons: Sequence, dim: Optional[int] = None) -> "ShallowParams":
        """Build from ``[(omega, a, b), ...]``."""
        if len(neurons) == 0:
            return cls.empty(dim or 0)
        omega = np.array([float(w) for w, _, _ in neurons])
        a = np.array([np.atleast_1d(np.asarray(aj, dtype=float)) for _, aj, _ in neurons])
        b = np.array([float(bj) for _, _, bj in neurons])
        return cls(omega, a, b)

    @property
    def size(self) -> int:
        return self.omega.size

    @property
    def dim(self) -> int:
        return self.a.shape[1]

    @property
    def neurons(self) -> list:
        return [(float(w), self.a[j].copy(), float(self.b[j])) for j, w in enumerate(self.omega)]

    @property
    def inner(self) -> np.ndarray:
        """Stacked (a_j, b_j) rows, shape (P, d+1)."""
        return np.column_stack([self.a, self.b])

    def with_omega(self, omega) -> "ShallowParams":
        return ShallowParams(omega, self.a, self.b, self.domain)

    def select(self, idx) -> "ShallowParams":
        idx = np.asarray(idx)
        return ShallowParams(self.omega[idx], self.a[idx], self.b[idx], self.domain)


def hidden(theta: ShallowParams, X, act: Activation = RELU) -> np.ndarray:
    """Hidden-layer outputs sigma(<a_j, x_i> + b_j), shape (n, P)."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if theta.size and X.shape[1] != theta.dim:
        raise ValueError(f"input dimension {X.shape[1]} does not match network dimension {theta.dim}")
    return act(X @ theta.a.T + theta.b)


def predict(theta: ShallowParams, X, act: Activation = RELU) -> np.ndarray:
    """Network outputs for every row of ``X``."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if theta.size == 0:
        return np.zeros(X.shape[0])
    return hidden(theta, X, act) @ theta.omega


def forward(theta: ShallowParams, x, act: Activation = RELU) -> float:
    """f(x) = sum_j omega_j sigma(<a_j, x> + b_j) for a single input."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.ndim != 1:
        raise ValueError("forward takes a single input vector; use predict for batches")
    return float(predict(theta, x[None, :], act)[0])


def l1_norm(theta: ShallowParams) -> float:
    return float(np.abs(theta.omega).sum())


def active_count(theta: ShallowParams, tol: float = ZERO_TOL) -> int:
    return int(np.count_nonzero(np.abs(theta.omega) > tol))


def accuracy(theta: ShallowParams, data: Dataset, act: Activation = RELU) -> float:
    """Fraction of samples predicted within 0.5 of their label."""
    if data.n == 0:
        raise ValueError("accuracy of an empty dataset is undefined")
    err = np.abs(predict(theta, data.features, act) - data.labels)
    return float(np.mean(err < 0.5))


class Residual(NamedTuple):
    bias: float
    deviation: float
    total: float


def sensitivity(theta: ShallowParams, act: Activation = RELU) -> float:
    """L * sum_j |omega_j| * ||a_j||, the Lipschitz constant of x -> f(x)."""
    if theta.size == 0:
        return 0.0
    return float(act.lipschitz * np.sum(np.abs(theta.omega) * np.linalg.norm(theta.a, axis=1)))


def residual_r(
    theta: ShallowParams, train: Dataset, dkr_features: float, act: Activation = RELU
) -> Residual:
    """Parameter-dependent part r(Theta) of the generalization bound.

    ``bias`` is the mean absolute training error and ``deviation`` the
    feature-distance times the network's Lipschitz constant.
    """
    if dkr_features < 0:
        raise ValueError("dkr_features must be nonnegative")
    bias = float(np.mean(np.abs(predict(theta, train.features, act) - train.labels)))
    deviation = float(dkr_features) * sensitivity(theta, act)
    return Residual(bias, deviation, bias + deviation)
