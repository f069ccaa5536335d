"""Minibatch (sub)gradient training of an overparameterized shallow network.

Objective, for fidelity loss l (|r| or r^2):

    lambda > 0:  sum_j |omega_j| + (lambda / N) * sum_i l(f(x_i) - y_i)
    lambda = 0:  (1 / N) * sum_i l(f(x_i) - y_i)       (pure-fidelity pretraining)

A minibatch B replaces the data sum by (N / |B|) times the batch sum. The
subgradients of |.| and of the ReLU at 0 are taken as 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .model import RELU, Activation, Dataset, ParamDomain, ShallowParams

DIVERGENCE_FACTOR = 1e6
ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8


class TrainingDiverged(RuntimeError):
    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class TrainConfig:
    """Training settings. ``neuron_count=None`` means P = 2N."""

    neuron_count: Optional[int] = None
    lam: float = 0.0
    fidelity: str = "square"
    epochs: int = 1000
    learning_rate: float = 1e-3
    batch_size: int = 32
    seed: int = 0
    domain: Optional[ParamDomain] = None
    clip: bool = False
    adam: bool = False

    def __post_init__(self):
        if self.neuron_count is not None and self.neuron_count < 1:
            raise ValueError("neuron_count must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.lam < 0:
            raise ValueError("lambda must be nonnegative")
        if self.fidelity not in ("abs", "square"):
            raise ValueError(f"fidelity must be 'abs' or 'square', not {self.fidelity!r}")
        if self.clip and self.domain is None:
            raise ValueError("clipping needs a domain")


@dataclass
class TrainLog:
    """Per-epoch (epoch, objective, fidelity, l1) on the full training set."""

    rows: list = field(default_factory=list)

    @property
    def objective(self) -> np.ndarray:
        return np.array([r[1] for r in self.rows])

    def to_text(self, delimiter: str = ",") -> str:
        head = delimiter.join(["epoch", "objective", "fidelity", "l1"])
        body = [delimiter.join([str(e)] + [repr(float(v)) for v in r]) for e, *r in self.rows]
        return "\n".join([head] + body) + "\n"


def _loss(r: np.ndarray, fidelity: str) -> np.ndarray:
    return np.abs(r) if fidelity == "abs" else r * r


def _dloss(r: np.ndarray, fidelity: str) -> np.ndarray:
    return np.sign(r) if fidelity == "abs" else 2.0 * r


def objective(theta: ShallowParams, data: Dataset, lam: float, fidelity: str = "square", act=RELU):
    """Returns ``(objective, mean fidelity, l1)`` on the whole dataset."""
    r = act(data.features @ theta.a.T + theta.b) @ theta.omega - data.labels
    fid = float(np.mean(_loss(r, fidelity)))
    l1 = float(np.abs(theta.omega).sum())
    return (fid if lam == 0 else l1 + lam * fid), fid, l1


def gradients(omega, a, b, X, y, lam: float, fidelity: str):
    """(Sub)gradient of the objective estimated on the batch (X, y)."""
    Z = X @ a.T + b
    H = np.maximum(Z, 0.0)
    r = H @ omega - y
    # weight of each sample's loss in the objective
    scale = (1.0 / X.shape[0]) if lam == 0 else lam / X.shape[0]
    g = scale * _dloss(r, fidelity)
    D = (Z > 0.0) * omega  # d f / d z_ij
    g_omega = H.T @ g
    g_a = (D * g[:, None]).T @ X
    g_b = D.T @ g
    if lam > 0:
        g_omega = g_omega + np.sign(omega)
    return g_omega, g_a, g_b


def init_params(dim: int, P: int, rng: np.random.Generator, domain: Optional[ParamDomain] = None):
    """(omega, a, b): inner parameters uniform in the domain (default
    [-1, 1]^(d+1)), weights uniform in [-1/P, 1/P]."""
    q = dim + 1
    if domain is None:
        inner = rng.uniform(-1.0, 1.0, size=(P, q))
    elif domain.kind == "hypercube":
        inner = rng.uniform(domain.lo, domain.hi, size=(P, q))
    else:
        g = rng.normal(size=(P, q))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        inner = g * rng.uniform(size=(P, 1)) ** (1.0 / q)
    omega = rng.uniform(-1.0 / P, 1.0 / P, size=P)
    return omega, inner[:, :-1].copy(), inner[:, -1].copy()


def train_with_log(data: Dataset, cfg: TrainConfig, act: Activation = RELU, log_every: int = 1):
    """Run training; returns ``(theta, log)``."""
    if act.kind != "relu":
        raise ValueError("training supports the ReLU activation only")
    if cfg.domain is not None and cfg.domain.dim != data.dim + 1:
        raise ValueError("domain dimension does not match the data")
    rng = np.random.default_rng(cfg.seed)
    P = cfg.neuron_count or 2 * data.n
    omega, a, b = init_params(data.dim, P, rng, cfg.domain)
    params = [omega, a, b]
    X, y = np.asarray(data.features), np.asarray(data.labels)
    m = [np.zeros_like(p) for p in params]
    v = [np.zeros_like(p) for p in params]
    log = TrainLog()
    start = objective(ShallowParams(omega, a, b), data, cfg.lam, cfg.fidelity)[0]
    step = 0
    for epoch in range(1, cfg.epochs + 1):
        perm = rng.permutation(data.n)
        for lo in range(0, data.n, cfg.batch_size):
            idx = perm[lo : lo + cfg.batch_size]
            grads = gradients(*params, X[idx], y[idx], cfg.lam, cfg.fidelity)
            step += 1
            for k, g in enumerate(grads):
                if cfg.adam:
                    m[k] = ADAM_BETAS[0] * m[k] + (1 - ADAM_BETAS[0]) * g
                    v[k] = ADAM_BETAS[1] * v[k] + (1 - ADAM_BETAS[1]) * g * g
                    mh = m[k] / (1 - ADAM_BETAS[0] ** step)
                    vh = v[k] / (1 - ADAM_BETAS[1] ** step)
                    params[k] = params[k] - cfg.learning_rate * mh / (np.sqrt(vh) + ADAM_EPS)
                else:
                    params[k] = params[k] - cfg.learning_rate * g
            if cfg.clip:
                inner = cfg.domain.project(np.column_stack([params[1], params[2]]))
                params[1], params[2] = inner[:, :-1].copy(), inner[:, -1].copy()
        if epoch % log_every == 0 or epoch == cfg.epochs:
            theta = ShallowParams(*params)
            obj, fid, l1 = objective(theta, data, cfg.lam, cfg.fidelity)
            log.rows.append((epoch, obj, fid, l1))
            if not np.isfinite(obj) or obj > DIVERGENCE_FACTOR * max(start, 1e-12):
                raise TrainingDiverged(
                    f"objective {obj:.3g} at epoch {epoch} exceeds {DIVERGENCE_FACTOR:g} x initial {start:.3g}",
                    {"epoch": epoch, "objective": obj, "initial": start, "learning_rate": cfg.learning_rate},
                )
    return ShallowParams(*params), log


def train(data: Dataset, cfg: TrainConfig, act: Activation = RELU) -> ShallowParams:
    return train_with_log(data, cfg, act)[0]
