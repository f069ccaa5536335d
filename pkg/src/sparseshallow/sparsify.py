"""Neuron sparsification by null-space moves on the active design matrix.

Each step takes a null vector w of the active design matrix A^k, so that
``omega + t * w`` leaves every training output unchanged, and moves to the
nearest point where some weight hits zero (or the mirror point on the other
side, whichever has the smaller l1 norm). The l1 norm never increases, and
on a tie a neuron is dropped. The loop stops once A^k has full column rank,
which caps the number of active neurons at the number of samples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .model import RELU, ZERO_TOL, Activation, Dataset, ShallowParams, hidden

RANK_TOL = 1e-10
RESID_TOL = 1e-8
TIE_TOL = 1e-12
PLAN_ANGLES = 180


def filter_zero(theta: ShallowParams, tol: float = ZERO_TOL) -> ShallowParams:
    """Drop neurons with |omega_j| <= tol, keeping the order of the rest."""
    return theta.select(np.flatnonzero(np.abs(theta.omega) > tol))


def null_space_basis(B) -> np.ndarray:
    """Columns spanning the numerical null space of B, shape (p, k).

    Rank is decided by Gauss-Jordan elimination with partial pivoting; a
    pivot at or below ``1e-10 * max|B| * max(N, p)`` counts as zero. Each
    free column f yields the vector with w_f = 1 solving for the pivot
    columns, normalized to max|w| = 1. If any such vector misses the
    residual target ``1e-8 * max|B|`` (accumulated rounding), the trailing
    right singular vectors are used instead.
    """
    B = np.atleast_2d(np.asarray(B, dtype=float))
    N, p = B.shape
    if p == 0:
        return np.zeros((0, 0))
    scale = float(np.abs(B).max()) if B.size else 0.0
    if scale == 0.0:
        return np.eye(p)
    tol = RANK_TOL * scale * max(N, p)
    R = B.copy()
    pivots, free = [], []
    row = 0
    for col in range(p):
        if row < N:
            r = row + int(np.argmax(np.abs(R[row:, col])))
            if abs(R[r, col]) > tol:
                R[[row, r]] = R[[r, row]]
                R[row] /= R[row, col]
                others = np.arange(N) != row
                R[others] -= np.outer(R[others, col], R[row])
                pivots.append((row, col))
                row += 1
                continue
        free.append(col)
    if not free:
        return np.zeros((p, 0))
    W = np.zeros((p, len(free)))
    for k, f in enumerate(free):
        W[f, k] = 1.0
        for r, c in pivots:
            W[c, k] = -R[r, f]
    W /= np.abs(W).max(axis=0)
    if np.abs(B @ W).max() <= RESID_TOL * scale:
        return W
    _, _, vt = np.linalg.svd(B)
    W = vt[len(pivots):].T
    W = W / np.abs(W).max(axis=0)
    keep = np.abs(B @ W).max(axis=0) <= RESID_TOL * scale
    return W[:, keep]


def null_vector(B) -> Optional[np.ndarray]:
    """A nonzero w with B w ~ 0 (max|w| = 1), or None if B has full column
    rank. This is the first vector of :func:`null_space_basis`."""
    W = null_space_basis(B)
    return W[:, 0].copy() if W.shape[1] else None


def _step(omega: np.ndarray, w: np.ndarray):
    """One move along null vector ``w``; returns (new omega, took_hat, beta)."""
    alpha = w / omega
    j_star = int(np.argmax(np.abs(alpha)))  # first index on ties
    beta = -1.0 / alpha[j_star]
    f_hat = 1.0 + beta * alpha
    f_bar = 1.0 - beta * alpha
    f_hat[j_star] = 0.0
    f_hat[np.abs(f_hat) <= TIE_TOL] = 0.0
    f_bar[np.abs(f_bar) <= TIE_TOL] = 0.0
    hat, bar = f_hat * omega, f_bar * omega
    l1 = float(np.abs(omega).sum())
    take_hat = np.abs(hat).sum() <= np.abs(bar).sum() + TIE_TOL * max(1.0, l1)
    return (hat if take_hat else bar), bool(take_hat), float(beta)


def _line_run(omega: np.ndarray, u: np.ndarray, cap: int = 200) -> tuple:
    """Moves needed when the null space is the single line spanned by ``u``.

    The direction stays the same until a neuron drops, after which the
    design matrix has full column rank. Returns ``(moves, final l1)``.
    """
    for moves in range(1, cap + 1):
        new, took_hat, _ = _step(omega, u)
        if took_hat:
            return moves, float(np.abs(new).sum())
        omega = new
    return cap, float(np.abs(omega).sum())


def _plan_score(omega: np.ndarray, W: np.ndarray, w: np.ndarray):
    """(total moves, final l1) of starting with ``w`` in a 2-d null space, or
    None if the first move would not drop a neuron."""
    new, took_hat, _ = _step(omega, w)
    if not took_hat:
        return None
    zero = np.abs(new) <= ZERO_TOL
    if zero.sum() >= 2:
        return 1, float(np.abs(new).sum())
    j = int(np.flatnonzero(zero)[0])
    u = W @ np.array([W[j, 1], -W[j, 0]])
    keep = ~zero
    if np.abs(u[keep]).max() <= RESID_TOL:
        return 1, float(np.abs(new).sum())
    moves, l1 = _line_run(new[keep], u[keep] / np.abs(u[keep]).max())
    return 1 + moves, l1


def _balanced(omega: np.ndarray, W: np.ndarray) -> np.ndarray:
    # combination of two basis vectors orthogonal to sign(omega): l1-neutral
    s = W.T @ np.sign(omega)
    k1 = int(np.argmax(np.abs(s)))
    k2 = 1 if k1 == 0 else 0
    w = s[k2] * W[:, k1] - s[k1] * W[:, k2]
    if np.abs(w).max() <= RESID_TOL:
        # sign(omega) is orthogonal to the whole plane
        w = W[:, 0]
    return w / np.abs(w).max()


def choose_null_vector(omega: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Pick the null vector for the next move from the basis ``W``.

    Any nonzero null vector keeps the training outputs fixed, so this is a
    free choice. Preferred are basis vectors whose move drops a neuron (the
    nearest zero crossing lies on the side where l1 does not grow), the one
    with the largest l1 decrease first. If none does, the combination
    orthogonal to sign(omega) is used: it leaves l1 unchanged, so the move
    is a tie and drops a neuron.

    With a 2-d null space the remaining run is short enough to plan: after
    one drop the direction is forced, and a forced line can take several
    mirror moves before it drops. Candidates (basis vectors, the balanced
    combination, directions sampled around the null plane, and directions
    to points where two weights vanish at once)
    are scored by total moves, then final l1. In dimension 1 there is no
    choice.
    """
    if W.shape[1] == 1:
        return W[:, 0]
    if W.shape[1] == 2:
        cands = [W[:, 0], W[:, 1], _balanced(omega, W)]
        for phi in np.linspace(0.0, np.pi, PLAN_ANGLES, endpoint=False):
            w = W @ np.array([np.cos(phi), np.sin(phi)])
            cands.append(w / np.abs(w).max())
        p = omega.size
        for j in range(p):
            for k in range(j + 1, p):
                M2 = W[[j, k]]
                if abs(np.linalg.det(M2)) <= RESID_TOL * np.abs(M2).max() ** 2:
                    continue
                w = W @ np.linalg.solve(M2, -omega[[j, k]])
                if np.abs(w).max() > 0:
                    cands.append(w / np.abs(w).max())
        best, best_key = None, None
        for w in cands:
            score = _plan_score(omega, W, w)
            if score is not None and (best_key is None or score < best_key):
                best, best_key = w, score
        if best is not None:
            return best
        return _balanced(omega, W)
    best, best_l1 = None, np.inf
    for k in range(W.shape[1]):
        new, took_hat, _ = _step(omega, W[:, k])
        l1 = float(np.abs(new).sum())
        if took_hat and l1 < best_l1:
            best, best_l1 = W[:, k], l1
    if best is not None:
        return best
    return _balanced(omega, W)


@dataclass
class SparsifyStep:
    """State after one loop iteration."""

    l1: float
    active: int
    branch: str  # "hat" (toward the nearest zero) or "bar" (mirror side)
    beta: float


@dataclass
class SparsifyTrace:
    initial_l1: float
    initial_active: int
    steps: list

    @property
    def iterations(self) -> int:
        """Loop passes, counting the final full-rank check."""
        return len(self.steps) + 1

    @property
    def l1_history(self) -> np.ndarray:
        return np.array([self.initial_l1] + [s.l1 for s in self.steps])

    @property
    def active_history(self) -> np.ndarray:
        return np.array([self.initial_active] + [s.active for s in self.steps])


def sparsify_with_trace(
    theta: ShallowParams, features, act: Activation = RELU, max_steps: Optional[int] = None,
    on_step: Optional[Callable[[ShallowParams], None]] = None,
):
    """Run the sparsification loop; returns ``(theta, trace)``.

    ``on_step`` is called with the network after every move.
    """
    X = features.features if isinstance(features, Dataset) else np.atleast_2d(features)
    cur = filter_zero(theta)
    trace = SparsifyTrace(float(np.abs(cur.omega).sum()), cur.size, [])
    if max_steps is None:
        max_steps = 1000 * (theta.size + 1)
    for _ in range(max_steps):
        if cur.size == 0:
            return cur, trace
        W = null_space_basis(hidden(cur, X, act))
        if W.shape[1] == 0:
            return cur, trace
        w = choose_null_vector(cur.omega, W)
        new, take_hat, beta = _step(cur.omega, w)
        cur = filter_zero(cur.with_omega(new))
        trace.steps.append(
            SparsifyStep(float(np.abs(cur.omega).sum()), cur.size, "hat" if take_hat else "bar", float(beta))
        )
        if on_step is not None:
            on_step(cur)
    raise RuntimeError(f"sparsification did not terminate within {max_steps} steps")


def sparsify(theta: ShallowParams, features, act: Activation = RELU) -> ShallowParams:
    """Reduce ``theta`` to at most N active neurons with identical training
    outputs and no larger l1 norm."""
    return sparsify_with_trace(theta, features, act)[0]
