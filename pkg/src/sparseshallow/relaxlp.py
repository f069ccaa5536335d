"""Discretized measure problems as linear programs, and their certificates.

For a design matrix A (N x M) and labels Y:

* ``PD_eps``:  min ||omega||_1  s.t.  ||A omega - Y||_inf <= eps, written with
  omega = u+ - u- as an LP in (u+, u-) >= 0 (equalities when eps = 0);
* ``PD_reg``:  min ||omega||_1 + (lam/N) ||A omega - Y||_1, written with
  omega = v+ - v- and residual z+ - z-;
* ``DR_eps``:  max <Y, p> - eps ||p||_1  s.t.  ||A^T p||_inf <= 1, the dual.

The value function V(eps) = val(PD_eps) is convex and nonincreasing with
subdifferential [-C_eps, -c_eps], where c_eps and C_eps are the smallest
and largest l1 norms over dual optima. The generalization bound curves are
U(eps) = eps + c_xx V(eps) and L(lam) = max(1/lam, c_xx) val(PD_reg).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import simplex
from .grid import ParamGrid
from .model import ZERO_TOL, ShallowParams
from .parallel import pmap

FACE_TOL = 1e-9
INCLUSION_TOL = 1e-6
MAX_BISECT = 60


def _design(grid) -> np.ndarray:
    if isinstance(grid, ParamGrid):
        return grid.design
    return np.atleast_2d(np.asarray(grid, dtype=float))


def _labels(labels, n: int) -> np.ndarray:
    Y = np.asarray(labels, dtype=float).ravel()
    if Y.size != n:
        raise ValueError(f"{Y.size} labels for a design matrix with {n} rows")
    return Y


def build_pd_eps(grid, labels, eps: float) -> simplex.LpProblem:
    """LP in (u+, u-) for min 1.(u+ + u-) s.t. -eps <= A(u+ - u-) - Y <= eps."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    A = _design(grid)
    N, M = A.shape
    Y = _labels(labels, N)
    G = np.hstack([A, -A])
    meta = {"kind": "pd_eps", "eps": float(eps), "M": M, "N": N}
    if eps == 0:
        return simplex.LpProblem(np.ones(2 * M), A_eq=G, b_eq=Y, meta=meta)
    return simplex.LpProblem(
        np.ones(2 * M), A_ub=np.vstack([G, -G]), b_ub=np.concatenate([Y + eps, eps - Y]),
        meta=meta,
    )


def build_pd_reg(grid, labels, lam: float) -> simplex.LpProblem:
    """LP in (v+, v-, z+, z-) for min 1.(v+ + v-) + (lam/N) 1.(z+ + z-)
    s.t. A(v+ - v-) - (z+ - z-) = Y."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    A = _design(grid)
    N, M = A.shape
    Y = _labels(labels, N)
    I = np.eye(N)
    c = np.concatenate([np.ones(2 * M), np.full(2 * N, lam / N)])
    return simplex.LpProblem(
        c, A_eq=np.hstack([A, -A, -I, I]), b_eq=Y,
        meta={"kind": "pd_reg", "lambda": float(lam), "M": M, "N": N},
    )


def omega_from_solution(sol: simplex.LpSolution, m_points: int) -> np.ndarray:
    """Signed grid weights u+ - u- (or v+ - v-) of a primal solution."""
    return sol.x[:m_points] - sol.x[m_points : 2 * m_points]


def extract_theta(sol: simplex.LpSolution, grid: ParamGrid) -> ShallowParams:
    """Network carried by the active grid points of a basic optimal solution."""
    if not sol.ok:
        raise ValueError(f"cannot extract a network from a {sol.status} solution")
    omega = omega_from_solution(sol, grid.m)
    omega[np.abs(omega) <= ZERO_TOL] = 0.0
    active = int(np.count_nonzero(omega))
    n = grid.design.shape[0]
    if active > n:
        raise RuntimeError(
            f"basic solution has {active} active neurons for {n} samples; "
            "a vertex can have at most N"
        )
    return grid.theta(omega)


@dataclass
class PrimalResult:
    """Outcome of one PD_eps or PD_reg solve."""

    kind: str
    param: float
    status: str
    value: float
    omega: np.ndarray
    solution: simplex.LpSolution = field(repr=False)

    @property
    def ok(self) -> bool:
        return self.status == simplex.OPTIMAL


def _solve_primal(problem: simplex.LpProblem, kind: str, param: float) -> PrimalResult:
    sol = simplex.solve(problem)
    M = problem.meta["M"]
    omega = omega_from_solution(sol, M) if sol.ok else np.full(M, np.nan)
    value = sol.value if sol.ok else (np.inf if sol.status == simplex.INFEASIBLE else -np.inf)
    return PrimalResult(kind, float(param), sol.status, float(value), omega, sol)


def solve_pd_eps(grid, labels, eps: float) -> PrimalResult:
    """Solve PD_eps; ``value`` is +inf when the constraints cannot be met."""
    return _solve_primal(build_pd_eps(grid, labels, eps), "eps", eps)


def solve_pd_reg(grid, labels, lam: float) -> PrimalResult:
    return _solve_primal(build_pd_reg(grid, labels, lam), "lambda", lam)


@dataclass
class DualCertificate:
    """A dual optimum p of DR_eps with value and l1 norm, plus the l1 extremes
    c_eps and C_eps over all dual optima (nan when not computed)."""

    eps: float
    p: np.ndarray
    value: float
    l1: float
    c_eps: float = np.nan
    C_eps: float = np.nan


def build_dr_eps(grid, labels, eps: float) -> simplex.LpProblem:
    """DR_eps as a minimization in (p+, p-):
    min -<Y, p+ - p-> + eps 1.(p+ + p-)  s.t.  -1 <= A^T (p+ - p-) <= 1."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    A = _design(grid)
    N, M = A.shape
    Y = _labels(labels, N)
    H = np.hstack([A.T, -A.T])
    c = np.concatenate([-Y + eps, Y + eps])
    return simplex.LpProblem(
        c, A_ub=np.vstack([H, -H]), b_ub=np.ones(2 * M),
        meta={"kind": "dr_eps", "eps": float(eps), "M": M, "N": N},
    )


def solve_dual_eps(grid, labels, eps: float) -> DualCertificate:
    """Solve DR_eps directly (not through the primal) and return p, value."""
    prob = build_dr_eps(grid, labels, eps)
    sol = simplex.solve(prob)
    if not sol.ok:
        # p = 0 is always feasible, so only unboundedness can get here
        N = prob.meta["N"]
        return DualCertificate(float(eps), np.full(N, np.nan), np.inf, np.inf)
    N = prob.meta["N"]
    p = sol.x[:N] - sol.x[N:]
    return DualCertificate(float(eps), p, -sol.value, float(np.abs(p).sum()))


def _face_problem(A, Y, eps, dual_value, sense, tol):
    # rows: +-A^T (p+ - p-) <= 1 and <Y, p+ - p-> - eps 1.(p+ + p-) >= dual_value - tol
    N, M = A.shape
    H = np.hstack([A.T, -A.T])
    face = np.concatenate([-Y + eps, Y + eps])[None, :]
    return simplex.LpProblem(
        sense * np.ones(2 * N),
        A_ub=np.vstack([H, -H, face]),
        b_ub=np.concatenate([np.ones(2 * M), [-dual_value + tol]]),
    )


def _face_extreme(grid, labels, eps, dual_value, sense, tol):
    A = _design(grid)
    Y = _labels(labels, A.shape[0])
    if not np.isfinite(dual_value):
        return np.inf
    tol = FACE_TOL * (1.0 + abs(dual_value)) if tol is None else tol
    sol = simplex.solve_dual_form(_face_problem(A, Y, eps, dual_value, sense, tol))
    if sol.status == simplex.INFEASIBLE:
        raise ValueError(
            f"no dual-feasible p reaches value {dual_value!r} at eps={eps}; "
            "the supplied dual value is inconsistent"
        )
    if sol.status == simplex.UNBOUNDED:
        return np.inf
    return float(sense * sol.value)


def c_eps(grid, labels, eps: float, dual_value: float, tol: Optional[float] = None) -> float:
    """Smallest l1 norm over the optimal set of DR_eps (c_0 at eps = 0).

    ``dual_value`` is val(DR_eps), equal to val(PD_eps) by strong duality.
    The optimality equality is relaxed by ``tol`` (default 1e-9 * (1+|value|)).
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return _face_extreme(grid, labels, eps, dual_value, 1.0, tol)


def C_eps(grid, labels, eps: float, dual_value: float, tol: Optional[float] = None) -> float:
    """Largest l1 norm over the optimal set of DR_eps; needs eps > 0.

    For eps > 0 the objective row forces sum(p+ + p-) = ||p||_1 on the
    optimal face, so maximizing the sum is exact. Returns inf if unbounded.
    """
    if not eps > 0:
        raise ValueError("C_eps is only defined for eps > 0")
    return _face_extreme(grid, labels, eps, dual_value, -1.0, tol)


def certificate(grid, labels, eps: float) -> DualCertificate:
    """Dual optimum of DR_eps together with c_eps and C_eps (C only for eps > 0)."""
    cert = solve_dual_eps(grid, labels, eps)
    cert.c_eps = c_eps(grid, labels, eps, cert.value)
    if eps > 0:
        cert.C_eps = C_eps(grid, labels, eps, cert.value)
    return cert


@dataclass
class CurveSample:
    param: float
    pd_value: float
    curve_value: float
    c_eps: float = np.nan
    C_eps: float = np.nan


@dataclass
class HyperCurve:
    """Sampled bound curve U(eps) or L(lambda).

    Samples whose LP is infeasible (small eps on a coarse grid) cannot carry
    a finite curve value; their parameters are listed in ``infeasible``.
    """

    kind: str
    c_xx: float
    samples: list
    infeasible: list = field(default_factory=list)

    @property
    def params(self) -> np.ndarray:
        return np.array([s.param for s in self.samples])

    @property
    def values(self) -> np.ndarray:
        return np.array([s.curve_value for s in self.samples])

    @property
    def pd_values(self) -> np.ndarray:
        return np.array([s.pd_value for s in self.samples])

    def argmin(self) -> float:
        return float(self.params[int(np.argmin(self.values))])

    def to_csv(self) -> str:
        lines = ["param,pd_value,curve_value,c_eps,C_eps"]
        for s in self.samples:
            lines.append(
                ",".join(repr(float(v)) for v in (s.param, s.pd_value, s.curve_value, s.c_eps, s.C_eps))
            )
        return "\n".join(lines) + "\n"


def _check_sorted(values: Sequence[float], name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0 or np.any(np.diff(arr) <= 0):
        raise ValueError(f"{name} must be a non-empty strictly increasing list")
    return arr


def sweep_eps(grid, labels, eps_list, workers: Optional[int] = None) -> list:
    """PD_eps solved at every eps (independent solves, input order kept)."""
    return pmap(lambda e: solve_pd_eps(grid, labels, e), list(eps_list), workers)


def sweep_lambda(grid, labels, lam_list, workers: Optional[int] = None) -> list:
    return pmap(lambda l: solve_pd_reg(grid, labels, l), list(lam_list), workers)


def curve_U(
    grid, labels, eps_list, c_xx: float, certificates: bool = False,
    results: Optional[list] = None, workers: Optional[int] = None,
) -> HyperCurve:
    """U(eps) = eps + c_xx * val(PD_eps) at each eps.

    ``results`` may pass in an existing :func:`sweep_eps` output. With
    ``certificates`` the c_eps/C_eps columns are filled as well.
    """
    if c_xx < 0:
        raise ValueError("c_xx must be nonnegative")
    eps_arr = _check_sorted(eps_list, "eps_list")
    if results is None:
        results = sweep_eps(grid, labels, eps_arr, workers)
    samples, infeasible = [], []
    for e, res in zip(eps_arr, results):
        if not res.ok:
            infeasible.append(float(e))
            continue
        s = CurveSample(float(e), res.value, float(e) + c_xx * res.value)
        if certificates:
            s.c_eps = c_eps(grid, labels, e, res.value)
            if e > 0:
                s.C_eps = C_eps(grid, labels, e, res.value)
        samples.append(s)
    return HyperCurve("U", float(c_xx), samples, infeasible)


def curve_L(
    grid, labels, lam_list, c_xx: float, results: Optional[list] = None,
    workers: Optional[int] = None,
) -> HyperCurve:
    """L(lam) = max(1/lam, c_xx) * val(PD_reg(lam)) at each lam."""
    if c_xx < 0:
        raise ValueError("c_xx must be nonnegative")
    lam_arr = _check_sorted(lam_list, "lambda_list")
    if results is None:
        results = sweep_lambda(grid, labels, lam_arr, workers)
    samples = [
        CurveSample(float(l), r.value, max(1.0 / l, c_xx) * r.value)
        for l, r in zip(lam_arr, results)
    ]
    return HyperCurve("L", float(c_xx), samples)


def optimal_lambda(c_xx: float) -> float:
    """Minimizer 1/c_xx of the regression bound's prefactor max(1/lam, c_xx)."""
    if not c_xx > 0:
        raise ValueError("c_xx must be positive")
    return 1.0 / c_xx


@dataclass
class EpsOptimum:
    """Located minimizer of U(eps): ``eps`` with ``1/c_xx`` in [c_eps, C_eps].

    ``bracket`` is the final search interval; ``converged`` is False when the
    iteration budget ran out, in which case ``eps`` is the bracket midpoint.
    """

    eps: float
    bracket: tuple
    converged: bool
    c_eps: float
    C_eps: float
    c_0: float
    iterations: int

    def __float__(self) -> float:
        return float(self.eps)


def _eval_point(grid, Y, eps):
    res = solve_pd_eps(grid, Y, eps)
    if not res.ok:
        return np.inf, np.inf, np.inf
    lo = c_eps(grid, Y, eps, res.value)
    hi = C_eps(grid, Y, eps, res.value) if eps > 0 else np.inf
    return res.value, lo, hi


def optimal_eps(
    grid, labels, c_xx: float, tol: float = INCLUSION_TOL, max_iter: int = MAX_BISECT
) -> EpsOptimum:
    """Minimize U(eps) = eps + c_xx V(eps) over eps in [0, ||Y||_inf].

    Returns eps = 0 when 1/c_xx >= c_0. Otherwise searches for eps with
    c_eps <= 1/c_xx <= C_eps; since -V' decreases in eps this is a
    bisection, except that the crossing point of the supporting lines at the
    two bracket ends is tried first (V is piecewise linear, so this often
    lands exactly on the kink). Every third step is a plain midpoint.
    """
    if not c_xx > 0:
        raise ValueError("c_xx must be positive")
    A = _design(grid)
    Y = _labels(labels, A.shape[0])
    t = 1.0 / c_xx
    v_lo, c_lo, _ = _eval_point(A, Y, 0.0)
    c0 = c_lo
    if t >= c0 - tol:
        return EpsOptimum(0.0, (0.0, 0.0), True, c0, np.inf, c0, 0)
    lo, hi = 0.0, float(np.abs(Y).max())
    v_hi, c_hi, C_hi = _eval_point(A, Y, hi)
    if c_hi - tol <= t <= C_hi + tol:
        return EpsOptimum(hi, (hi, hi), True, c_hi, C_hi, c0, 0)
    for k in range(1, max_iter + 1):
        width = hi - lo
        cand = np.nan
        if k % 3 and np.isfinite(v_lo) and np.isfinite(c_lo) and c_lo != C_hi:
            cand = (v_lo - v_hi + c_lo * lo - C_hi * hi) / (c_lo - C_hi)
        if not (lo + 1e-3 * width < cand < hi - 1e-3 * width):
            cand = 0.5 * (lo + hi)
        v, c_mid, C_mid = _eval_point(A, Y, cand)
        if c_mid - tol <= t <= C_mid + tol:
            return EpsOptimum(float(cand), (lo, hi), True, c_mid, C_mid, c0, k)
        if t < c_mid:
            lo, v_lo, c_lo = cand, v, c_mid
        else:
            hi, v_hi, C_hi = cand, v, C_mid
        if hi - lo <= 1e-14 * max(1.0, hi):
            break
    warnings.warn(
        f"optimal_eps did not meet the inclusion test after {max_iter} steps; "
        f"returning the bracket [{lo}, {hi}]",
        RuntimeWarning,
    )
    mid = 0.5 * (lo + hi)
    return EpsOptimum(mid, (lo, hi), False, c_lo, C_hi, c0, max_iter)
