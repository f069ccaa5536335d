"""Two-phase revised simplex solver for small and medium dense LPs.

Problems are stated as::

    minimize    c @ x
    subject to  A_ub @ x <= b_ub
                A_eq @ x == b_eq
                x >= 0

Slacks are inserted for the inequality rows and rows with a negative
right-hand side are sign-flipped, so the working system is ``A x = b`` with
``b >= 0``. Phase 1 minimizes the sum of artificial variables; phase 2 the
original objective. Pricing is Dantzig's rule with Devex reference weights,
falling back to Bland's rule after a long run of non-improving (degenerate)
pivots, which rules out cycling. The ratio test uses Harris' two passes and
rejects pivots that are tiny relative to the entering column. The basis
inverse is kept explicitly and rebuilt every ``REFRESH_EVERY`` pivots.

Badly scaled, highly degenerate problems get two extra safeguards in phase
two. A long stall triggers one small random shift of the right-hand side,
and basic values that drift slightly negative are absorbed the same way;
the shift is undone at optimality and a few dual simplex pivots restore
feasibility. A singular refactorization rolls back to the last good basis
with a stricter pivot threshold.

Rank-deficient equality blocks are replaced by an orthonormal basis of their
row space before solving, so the working matrix always has full row rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-9
# smallest accepted pivot relative to the entering column's largest entry
PIVOT_REL = 1e-7
DUALITY_TOL = 1e-7
PRICE_REL = 1e-14  # reduced-cost rounding allowance per unit of ||y||_1 * max|A_j|
REFRESH_EVERY = 50
# size of the right-hand-side shift used to break degenerate stalls
PERTURB_REL = 1e-7
# primal infeasibility after a refresh that signals lost accuracy
DRIFT_TOL = 1e-6
MAX_RECOVERIES = 6

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class SimplexStallError(RuntimeError):
    """Raised when the iteration cap is hit or the basis becomes singular."""

    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


def _as_matrix(a, n_cols: int) -> np.ndarray:
    if a is None:
        return np.zeros((0, n_cols))
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return np.zeros((a.shape[0] if a.ndim == 2 else 0, n_cols))
    return np.atleast_2d(a)


def _as_vector(b) -> np.ndarray:
    if b is None:
        return np.zeros(0)
    return np.atleast_1d(np.asarray(b, dtype=float)).ravel()


@dataclass(frozen=True)
class LpProblem:
    """Linear program in inequality/equality form with nonnegative variables."""

    c: np.ndarray
    A_ub: np.ndarray = None
    b_ub: np.ndarray = None
    A_eq: np.ndarray = None
    b_eq: np.ndarray = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        c = _as_vector(self.c)
        n = c.size
        A_ub = _as_matrix(self.A_ub, n)
        A_eq = _as_matrix(self.A_eq, n)
        b_ub = _as_vector(self.b_ub)
        b_eq = _as_vector(self.b_eq)
        if A_ub.shape != (b_ub.size, n):
            raise ValueError(f"A_ub has shape {A_ub.shape}, expected ({b_ub.size}, {n})")
        if A_eq.shape != (b_eq.size, n):
            raise ValueError(f"A_eq has shape {A_eq.shape}, expected ({b_eq.size}, {n})")
        for name, arr in (("c", c), ("A_ub", A_ub), ("b_ub", b_ub), ("A_eq", A_eq), ("b_eq", b_eq)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite entries")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A_ub", A_ub)
        object.__setattr__(self, "b_ub", b_ub)
        object.__setattr__(self, "A_eq", A_eq)
        object.__setattr__(self, "b_eq", b_eq)

    @property
    def n_vars(self) -> int:
        return self.c.size

    @property
    def n_ub(self) -> int:
        return self.b_ub.size

    @property
    def n_eq(self) -> int:
        return self.b_eq.size

    def to_text(self) -> str:
        """Plain "minimize / subject to" dump for cross-checking elsewhere."""

        def expr(coefs):
            terms = [f"{v:+.17g} x{j}" for j, v in enumerate(coefs) if v != 0.0]
            return " ".join(terms) if terms else "0"

        lines = ["minimize", "  obj: " + expr(self.c), "subject to"]
        for i in range(self.n_ub):
            lines.append(f"  ub{i}: {expr(self.A_ub[i])} <= {self.b_ub[i]:.17g}")
        for i in range(self.n_eq):
            lines.append(f"  eq{i}: {expr(self.A_eq[i])} = {self.b_eq[i]:.17g}")
        lines.append("bounds")
        lines.append(f"  x0..x{self.n_vars - 1} >= 0")
        lines.append("end")
        return "\n".join(lines) + "\n"


@dataclass
class LpSolution:
    """Result of :func:`solve`.

    ``dual`` holds one multiplier per original row, inequality rows first,
    with the sign convention ``c @ x == dual @ concat(b_ub, b_eq)`` at the
    optimum (so multipliers of ``<=`` rows are nonpositive). ``basis`` lists
    column indices of the internal standard form: structural variables come
    first, then one slack per inequality row, then artificials.
    """

    status: str
    x: np.ndarray
    value: float
    dual: np.ndarray
    basis: np.ndarray
    iterations: int
    phase1_value: float = 0.0
    n_eq: int = 0

    @property
    def dual_ub(self) -> np.ndarray:
        return self.dual[: self.dual.size - self.n_eq]

    @property
    def dual_eq(self) -> np.ndarray:
        return self.dual[self.dual.size - self.n_eq :]

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Working state of the revised simplex method on ``A x = b, x >= 0``."""

    def __init__(self, A: np.ndarray, b: np.ndarray, basis: np.ndarray, max_iter: int):
        self.A = A
        self.b = b
        self.m, self.n = A.shape
        self.basis = basis.copy()
        self.max_iter = max_iter
        self.iterations = 0
        self._since_refresh = 0
        self.b_orig = b
        self.perturbed = False
        self.pivot_rel = PIVOT_REL
        self.refresh_every = REFRESH_EVERY
        self.recoveries = 0
        self.refresh()
        self.checkpoint()

    def refresh(self):
        B = self.A[:, self.basis]
        try:
            self.Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise SimplexStallError(
                "basis matrix became singular", {"iterations": self.iterations}
            ) from exc
        self.xB = self.Binv @ self.b
        resid = float(np.abs(B @ self.xB - self.b).max())
        if resid > 1e-6 * (1.0 + float(np.abs(self.b).max())):
            raise SimplexStallError(
                "basis matrix is numerically singular",
                {"iterations": self.iterations, "residual": resid},
            )
        self.xB[(self.xB < 0) & (self.xB > -FEAS_TOL)] = 0.0
        self._since_refresh = 0

    def duals(self, cost: np.ndarray) -> np.ndarray:
        return cost[self.basis] @ self.Binv

    def pivot(self, r: int, q: int, col: np.ndarray, theta: Optional[float] = None):
        if theta is None:
            # a slightly negative leaving value must not push the entering one below 0
            theta = max(self.xB[r], 0.0) / col[r]
        self.xB -= theta * col
        self.xB[r] = theta
        self.xB[(self.xB < 0) & (self.xB > -FEAS_TOL)] = 0.0
        row = self.Binv[r] / col[r]
        self.Binv -= np.outer(col, row)
        self.Binv[r] = row
        self.basis[r] = q
        self._since_refresh += 1
        if self._since_refresh >= self.refresh_every:
            self.refresh()

    def checkpoint(self):
        self._saved = (self.basis.copy(), self.Binv.copy(), self.xB.copy(), self.b, self.perturbed)

    def healthy(self) -> bool:
        return float(self.xB.min(initial=0.0)) >= -DRIFT_TOL * (1.0 + float(np.abs(self.xB).max(initial=0.0)))

    def recover(self, reason: str):
        """Return to the last checkpointed basis with stricter pivoting."""
        self.recoveries += 1
        if self.recoveries > MAX_RECOVERIES:
            raise SimplexStallError(reason, {"iterations": self.iterations, "recoveries": self.recoveries - 1})
        basis, Binv, xB, b, perturbed = self._saved
        self.basis, self.Binv, self.xB = basis.copy(), Binv.copy(), xB.copy()
        self.b, self.perturbed = b, perturbed
        self._since_refresh = 0
        self.pivot_rel = min(10.0 * self.pivot_rel, 1e-3)
        self.refresh_every = max(5, self.refresh_every // 2)

    def perturb(self, artificial: np.ndarray):
        """Shift every non-artificial basic value up by a tiny random amount.

        The right-hand side becomes ``B (xB + xi)``, so the current basis stays
        feasible while ties in the ratio test (degenerate vertices) disappear.
        """
        rng = np.random.default_rng(self.m)
        xi = PERTURB_REL * (1.0 + np.abs(self.xB)) * rng.uniform(0.5, 1.0, self.m)
        xi[artificial[self.basis]] = 0.0
        self.b = self.b + self.A[:, self.basis] @ xi
        self.xB = self.xB + xi
        self.perturbed = True

    def shift(self):
        """Absorb slightly negative basic values into the right-hand side."""
        xi = np.maximum(-self.xB, 0.0)
        self.b = self.b + self.A[:, self.basis] @ xi
        self.xB = self.xB + xi
        self.perturbed = True

    def unperturb(self):
        self.b = self.b_orig
        self.perturbed = False
        self.refresh()

    def dual_repair(self, cost: np.ndarray, allowed: np.ndarray):
        """Dual simplex pivots until the basic values are nonnegative again.

        Used after removing the perturbation: the basis is still dual feasible
        (reduced costs do not depend on b), so a few dual pivots restore
        primal feasibility without losing optimality.
        """
        while True:
            neg = self.xB < -FEAS_TOL * (1.0 + np.abs(self.xB))
            if not neg.any():
                self.xB[self.xB < 0] = 0.0
                return
            if self.iterations >= self.max_iter:
                raise SimplexStallError(
                    f"simplex hit the iteration cap ({self.max_iter})", {"iterations": self.iterations}
                )
            r = int(np.argmin(self.xB))
            alpha = self.Binv[r] @ self.A
            d = cost - self.duals(cost) @ self.A
            ok = allowed & (alpha < -PIVOT_TOL * max(1.0, float(np.abs(alpha).max())))
            ok[self.basis] = False
            cand = np.flatnonzero(ok)
            if cand.size == 0:
                raise SimplexStallError(
                    "no dual pivot restores feasibility after perturbation",
                    {"iterations": self.iterations, "row": r, "value": float(self.xB[r])},
                )
            ratios = np.maximum(d[cand], 0.0) / -alpha[cand]
            best = ratios.min()
            ties = cand[ratios <= best + FEAS_TOL]
            q = int(ties[np.argmin(alpha[ties])])
            col = self.Binv @ self.A[:, q]
            self.pivot(r, q, col, theta=self.xB[r] / col[r])
            self.iterations += 1

    def run(
        self,
        cost: np.ndarray,
        allowed: np.ndarray,
        artificial: np.ndarray,
        target: float = -np.inf,
        perturb: bool = False,
    ) -> str:
        """Iterate until optimal or unbounded for the given cost vector.

        ``allowed`` masks columns that may enter the basis. Basic artificial
        variables (redundant rows) are kept at zero by forcing them out
        whenever the entering column touches their row. Reaching an objective
        at or below ``target`` counts as optimal, which lets phase one stop as
        soon as it is feasible instead of pivoting through degenerate vertices.

        With ``perturb``, a run of ``max(50, m)`` non-improving pivots triggers
        one right-hand-side perturbation; it is removed at optimality and the
        basis repaired with dual pivots. Bland's rule remains the fallback.
        """
        m, n = self.m, self.n
        stall_limit = 3 * (m + n)
        perturb_after = max(50, m)
        # phase two may move the right-hand side; it is restored at optimality
        shifting = perturb
        # reduced costs carry rounding error proportional to the cost scale
        dual_tol = FEAS_TOL * max(1.0, float(np.abs(cost[allowed]).max(initial=0.0)))
        # and rounding in y @ A grows with the size of the duals
        col_scale = np.abs(self.A).max(axis=0, initial=0.0)
        best = np.inf
        no_improve = 0
        bland = False
        verified = False
        # Devex reference weights approximating squared steepest-edge norms
        weights = np.ones(n)
        rejected = np.zeros(n, dtype=bool)
        while True:
            if self.iterations >= self.max_iter:
                raise SimplexStallError(
                    f"simplex hit the iteration cap ({self.max_iter})",
                    {"iterations": self.iterations, "rows": m, "cols": n, "bland": bland},
                )
            y = self.duals(cost)
            d = cost - y @ self.A
            d[self.basis] = 0.0
            d[~allowed] = 0.0
            d[rejected] = 0.0
            tol_d = dual_tol + PRICE_REL * float(np.abs(y).sum()) * col_scale
            entering = np.flatnonzero(d < -tol_d)
            if entering.size == 0:
                if rejected.any():
                    # every improving column only offered tiny pivots
                    raise SimplexStallError(
                        "no numerically acceptable pivot",
                        {"iterations": self.iterations, "rejected": int(rejected.sum())},
                    )
                if self.perturbed:
                    self.unperturb()
                    self.dual_repair(cost, allowed)
                    best, no_improve, verified = np.inf, 0, False
                    continue
                if verified or self._since_refresh == 0:
                    return OPTIMAL
                # recheck optimality against a freshly inverted basis
                self.refresh()
                verified = True
                continue
            if bland:
                q = int(entering[0])
            else:
                dq = d[entering]
                q = int(entering[np.argmax(dq * dq / weights[entering])])
            col = self.Binv @ self.A[:, q]
            colmax = float(np.abs(col).max())
            tol = PIVOT_TOL * max(1.0, colmax)

            art_rows = artificial[self.basis] & (np.abs(col) > tol)
            if np.any(art_rows):
                r = int(np.flatnonzero(art_rows)[0])
            else:
                pos = np.flatnonzero(col > tol)
                if pos.size == 0:
                    if self._since_refresh and not verified:
                        # confirm the ray with a freshly inverted basis
                        self.refresh()
                        verified = True
                        continue
                    if self.perturbed:
                        self.unperturb()
                    return UNBOUNDED
                xb = np.maximum(self.xB[pos], 0.0)
                if bland:
                    ratios = xb / col[pos]
                    theta = ratios.min()
                    ties = pos[ratios <= theta + FEAS_TOL * max(1.0, theta)]
                    r = int(ties[np.argmin(self.basis[ties])])
                else:
                    # Harris two-pass: relax bounds, then take the largest pivot
                    theta_max = ((xb + FEAS_TOL) / col[pos]).min()
                    cand = pos[xb / col[pos] <= theta_max]
                    r = int(cand[np.argmax(col[cand])])
            if abs(col[r]) < self.pivot_rel * colmax:
                rejected[q] = True
                continue
            rejected[:] = False
            verified = False

            if not bland:
                alpha_r = self.Binv[r] @ self.A
                ratio = alpha_r / col[r]
                wq = weights[q]
                np.maximum(weights, ratio * ratio * wq, out=weights)
                leaving = self.basis[r]
                weights[leaving] = max(wq / (col[r] * col[r]), 1.0)
                if wq > 1e6:
                    weights[:] = 1.0
            try:
                self.pivot(r, q, col)
            except SimplexStallError as exc:
                self.recover(str(exc))
                weights[:] = 1.0
                continue
            self.iterations += 1
            if self._since_refresh == 0:
                if not self.healthy():
                    if not shifting:
                        self.recover("basic values drifted negative")
                        weights[:] = 1.0
                        continue
                    self.shift()
                self.checkpoint()

            obj = float(cost[self.basis] @ self.xB)
            if obj <= target:
                self.refresh()
                if float(cost[self.basis] @ self.xB) <= target:
                    return OPTIMAL
            if obj < best - FEAS_TOL * max(1.0, abs(best) if np.isfinite(best) else 1.0):
                best = obj
                no_improve = 0
                bland = False
            else:
                no_improve += 1
                if perturb and not self.perturbed and no_improve > perturb_after:
                    self.perturb(artificial)
                    perturb = False  # once per run
                    best, no_improve = np.inf, 0
                elif no_improve > stall_limit:
                    bland = True

    def drive_out_artificials(self, artificial: np.ndarray):
        """Pivot zero-level artificials out of the basis where possible."""
        for r in range(self.m):
            if not artificial[self.basis[r]]:
                continue
            row = self.Binv[r] @ self.A
            row[artificial] = 0.0
            row[self.basis] = 0.0
            j = int(np.argmax(np.abs(row)))
            if abs(row[j]) > 1e-7 * max(1.0, float(np.abs(self.A[:, j]).max())):
                col = self.Binv @ self.A[:, j]
                self.pivot(r, j, col)
        self.refresh()


def row_space_basis(A: np.ndarray, b: np.ndarray):
    """Reduce a possibly rank-deficient system ``A x = b`` to full row rank.

    Returns ``(Q, consistent)`` where ``Q`` has orthonormal columns spanning
    the range of ``A`` (left singular vectors above the usual
    ``max(shape) * machine-eps`` relative rank cutoff) and ``consistent`` says whether ``b`` lies in that
    range. ``Q.T @ A x = Q.T @ b`` is then an equivalent, well-conditioned
    system; keeping a subset of the original rows instead can leave nearly
    dependent rows behind and every basis badly conditioned.
    """
    m = A.shape[0]
    if m == 0:
        return np.zeros((0, 0)), True
    U, sv, _ = np.linalg.svd(A, full_matrices=False)
    if sv.size == 0 or sv[0] == 0.0:
        return np.zeros((m, 0)), bool(np.all(np.abs(b) <= FEAS_TOL))
    rank = int(np.sum(sv > sv[0] * max(A.shape) * np.finfo(float).eps))
    Q1 = U[:, :rank]
    gap = b - Q1 @ (Q1.T @ b)
    consistent = bool(np.all(np.abs(gap) <= 1e-8 * (1.0 + float(np.abs(b).max()))))
    return Q1, consistent


def solve(problem: LpProblem, max_iter: Optional[int] = None) -> LpSolution:
    """Solve ``problem`` and return a basic solution with its dual vector.

    Rank-deficient equality rows are first replaced by an orthonormal basis
    of their row space; an inconsistent system means infeasibility. The
    equality multipliers are mapped back to the original rows.

    Raises:
        SimplexStallError: on hitting the iteration cap or a singular basis.
    """
    n = problem.n_vars
    if problem.n_eq == 0:
        return _solve_standard(problem, max_iter)
    Q1, consistent = row_space_basis(problem.A_eq, problem.b_eq)
    if not consistent:
        m = problem.n_ub + problem.n_eq
        return LpSolution(
            INFEASIBLE, np.zeros(n), np.nan, np.zeros(m), np.zeros(0, int), 0,
            np.inf, n_eq=problem.n_eq,
        )
    if Q1.shape[1] < problem.n_eq:
        reduced = LpProblem(
            problem.c, problem.A_ub, problem.b_ub, Q1.T @ problem.A_eq, Q1.T @ problem.b_eq
        )
        sol = _solve_standard(reduced, max_iter)
        sol.dual = np.concatenate([sol.dual_ub, Q1 @ sol.dual_eq])
        sol.n_eq = problem.n_eq
        return sol
    return _solve_standard(problem, max_iter)


def _solve_standard(problem: LpProblem, max_iter: Optional[int]) -> LpSolution:
    n = problem.n_vars
    n_ub, n_eq = problem.n_ub, problem.n_eq
    m = n_ub + n_eq
    if m == 0:
        # only x >= 0: optimal at 0 unless some cost is negative
        if np.any(problem.c < 0):
            return LpSolution(UNBOUNDED, np.zeros(n), -np.inf, np.zeros(0), np.zeros(0, int), 0)
        return LpSolution(OPTIMAL, np.zeros(n), 0.0, np.zeros(0), np.zeros(0, int), 0)

    A = np.zeros((m, n + n_ub))
    A[:n_ub, :n] = problem.A_ub
    A[:n_ub, n:] = np.eye(n_ub)
    A[n_ub:, :n] = problem.A_eq
    b = np.concatenate([problem.b_ub, problem.b_eq])
    sign = np.where(b < 0, -1.0, 1.0)
    A *= sign[:, None]
    b = b * sign

    basis = np.empty(m, dtype=int)
    needs_art = []
    for i in range(m):
        if i < n_ub and sign[i] > 0:
            basis[i] = n + i
        else:
            needs_art.append(i)
    n_art = len(needs_art)
    if n_art:
        art_block = np.zeros((m, n_art))
        for k, i in enumerate(needs_art):
            art_block[i, k] = 1.0
            basis[i] = n + n_ub + k
        A = np.hstack([A, art_block])
    n_tot = A.shape[1]
    artificial = np.zeros(n_tot, dtype=bool)
    artificial[n + n_ub :] = True

    if max_iter is None:
        max_iter = 50 * (m + n_tot) + 1000
    tab = _Tableau(A, b, basis, max_iter)

    phase1_value = 0.0
    if n_art:
        cost1 = artificial.astype(float)
        b_scale = max(1.0, float(np.abs(b).max()))
        tab.run(
            cost1, np.ones(n_tot, dtype=bool), np.zeros(n_tot, dtype=bool),
            target=1e-10 * b_scale,
        )
        tab.refresh()
        phase1_value = float(cost1[tab.basis] @ tab.xB)
        if phase1_value > 1e-8 * b_scale:
            x = np.zeros(n_tot)
            x[tab.basis] = tab.xB
            return LpSolution(
                INFEASIBLE, x[:n], np.nan, np.zeros(m), tab.basis.copy(),
                tab.iterations, phase1_value, n_eq=n_eq,
            )
        tab.drive_out_artificials(artificial)

    cost2 = np.zeros(n_tot)
    cost2[:n] = problem.c
    status = tab.run(cost2, ~artificial, artificial, perturb=True)
    x = np.zeros(n_tot)
    x[tab.basis] = np.maximum(tab.xB, 0.0)
    y = tab.duals(cost2) * sign
    if status == UNBOUNDED:
        return LpSolution(
            UNBOUNDED, x[:n], -np.inf, y, tab.basis.copy(), tab.iterations,
            phase1_value, n_eq=n_eq,
        )
    value = float(problem.c @ x[:n])
    return LpSolution(
        OPTIMAL, x[:n], value, y, tab.basis.copy(), tab.iterations, phase1_value,
        n_eq=n_eq,
    )


def linprog(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None) -> LpSolution:
    """Convenience wrapper building an :class:`LpProblem` and solving it."""
    return solve(LpProblem(c, A_ub, b_ub, A_eq, b_eq))


def solve_dual_form(problem: LpProblem, max_iter: Optional[int] = None) -> LpSolution:
    """Solve ``problem`` through its LP dual and map the answer back.

    The dual of ``min c@x, A_ub x <= b_ub, A_eq x = b_eq, x >= 0`` is solved
    as ``min b_ub@w - b_eq@z  s.t.  -A_ub.T w + A_eq.T z <= c, w >= 0`` with
    ``z`` split into two nonnegative parts. Its basis has one row per
    original variable, which pays off when the original problem has many
    more rows than columns. The primal ``x`` is read from the dual's
    multipliers; ``basis`` then lists the support of ``x``. If the dual is
    infeasible (original unbounded or infeasible) the original is solved
    directly to tell the two apart.
    """
    n = problem.n_vars
    n_ub, n_eq = problem.n_ub, problem.n_eq
    if n_ub + n_eq == 0:
        return solve(problem, max_iter)
    dual = LpProblem(
        c=np.concatenate([problem.b_ub, -problem.b_eq, problem.b_eq]),
        A_ub=np.hstack([-problem.A_ub.T, problem.A_eq.T, -problem.A_eq.T]),
        b_ub=problem.c,
    )
    dsol = solve(dual, max_iter)
    m = n_ub + n_eq
    if dsol.status == UNBOUNDED:
        return LpSolution(
            INFEASIBLE, np.zeros(n), np.nan, np.zeros(m), np.zeros(0, int),
            dsol.iterations, np.inf, n_eq=n_eq,
        )
    if dsol.status != OPTIMAL:
        return solve(problem, max_iter)
    x = np.maximum(-dsol.dual, 0.0)
    w = dsol.x[:n_ub]
    z = dsol.x[n_ub : n_ub + n_eq] - dsol.x[n_ub + n_eq :]
    return LpSolution(
        OPTIMAL, x, float(problem.c @ x), np.concatenate([-w, z]),
        np.flatnonzero(x > 0), dsol.iterations, n_eq=n_eq,
    )
