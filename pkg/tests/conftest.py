"""Shared oracles and instance generators for the test suite."""

import itertools

import numpy as np
import pytest

from sparseshallow.grid import build_grid
from sparseshallow.model import Dataset, ParamDomain


def standard_form(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None):
    """Slacked system [A_ub I; A_eq 0] z = b with the cost padded by zeros."""
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.atleast_2d(A_ub)
    A_eq = np.zeros((0, n)) if A_eq is None else np.atleast_2d(A_eq)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float)
    k = A_ub.shape[0]
    A = np.vstack([np.hstack([A_ub, np.eye(k)]), np.hstack([A_eq, np.zeros((A_eq.shape[0], k))])])
    return np.concatenate([c, np.zeros(k)]), A, np.concatenate([b_ub, b_eq])


def enumerate_vertices(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, tol=1e-9):
    """Minimum of c @ x over all basic feasible solutions, or None if there
    are none. Only valid for LPs known to be bounded."""
    cs, A, b = standard_form(c, A_ub, b_ub, A_eq, b_eq)
    if A.shape[0] == 0:
        return 0.0 if np.all(cs >= 0) else None
    r = np.linalg.matrix_rank(A)
    best = None
    for S in itertools.combinations(range(A.shape[1]), r):
        B = A[:, S]
        if np.linalg.matrix_rank(B) < r:
            continue
        xs = np.linalg.lstsq(B, b, rcond=None)[0]
        if np.abs(B @ xs - b).max() > 1e-8 * (1 + np.abs(b).max()) or xs.min() < -tol:
            continue
        val = float(cs[list(S)] @ xs)
        best = val if best is None else min(best, val)
    return best


def random_dataset(rng, n, d, label_scale=1.0):
    X = rng.normal(size=(n, d))
    return Dataset(X, label_scale * rng.normal(size=n))


def random_grid(rng, n, d, m_target, half_width=2.0):
    """Dataset plus a uniform grid with roughly ``m_target`` points."""
    data = random_dataset(rng, n, d)
    dom = ParamDomain.hypercube(-half_width * np.ones(d + 1), half_width * np.ones(d + 1))
    per_axis = max(1, int(round(m_target ** (1.0 / (d + 1)))))
    step = 2 * half_width / per_axis
    return data, build_grid(dom, step, data)


# PASS/FAIL lines from the acceptance suite, repeated in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
