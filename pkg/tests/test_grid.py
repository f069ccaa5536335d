import numpy as np
import pytest

from sparseshallow.grid import (
    GridTooLargeError,
    bounding_domain,
    build_grid,
    dataset_constants,
    design_matrix,
    grid_size,
    nested_grids,
    step_for_size,
    uniform_grid,
)
from sparseshallow.model import Dataset, ParamDomain, ShallowParams, forward
from sparseshallow.relaxlp import solve_pd_eps


class TestUniformGrid:
    def test_interval_step_one(self):
        pts, bound = uniform_grid(ParamDomain.hypercube([-1.0], [1.0]), 1.0)
        np.testing.assert_allclose(pts.ravel(), [-0.5, 0.5])
        assert bound == 0.5

    def test_square_step_half(self):
        pts, bound = uniform_grid(ParamDomain.hypercube([-1.0, -1.0], [1.0, 1.0]), 0.5)
        assert pts.shape == (16, 2)
        assert bound == pytest.approx(0.25 * np.sqrt(2))

    def test_bound_dominates_monte_carlo_hausdorff(self, rng):
        dom = ParamDomain.hypercube([-1.0, -0.5, -2.0], [1.5, 1.0, 0.3])
        pts, bound = uniform_grid(dom, 0.3)
        samples = rng.uniform(dom.lo, dom.hi, size=(10_000, 3))
        dist = np.sqrt(((samples[:, None, :] - pts[None, :, :]) ** 2).sum(-1)).min(axis=1)
        assert dist.max() <= bound
        assert dom.contains(pts).all()

    def test_points_distinct_and_inside(self):
        dom = ParamDomain.hypercube([-1.0, -3.0], [2.0, 0.5])
        pts, _ = uniform_grid(dom, 0.4)
        assert np.unique(pts, axis=0).shape[0] == pts.shape[0]
        assert dom.contains(pts).all()

    def test_bound_halves_with_step(self):
        dom = ParamDomain.hypercube([-1.0, -1.0], [1.0, 1.0])
        _, h1 = uniform_grid(dom, 0.5)
        _, h2 = uniform_grid(dom, 0.25)
        assert h2 == pytest.approx(h1 / 2)

    def test_unit_ball_points_inside(self, rng):
        dom = ParamDomain.unit_ball(3)
        pts, bound = uniform_grid(dom, 0.25)
        assert dom.contains(pts).all()
        g = rng.normal(size=(5000, 3))
        samples = g / np.linalg.norm(g, axis=1, keepdims=True) * rng.uniform(size=(5000, 1)) ** (1 / 3)
        dist = np.sqrt(((samples[:, None, :] - pts[None, :, :]) ** 2).sum(-1)).min(axis=1)
        assert dist.max() <= bound

    def test_size_cap(self):
        dom = ParamDomain.hypercube(-np.ones(3), np.ones(3))
        with pytest.raises(GridTooLargeError, match="M = 8000"):
            uniform_grid(dom, 0.1, n_rows=100, max_entries=10_000)

    def test_invalid_steps(self):
        dom = ParamDomain.hypercube([-1.0], [1.0])
        with pytest.raises(ValueError):
            uniform_grid(dom, 0.0)
        with pytest.raises(ValueError):
            uniform_grid(dom, 3.0)


class TestDesignMatrix:
    def test_constant_column(self):
        X = np.array([[0.3], [-2.0], [5.0]])
        np.testing.assert_array_equal(design_matrix([[0.0, 1.0]], X), np.ones((3, 1)))

    def test_inactive_entry(self):
        assert design_matrix([[1.0, -10.0]], [[1.0]])[0, 0] == 0.0

    def test_matches_forward_on_singletons(self, rng):
        X = rng.normal(size=(7, 2))
        P = rng.normal(size=(9, 3))
        A = design_matrix(P, X)
        for j, p in enumerate(P):
            unit = ShallowParams([1.0], [p[:-1]], [p[-1]])
            np.testing.assert_allclose(A[:, j], [forward(unit, x) for x in X], rtol=1e-14, atol=0)
        assert A.min() >= 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            design_matrix([[1.0, 0.0]], [[1.0, 2.0]])

    def test_text_dump(self, rng):
        data = Dataset(rng.normal(size=(3, 1)), np.zeros(3))
        grid = build_grid(ParamDomain.hypercube([-1.0, -1.0], [1.0, 1.0]), 1.0, data)
        rows = [list(map(float, line.split())) for line in grid.design_text().splitlines()]
        np.testing.assert_array_equal(np.array(rows), grid.design)


class TestBoundingDomain:
    def test_two_neurons(self):
        theta = ShallowParams.from_neurons([(1.0, [1.0], 2.0), (1.0, [-1.0], 0.0)])
        dom = bounding_domain(theta)
        np.testing.assert_allclose(dom.lo, [-1.0, -1e-3])
        np.testing.assert_allclose(dom.hi, [1.0, 2.0])

    def test_single_neuron_with_margin(self):
        theta = ShallowParams.from_neurons([(1.0, [3.0], 3.0)])
        dom = bounding_domain(theta, margin=1.0)
        np.testing.assert_allclose(dom.lo, [-1.0, -1.0])
        np.testing.assert_allclose(dom.hi, [4.0, 4.0])

    def test_contains_every_neuron(self, rng):
        theta = ShallowParams(rng.normal(size=20), rng.normal(size=(20, 3)), rng.normal(size=20))
        assert bounding_domain(theta, 0.1).contains(theta.inner).all()

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            bounding_domain(ShallowParams.empty(2))


class TestDatasetConstants:
    def test_origin(self):
        assert dataset_constants(Dataset([[0.0]], [1.0])) == 1.0

    def test_three_four(self):
        assert dataset_constants(Dataset([[3.0, 4.0]], [1.0])) == pytest.approx(np.sqrt(26))

    def test_matches_scan(self, rng):
        X = rng.normal(size=(30, 4))
        expected = min(np.sqrt(sum(v * v for v in x) + 1) for x in X)
        assert dataset_constants(Dataset(X, np.zeros(30))) == pytest.approx(expected, rel=1e-14)


class TestNestedGrids:
    def test_supersets_and_monotone_value(self, rng):
        X = np.linspace(-1, 1, 6)[:, None]
        data = Dataset(X, np.sin(3 * X.ravel()))
        dom = ParamDomain.hypercube([-1.0, -1.0], [1.0, 1.0])
        grids = nested_grids(dom, [0.5, 0.25, 0.125], data)
        for g1, g2 in zip(grids, grids[1:]):
            fine = {tuple(p) for p in g2.points}
            assert all(tuple(p) in fine for p in g1.points)
        vals = [solve_pd_eps(g, data.labels, 0.05).value for g in grids]
        assert all(v2 <= v1 + 1e-9 for v1, v2 in zip(vals, vals[1:]))

    def test_steps_must_decrease(self):
        dom = ParamDomain.hypercube([-1.0, -1.0], [1.0, 1.0])
        with pytest.raises(ValueError):
            nested_grids(dom, [0.25, 0.5], [[0.0]])


class TestStepForSize:
    def test_reaches_target(self):
        dom = ParamDomain.hypercube([-1.0, -0.5, -2.0], [1.0, 0.7, 0.2])
        for target in (10, 500, 2000):
            step = step_for_size(dom, target)
            assert grid_size(dom, step) >= target
            assert grid_size(dom, step * 1.01) < target or step == np.min(dom.hi - dom.lo)
