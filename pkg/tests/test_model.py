import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparseshallow.model import (
    RELU,
    Activation,
    Dataset,
    ParamDomain,
    ShallowParams,
    accuracy,
    active_count,
    forward,
    l1_norm,
    predict,
    residual_r,
)


def _random_theta(rng, P, d):
    return ShallowParams(rng.normal(size=P), rng.normal(size=(P, d)), rng.normal(size=P))


class TestForward:
    def test_empty_network_is_zero(self):
        assert forward(ShallowParams.empty(2), [0.5, -1.0]) == 0.0

    def test_single_neuron(self):
        theta = ShallowParams.from_neurons([(2.0, [1.0], 0.0)])
        assert forward(theta, [3.0]) == 6.0

    def test_cancellation(self):
        theta = ShallowParams.from_neurons([(1.0, [1.0], -2.0), (-1.0, [1.0], -2.0)])
        assert forward(theta, [5.0]) == 0.0

    def test_dimension_mismatch(self):
        theta = ShallowParams.from_neurons([(1.0, [1.0, 2.0], 0.0)])
        with pytest.raises(ValueError):
            forward(theta, [1.0])

    def test_predict_matches_loop(self, rng):
        theta = _random_theta(rng, 7, 3)
        X = rng.normal(size=(11, 3))
        expected = [sum(w * max(a @ x + b, 0.0) for w, a, b in theta.neurons) for x in X]
        np.testing.assert_allclose(predict(theta, X), expected, rtol=1e-12, atol=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**31 - 1), st.floats(1e-3, 1e3))
    def test_positive_homogeneity(self, seed, k):
        rng = np.random.default_rng(seed)
        theta = _random_theta(rng, 5, 2)
        scaled = ShallowParams(theta.omega / k, k * theta.a, k * theta.b)
        X = rng.normal(size=(6, 2))
        np.testing.assert_allclose(predict(scaled, X), predict(theta, X), rtol=1e-10, atol=1e-10)


class TestNorms:
    def test_l1_and_active(self):
        theta = ShallowParams.from_neurons([(2.0, [0.0], 0.0), (-3.0, [1.0], 1.0)])
        assert l1_norm(theta) == 5.0
        assert active_count(theta) == 2

    def test_empty(self):
        theta = ShallowParams.empty(1)
        assert l1_norm(theta) == 0.0
        assert active_count(theta) == 0

    def test_below_tolerance(self):
        theta = ShallowParams.from_neurons([(1e-15, [1.0], 0.0)])
        assert l1_norm(theta) == 1e-15
        assert active_count(theta) == 0

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_l1_permutation_invariant(self, seed):
        rng = np.random.default_rng(seed)
        theta = _random_theta(rng, 9, 2)
        perm = rng.permutation(9)
        assert l1_norm(theta.select(perm)) == pytest.approx(l1_norm(theta), rel=1e-15)


class TestAccuracy:
    def test_exact_representation_scores_one(self):
        theta = ShallowParams.from_neurons([(1.0, [1.0], 0.0)])
        data = Dataset([[1.0], [2.0]], [1.0, 2.0])
        assert accuracy(theta, data) == 1.0

    def test_empty_network_with_unit_labels(self):
        data = Dataset([[0.0], [1.0]], [1.0, 1.0])
        assert accuracy(ShallowParams.empty(1), data) == 0.0

    def test_one_hit(self):
        data = Dataset([[0.0], [1.0]], [0.2, 0.9])
        assert accuracy(ShallowParams.empty(1), data) == 0.5

    def test_empty_dataset_rejected(self):
        data = Dataset(np.zeros((0, 1)), np.zeros(0))
        with pytest.raises(ValueError):
            accuracy(ShallowParams.empty(1), data)


class TestResidual:
    def test_interpolating_zero_distance(self):
        theta = ShallowParams.from_neurons([(1.0, [1.0], 0.0)])
        data = Dataset([[1.0], [3.0]], [1.0, 3.0])
        assert tuple(residual_r(theta, data, 0.0)) == (0.0, 0.0, 0.0)

    def test_direct_substitution(self):
        theta = ShallowParams.from_neurons([(1.0, [1.0], 0.0)])
        data = Dataset([[1.0]], [1.0])
        bias, dev, total = residual_r(theta, data, 0.5)
        assert bias == 0.0
        assert dev == 0.5
        assert total == 0.5

    def test_matches_recomputation(self, rng):
        for _ in range(10):
            theta = _random_theta(rng, 6, 3)
            data = Dataset(rng.normal(size=(8, 3)), rng.normal(size=8))
            dkr = float(rng.uniform(0, 2))
            res = residual_r(theta, data, dkr)
            bias = np.mean([abs(forward(theta, x) - y) for x, y in zip(data.features, data.labels)])
            dev = dkr * sum(abs(w) * np.linalg.norm(a) for w, a, _ in theta.neurons)
            assert res.bias == pytest.approx(bias, rel=1e-12)
            assert res.deviation == pytest.approx(dev, rel=1e-12)
            assert res.total == pytest.approx(bias + dev, rel=1e-12)
            assert min(res) >= 0.0

    def test_negative_distance_rejected(self):
        with pytest.raises(ValueError):
            residual_r(ShallowParams.empty(1), Dataset([[0.0]], [0.0]), -1.0)


class TestDomainTypes:
    def test_dataset_rejects_duplicates(self):
        with pytest.raises(ValueError, match="distinct"):
            Dataset([[1.0, 2.0], [1.0, 2.0]], [0.0, 1.0])

    def test_dataset_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            Dataset([[np.nan]], [0.0])

    def test_hypercube_needs_origin_inside(self):
        with pytest.raises(ValueError):
            ParamDomain.hypercube([0.0, -1.0], [1.0, 1.0])

    def test_domain_membership_slack(self):
        dom = ParamDomain.hypercube([-1.0, -1.0], [1.0, 1.0])
        assert dom.contains([[1.0 + 5e-10, 0.0]])[0]
        assert not dom.contains([[1.0 + 1e-6, 0.0]])[0]
        ball = ParamDomain.unit_ball(2)
        assert ball.contains([[0.6, 0.8]])[0]
        assert not ball.contains([[0.8, 0.8]])[0]

    def test_params_outside_domain_rejected(self):
        dom = ParamDomain.hypercube([-1.0, -1.0], [1.0, 1.0])
        with pytest.raises(ValueError, match="outside"):
            ShallowParams([1.0], [[2.0]], [0.0], dom)

    def test_relu_sign_conditions(self, rng):
        z = rng.normal(size=1000)
        out = RELU(z)
        assert np.all(out[z <= 0] == 0.0)
        assert np.all(out[z > 0] > 0.0)

    def test_unknown_activation(self):
        with pytest.raises(ValueError):
            Activation("tanh")

    def test_immutable(self):
        theta = ShallowParams.from_neurons([(1.0, [1.0], 0.0)])
        with pytest.raises(ValueError):
            theta.omega[0] = 2.0
