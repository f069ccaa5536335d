import numpy as np
import pytest

from sparseshallow.model import Activation, Dataset, ParamDomain, ShallowParams
from sparseshallow.sgdtrain import (
    TrainConfig,
    TrainingDiverged,
    gradients,
    init_params,
    objective,
    train,
    train_with_log,
)


def _data(rng, n=12, d=2):
    return Dataset(rng.normal(size=(n, d)), rng.normal(size=n))


class TestGradients:
    @pytest.mark.parametrize("lam,fidelity", [(0.0, "square"), (0.0, "abs"), (2.0, "square"), (0.5, "abs")])
    def test_finite_differences(self, rng, lam, fidelity):
        data = _data(rng)
        omega, a, b = init_params(2, 7, rng)
        omega = omega * 7  # keep weights away from zero
        X, y = data.features, data.labels
        g = gradients(omega, a, b, X, y, lam, fidelity)

        def f(o, aa, bb):
            return objective(ShallowParams(o, aa, bb), data, lam, fidelity)[0]

        h = 1e-6
        for k, p in enumerate([omega, a, b]):
            num = np.zeros_like(p)
            for idx in np.ndindex(p.shape):
                args_p = [omega.copy(), a.copy(), b.copy()]
                args_m = [omega.copy(), a.copy(), b.copy()]
                args_p[k][idx] += h
                args_m[k][idx] -= h
                num[idx] = (f(*args_p) - f(*args_m)) / (2 * h)
            np.testing.assert_allclose(g[k], num, rtol=1e-5, atol=1e-6)

    def test_objective_parts(self):
        theta = ShallowParams([2.0, -1.0], [[1.0], [1.0]], [0.0, 0.0])
        data = Dataset([[1.0], [2.0]], [0.0, 0.0])
        # f = x, residuals 1 and 2
        assert objective(theta, data, 0.0, "square") == (2.5, 2.5, 3.0)
        assert objective(theta, data, 4.0, "abs") == (3.0 + 4.0 * 1.5, 1.5, 3.0)


class TestInit:
    def test_ranges(self, rng):
        omega, a, b = init_params(3, 50, rng)
        assert np.abs(omega).max() <= 1 / 50
        assert np.abs(a).max() <= 1 and np.abs(b).max() <= 1

    def test_ball(self, rng):
        _, a, b = init_params(2, 200, rng, ParamDomain.unit_ball(3))
        assert np.linalg.norm(np.column_stack([a, b]), axis=1).max() <= 1


class TestTraining:
    def test_deterministic(self, rng):
        data = _data(rng)
        cfg = TrainConfig(epochs=5, seed=3, batch_size=4)
        t1, t2 = train(data, cfg), train(data, cfg)
        np.testing.assert_array_equal(t1.omega, t2.omega)
        np.testing.assert_array_equal(t1.a, t2.a)

    def test_default_width(self, rng):
        data = _data(rng, n=5)
        assert train(data, TrainConfig(epochs=1)).size == 10

    def test_overfits_one_sample(self):
        data = Dataset([[0.5, -0.5]], [2.0])
        theta, log = train_with_log(data, TrainConfig(epochs=400, learning_rate=0.05, neuron_count=20))
        assert log.objective[-1] < 1e-6

    def test_full_batch_descent_monotone(self, rng):
        data = _data(rng, n=10)
        cfg = TrainConfig(epochs=200, learning_rate=1e-2, batch_size=10, neuron_count=20)
        _, log = train_with_log(data, cfg)
        assert np.all(np.diff(log.objective) <= 1e-12)

    def test_adam_reduces(self, rng):
        data = _data(rng, n=20)
        _, log = train_with_log(data, TrainConfig(epochs=300, learning_rate=1e-2, adam=True))
        assert log.objective[-1] < 0.5 * log.objective[0]

    def test_regularized_run(self, rng):
        data = _data(rng, n=10)
        _, log = train_with_log(data, TrainConfig(epochs=50, lam=10.0, fidelity="abs", learning_rate=1e-3))
        obj, fid, l1 = log.rows[-1][1:]
        assert obj == pytest.approx(l1 + 10.0 * fid)

    def test_clip_keeps_domain(self, rng):
        data = _data(rng)
        dom = ParamDomain.hypercube([-0.5] * 3, [0.5] * 3)
        theta = train(data, TrainConfig(epochs=30, learning_rate=0.1, domain=dom, clip=True))
        assert dom.contains(theta.inner, tol=0).all()

    def test_divergence(self, rng):
        data = Dataset(rng.normal(size=(10, 2)) * 10, rng.normal(size=10) * 10)
        with pytest.raises(TrainingDiverged) as err:
            train(data, TrainConfig(epochs=50, learning_rate=10.0, batch_size=10))
        assert err.value.diagnostics["learning_rate"] == 10.0

    def test_log_text(self, rng):
        _, log = train_with_log(_data(rng), TrainConfig(epochs=4), log_every=2)
        lines = log.to_text().splitlines()
        assert lines[0] == "epoch,objective,fidelity,l1"
        assert [int(l.split(",")[0]) for l in lines[1:]] == [2, 4]

    def test_dimension_checks(self, rng):
        with pytest.raises(ValueError):
            train(_data(rng), TrainConfig(epochs=1, domain=ParamDomain.unit_ball(2)))


class TestConfig:
    @pytest.mark.parametrize(
        "kw",
        [
            {"neuron_count": 0},
            {"epochs": 0},
            {"learning_rate": 0.0},
            {"batch_size": 0},
            {"lam": -1.0},
            {"fidelity": "huber"},
            {"clip": True},
        ],
    )
    def test_rejects(self, kw):
        with pytest.raises(ValueError):
            TrainConfig(**kw)
