import numpy as np
import pytest

from sparseshallow.io import load_dataset, load_model, model_from_dict, save_dataset, save_model
from sparseshallow.model import Activation, Dataset, ParamDomain, ShallowParams


class TestModelIO:
    def test_round_trip_exact(self, tmp_path, rng):
        dom = ParamDomain.hypercube([-2.0, -1.0, -3.0], [1.0, 2.0, 3.0])
        theta = ShallowParams(rng.normal(size=5), rng.normal(size=(5, 2)) / 10, rng.normal(size=5) / 10, dom)
        act = Activation(lipschitz=2.5)
        save_model(tmp_path / "m.json", theta, act)
        back, act2 = load_model(tmp_path / "m.json")
        np.testing.assert_array_equal(back.omega, theta.omega)
        np.testing.assert_array_equal(back.a, theta.a)
        np.testing.assert_array_equal(back.b, theta.b)
        np.testing.assert_array_equal(back.domain.lo, dom.lo)
        assert act2 == act

    def test_empty_and_ball(self, tmp_path):
        theta = ShallowParams(np.zeros(0), np.zeros((0, 3)), np.zeros(0), ParamDomain.unit_ball(4))
        save_model(tmp_path / "e.json", theta)
        back, _ = load_model(tmp_path / "e.json")
        assert back.size == 0 and back.dim == 3
        assert back.domain.kind == "unit-ball" and back.domain.dim == 4

    def test_missing_field(self):
        with pytest.raises(ValueError, match="omega"):
            model_from_dict({"a": [], "b": []})


class TestDatasetIO:
    def test_round_trip_exact(self, tmp_path, rng):
        data = Dataset(rng.normal(size=(7, 3)), rng.normal(size=7))
        save_dataset(tmp_path / "d.csv", data)
        back = load_dataset(tmp_path / "d.csv")
        np.testing.assert_array_equal(back.features, data.features)
        np.testing.assert_array_equal(back.labels, data.labels)

    def test_other_delimiters(self, tmp_path):
        (tmp_path / "t.tsv").write_text("x1\tx2\ty\n1\t2\t3\n4\t5\t6\n")
        data = load_dataset(tmp_path / "t.tsv")
        np.testing.assert_array_equal(data.features, [[1, 2], [4, 5]])
        (tmp_path / "s.csv").write_text("x1;y\n1;2\n")
        assert load_dataset(tmp_path / "s.csv", delimiter=";").labels[0] == 2.0

    def test_bad_header(self, tmp_path):
        (tmp_path / "b.csv").write_text("a,b\n1,2\n")
        with pytest.raises(ValueError, match="header"):
            load_dataset(tmp_path / "b.csv")

    def test_duplicate_rows_rejected(self, tmp_path):
        (tmp_path / "dup.csv").write_text("x1,y\n1,2\n1,3\n")
        with pytest.raises(ValueError, match="distinct"):
            load_dataset(tmp_path / "dup.csv")
