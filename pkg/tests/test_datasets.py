import numpy as np
import pytest

from worcs.datasets import (
    gaussian_mixture,
    line,
    load_bundled,
    load_csv,
    parse_synthetic_spec,
    resolve_dataset,
    uniform_cube,
)


class TestLoaders:
    def test_csv_round_trip(self, tmp_path):
        path = tmp_path / "pts.csv"
        path.write_text("id,f0,f1\na,0.0,0.0\nb,3.0,4.0\n")
        ds = load_csv(path)
        assert ds.ids == ["a", "b"]
        assert ds.dist(0, 1) == pytest.approx(5.0)

    def test_csv_with_label_column(self, tmp_path):
        path = tmp_path / "pts.csv"
        path.write_text("id,label,f0\na,red,0.0\nb,blue,2.0\n")
        ds = load_csv(path)
        assert ds.labels == ["red", "blue"]
        assert ds.features.shape == (2, 1)
        assert ds.dist(0, 1) == pytest.approx(2.0)

    def test_csv_requires_id(self, tmp_path):
        path = tmp_path / "pts.csv"
        path.write_text("f0,f1\n0.0,0.0\n")
        with pytest.raises(ValueError, match="id"):
            load_csv(path)

    def test_manhattan_metric(self, tmp_path):
        path = tmp_path / "pts.csv"
        path.write_text("id,f0,f1\na,0.0,0.0\nb,3.0,4.0\n")
        ds = load_csv(path, metric="manhattan")
        assert ds.dist(0, 1) == pytest.approx(7.0)

    def test_standardize(self, tmp_path):
        path = tmp_path / "pts.csv"
        path.write_text("id,f0\na,0.0\nb,10.0\nc,20.0\n")
        ds = load_csv(path, standardize=True)
        assert ds.features.mean() == pytest.approx(0.0, abs=1e-12)
        assert ds.features.std() == pytest.approx(1.0)


class TestBundled:
    def test_iris_shape(self):
        ds = load_bundled("iris")
        assert ds.n == 150
        assert ds.features.shape == (150, 4)
        assert ds.metric == "euclidean"
        assert ds.labels is not None

    def test_wine_shape_and_standardization(self):
        ds = load_bundled("wine")
        assert ds.n == 178
        assert ds.features.shape == (178, 13)
        np.testing.assert_allclose(ds.features.mean(axis=0), 0.0, atol=1e-9)

    def test_iris_metric_axioms(self):
        load_bundled("iris").check_metric_axioms(samples=10000)

    def test_wine_metric_axioms(self):
        load_bundled("wine").check_metric_axioms(samples=10000)

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            load_bundled("mnist")


class TestGenerators:
    def test_uniform_cube(self):
        ds = uniform_cube(dim=3, n=50, seed=0)
        assert ds.n == 50
        assert ds.features.shape == (50, 3)
        assert ds.features.min() >= 0 and ds.features.max() <= 1

    def test_gaussian_mixture(self):
        ds = gaussian_mixture(k=3, dim=2, n=40, seed=1)
        assert ds.n == 40
        assert set(ds.labels) <= {"0", "1", "2"}

    def test_line_is_equispaced(self):
        ds = line(5)
        assert ds.dist(0, 4) == 4.0
        assert ds.dist(1, 2) == 1.0

    def test_generators_deterministic(self):
        a = uniform_cube(2, 20, seed=5)
        b = uniform_cube(2, 20, seed=5)
        np.testing.assert_array_equal(a.features, b.features)


class TestSpecParsing:
    def test_spec_string(self):
        ds = parse_synthetic_spec("uniform-cube(dim=2,n=10,seed=3)")
        assert ds.n == 10

    def test_non_spec_returns_none(self):
        assert parse_synthetic_spec("iris") is None
        assert parse_synthetic_spec("some/path.csv") is None

    def test_unknown_generator(self):
        with pytest.raises(ValueError, match="unknown generator"):
            parse_synthetic_spec("torus(n=5)")

    def test_resolve_bundled_and_spec(self):
        assert resolve_dataset("iris").n == 150
        assert resolve_dataset("line(n=8)").n == 8

    def test_resolve_env_search_path(self, tmp_path, monkeypatch):
        (tmp_path / "mini.csv").write_text("id,f0\na,0.0\nb,1.0\n")
        monkeypatch.setenv("WORCS_DATA_DIR", str(tmp_path))
        assert resolve_dataset("mini.csv").n == 2

    def test_resolve_missing(self):
        with pytest.raises(FileNotFoundError):
            resolve_dataset("nope.csv")
