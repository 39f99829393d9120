"""分量几何, 间距证明, 数据集构造与文件读写"""

import math

import numpy as np
import pandas as pd
import pytest

from src.getain.common.exceptions import CertificationError, ConfigError, ContractError, DimensionError
from src.getain.common.settings import DATASET_CSV
from src.getain.datasets import (
    ComponentSpec,
    build_dataset,
    certify_separation,
    check_weights,
    component_distance,
    component_from_section,
    distance_to_support,
    distances_to_support,
    mle_mixture_weights,
    read_dataset,
    write_dataset,
)


def _se(p: float, n: int) -> float:
    return math.sqrt(p * (1 - p) / n)


class TestComponentDistance:
    def test_two_disks(self, blob_specs):
        assert component_distance(*blob_specs) == pytest.approx(4.0, abs=1e-12)

    def test_box_and_disk(self):
        box = ComponentSpec.box((0.0, 0.0), (1.0, 1.0))
        disk = ComponentSpec.disk((4.0, 0.0), 1.0)
        assert component_distance(box, disk) == pytest.approx(2.0, abs=1e-12)

    def test_half_annulus_and_disk(self):
        arc = ComponentSpec.annulus_arc((0.0, 0.0), 0.5, 1.0, 0.0, math.pi)
        disk = ComponentSpec.disk((0.0, -3.0), 1.0)
        assert component_distance(arc, disk) == pytest.approx(math.sqrt(9.25) - 1.0, abs=1e-9)

    def test_concentric_rings(self):
        inner = ComponentSpec.annulus_arc((0.0, 0.0), 0.5, 1.0)
        outer = ComponentSpec.annulus_arc((0.0, 0.0), 2.0, 2.5)
        assert component_distance(inner, outer) == pytest.approx(1.0, abs=1e-12)

    def test_box_inside_ring_hole(self):
        ring = ComponentSpec.annulus_arc((0.0, 0.0), 2.0, 3.0)
        box = ComponentSpec.box((0.0, 0.0), (0.5, 0.5))
        assert component_distance(ring, box) == pytest.approx(2.0 - math.sqrt(0.5), abs=1e-9)

    def test_nested_components_touch(self):
        big = ComponentSpec.disk((0.0, 0.0), 3.0)
        small = ComponentSpec.box((0.0, 0.0), (0.5, 0.5))
        assert component_distance(big, small) == 0.0

    def test_invalid_geometry(self):
        with pytest.raises(ContractError):
            ComponentSpec.disk((0.0, 0.0), -1.0)
        with pytest.raises(ContractError):
            ComponentSpec.annulus_arc((0.0, 0.0), 2.0, 1.0)


class TestPointDistance:
    def test_two_blob_support(self, two_blobs):
        assert distance_to_support((-3.0, 0.0), two_blobs) == (0.0, 0)
        assert distance_to_support((3.5, 0.0), two_blobs) == (0.0, 1)
        dist, nearest = distance_to_support((0.0, 0.0), two_blobs)
        assert dist == pytest.approx(2.0)
        assert nearest == 0

    @staticmethod
    def _inside_arc(pts, inner, outer, start, span):
        rho = np.linalg.norm(pts, axis=1)
        phi = np.mod(np.arctan2(pts[:, 1], pts[:, 0]) - start, 2 * math.pi)
        return (rho >= inner) & (rho <= outer) & (phi <= span)

    @pytest.mark.parametrize("seed", range(3))
    def test_against_dense_grid(self, seed):
        """闭式距离与区域内网格点最近距离之差不超过两个网格步长"""
        step = 0.01
        arc = ComponentSpec.annulus_arc((0.0, 0.0), 1.0, 2.0, math.pi / 4, math.pi)
        box = ComponentSpec.box((0.0, 0.0), (1.0, 0.5))
        xs = np.arange(-2.5, 2.5 + step, step)
        grid = np.array(np.meshgrid(xs, xs)).reshape(2, -1).T

        arc_grid = grid[self._inside_arc(grid, 1.0, 2.0, math.pi / 4, math.pi)]
        box_grid = grid[(np.abs(grid[:, 0]) <= 1.0) & (np.abs(grid[:, 1]) <= 0.5)]

        queries = np.random.default_rng(seed).uniform(-4.0, 4.0, size=(40, 2))
        for comp, pts in ((arc, arc_grid), (box, box_grid)):
            brute = np.min(np.linalg.norm(queries[:, None, :] - pts[None, :, :], axis=2), axis=1)
            exact = comp.distances(queries)
            assert np.all(brute >= exact - 1e-9)
            assert np.all(brute - exact <= 2 * step)

    def test_batch_shape_checked(self, two_blobs):
        with pytest.raises(DimensionError):
            distances_to_support(np.zeros((3, 3)), two_blobs)


class TestCertification:
    def test_overlap_names_pair(self):
        specs = [
            ComponentSpec.disk((0.0, 0.0), 1.0),
            ComponentSpec.disk((5.0, 0.0), 1.0),
            ComponentSpec.disk((0.5, 0.0), 1.0),
        ]
        with pytest.raises(CertificationError) as info:
            certify_separation(specs)
        assert info.value.pair == (0, 2)

    def test_matrix_is_symmetric(self, blob_specs):
        d, dist = certify_separation(blob_specs)
        assert d == pytest.approx(4.0)
        np.testing.assert_array_equal(dist, dist.T)


class TestBuildDataset:
    def test_points_lie_in_their_components(self, two_blobs):
        assert two_blobs.K == 2 and two_blobs.n == 1000
        for k, comp in enumerate(two_blobs.components):
            assert np.all(comp.contains(two_blobs.class_points(k)))
        assert two_blobs.oos_threshold == pytest.approx(1.0)

    def test_read_only(self, two_blobs):
        with pytest.raises(ValueError):
            two_blobs.points[0, 0] = 0.0

    def test_seeded(self, blob_specs):
        a = build_dataset(blob_specs, [0.5, 0.5], 200, seed=4)
        b = build_dataset(blob_specs, [0.5, 0.5], 200, seed=4)
        np.testing.assert_array_equal(a.points, b.points)
        np.testing.assert_array_equal(a.labels, b.labels)

    def test_ten_blobs_label_frequencies(self):
        specs = [ComponentSpec.disk((4.0 * k, 0.0), 1.0) for k in range(10)]
        ds = build_dataset(specs, [0.1] * 10, 10_000, seed=0)
        freq = np.bincount(ds.labels, minlength=10) / ds.n
        assert np.all(np.abs(freq - 0.1) < 4 * _se(0.1, ds.n))

    def test_weights_validated(self, blob_specs):
        with pytest.raises(ContractError):
            build_dataset(blob_specs, [0.6, 0.6], 100, seed=0)
        with pytest.raises(DimensionError):
            check_weights([1.0], K=2)

    def test_overlapping_components_rejected(self):
        specs = [ComponentSpec.disk((0.0, 0.0), 1.0), ComponentSpec.disk((1.0, 0.0), 1.0)]
        with pytest.raises(CertificationError):
            build_dataset(specs, [0.5, 0.5], 100, seed=0)


class TestMixtureWeights:
    def test_examples(self):
        np.testing.assert_allclose(mle_mixture_weights([0, 0, 1, 1], 2), [0.5, 0.5])
        np.testing.assert_allclose(mle_mixture_weights([0, 0, 0, 1], 2), [0.75, 0.25])

    def test_recovers_true_weights(self):
        pi = np.array([0.6, 0.3, 0.1])
        n = 10_000
        labels = np.random.default_rng(0).choice(3, size=n, p=pi)
        est = mle_mixture_weights(labels, 3)
        for p, e in zip(pi, est):
            assert abs(e - p) < 4 * _se(p, n)

    def test_empty_labels(self):
        with pytest.raises(ContractError):
            mle_mixture_weights([], 2)


class TestDatasetFiles:
    def test_write_then_read(self, two_blobs, tmp_path):
        csv_path, meta_path = write_dataset(two_blobs, tmp_path)
        assert csv_path.read_text().splitlines()[0] == "x0,x1,label"
        assert "separation" in meta_path.read_text()
        loaded = read_dataset(tmp_path)
        np.testing.assert_array_equal(loaded.points, two_blobs.points)
        np.testing.assert_array_equal(loaded.labels, two_blobs.labels)
        assert loaded.separation == pytest.approx(two_blobs.separation)
        assert loaded.components == two_blobs.components

    def test_tampered_point_is_rejected(self, two_blobs, tmp_path):
        write_dataset(two_blobs, tmp_path)
        frame = pd.read_csv(tmp_path / DATASET_CSV)
        frame.loc[0, ["x0", "x1"]] = [0.0, 0.0]
        frame.to_csv(tmp_path / DATASET_CSV, index=False)
        with pytest.raises(ContractError):
            read_dataset(tmp_path)

    def test_missing_files(self, tmp_path):
        with pytest.raises(ContractError):
            read_dataset(tmp_path)

    def test_component_section(self):
        comp = component_from_section({"kind": "box", "center": "1, 2", "half_widths": "0.5, 0.25"})
        assert comp == ComponentSpec.box((1.0, 2.0), (0.5, 0.25))
        with pytest.raises(ConfigError):
            component_from_section({"kind": "disk", "center": "0, 0"})
