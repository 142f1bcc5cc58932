import numpy as np
import pytest

from accesskit.errors import KTooLarge, NotRowStandardized, ZeroVariance
from accesskit.spatial_stats import (
    SpatialWeights,
    build_weights,
    lisa,
    lisa_csv_text,
    moran_json_dict,
    morans_i,
)

from helpers import oracle_moran

UNIT_SQUARE = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
CHECKERBOARD = [1.0, 0.0, 0.0, 1.0]  # diagonal pairs equal


def rook_weights():
    # knn k=2 on the unit square corners is exactly rook contiguity
    return build_weights(UNIT_SQUARE, k=2, coord_kind="planar")


class TestBuildWeights:
    def test_knn_on_collinear_points(self):
        w = build_weights([(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)], k=1, coord_kind="planar")
        assert w.neighbor_indices == ((1,), (0,), (1,))

    def test_knn_tie_breaks_toward_smaller_index(self):
        # unit 2 is equidistant from 0 and 1
        w = build_weights([(0.0, 0.0), (2.0, 0.0), (1.0, 0.0)], k=1, coord_kind="planar")
        assert w.neighbor_indices[2] == (0,)

    def test_k_too_large(self):
        with pytest.raises(KTooLarge):
            build_weights(UNIT_SQUARE, k=4, coord_kind="planar")
        with pytest.raises(KTooLarge):
            build_weights(UNIT_SQUARE, k=0, coord_kind="planar")

    def test_row_standardized_rows_sum_to_one(self):
        rng = np.random.default_rng(51)
        pts = rng.uniform(0, 100, size=(20, 2))
        w = build_weights(pts, k=5, coord_kind="planar")
        assert w.row_standardized
        for wts in w.neighbor_weights:
            assert sum(wts) == pytest.approx(1.0, abs=1e-12)

    def test_distance_band_and_isolated_units(self):
        # meters apart; band given in km. third point is isolated
        pts = [(0.0, 0.0), (500.0, 0.0), (10_000.0, 0.0)]
        w = build_weights(pts, band=1.0, coord_kind="planar")
        assert w.neighbor_indices[0] == (1,)
        assert w.neighbor_indices[2] == ()
        assert w.isolated == (2,)

    def test_no_self_neighbors(self):
        rng = np.random.default_rng(52)
        pts = rng.uniform(0, 10, size=(15, 2))
        w = build_weights(pts, k=4, coord_kind="planar")
        for i, idx in enumerate(w.neighbor_indices):
            assert i not in idx

    def test_geographic_metric(self):
        pts = [(0.0, 0.0), (0.0, 0.5), (0.0, 80.0)]
        w = build_weights(pts, band=100.0, coord_kind="geographic")
        assert w.neighbor_indices[0] == (1,)

    def test_to_dense_matches_lists(self):
        w = rook_weights()
        dense = w.to_dense()
        assert dense.shape == (4, 4)
        assert dense[0, 1] == 0.5 and dense[0, 2] == 0.5 and dense[0, 3] == 0.0


class TestMoran:
    def test_checkerboard_is_exactly_minus_one(self):
        result = morans_i(CHECKERBOARD, rook_weights(), n_permutations=99, seed=1)
        assert result.i == -1.0

    def test_expected_value_closed_form(self):
        result = morans_i(CHECKERBOARD, rook_weights(), n_permutations=99, seed=1)
        assert result.expected_i == -1.0 / 3.0

    def test_constant_values_raise(self):
        with pytest.raises(ZeroVariance):
            morans_i([2.0, 2.0, 2.0, 2.0], rook_weights(), n_permutations=9, seed=1)

    def test_requires_row_standardized(self):
        raw = build_weights(UNIT_SQUARE, k=2, coord_kind="planar", row_standardize=False)
        with pytest.raises(NotRowStandardized):
            morans_i(CHECKERBOARD, raw, n_permutations=9, seed=1)

    def test_matches_textbook_double_loop(self):
        rng = np.random.default_rng(53)
        for _ in range(10):
            n = int(rng.integers(5, 25))
            pts = rng.uniform(0, 100, size=(n, 2))
            values = rng.normal(size=n)
            w = build_weights(pts, k=min(4, n - 1), coord_kind="planar")
            result = morans_i(values, w, n_permutations=9, seed=0)
            assert result.i == pytest.approx(oracle_moran(values, w.to_dense()), rel=1e-12)

    def test_permutation_mean_near_expectation(self):
        rng = np.random.default_rng(54)
        pts = rng.uniform(0, 100, size=(30, 2))
        values = rng.normal(size=30)
        w = build_weights(pts, k=4, coord_kind="planar")
        result = morans_i(values, w, n_permutations=999, seed=7)
        se = result.sim.std(ddof=1) / np.sqrt(result.sim.size)
        assert abs(result.sim.mean() - result.expected_i) < 3 * se

    def test_p_value_definition_and_range(self):
        rng = np.random.default_rng(55)
        pts = rng.uniform(0, 100, size=(12, 2))
        values = rng.normal(size=12)
        w = build_weights(pts, k=3, coord_kind="planar")
        result = morans_i(values, w, n_permutations=99, seed=3)
        count = np.count_nonzero(
            np.abs(result.sim - result.expected_i) >= abs(result.i - result.expected_i))
        assert result.p_value == (count + 1) / 100
        assert 1 / 100 <= result.p_value <= 1.0

    def test_same_seed_reproduces(self):
        rng = np.random.default_rng(56)
        pts = rng.uniform(0, 100, size=(10, 2))
        values = rng.normal(size=10)
        w = build_weights(pts, k=3, coord_kind="planar")
        a = morans_i(values, w, n_permutations=199, seed=9)
        b = morans_i(values, w, n_permutations=199, seed=9)
        assert a.p_value == b.p_value and (a.sim == b.sim).all()

    def test_thread_count_does_not_change_results(self):
        rng = np.random.default_rng(57)
        pts = rng.uniform(0, 100, size=(25, 2))
        values = rng.normal(size=25)
        w = build_weights(pts, k=4, coord_kind="planar")
        base = morans_i(values, w, n_permutations=199, seed=42, threads=1)
        for threads in (2, 8):
            other = morans_i(values, w, n_permutations=199, seed=42, threads=threads)
            assert other.p_value == base.p_value
            assert (other.sim == base.sim).all()

    def test_affine_invariance(self):
        rng = np.random.default_rng(58)
        pts = rng.uniform(0, 100, size=(15, 2))
        values = rng.normal(size=15)
        w = build_weights(pts, k=4, coord_kind="planar")
        base = morans_i(values, w, n_permutations=9, seed=1)
        shifted = morans_i(3.5 * values + 11.0, w, n_permutations=9, seed=1)
        flipped = morans_i(-2.0 * values + 4.0, w, n_permutations=9, seed=1)
        assert shifted.i == pytest.approx(base.i, rel=1e-9)
        assert flipped.i == pytest.approx(base.i, rel=1e-9)


class TestLisa:
    def test_checkerboard_locals_and_quadrants(self):
        result = lisa(CHECKERBOARD, rook_weights(), n_permutations=99, seed=1)
        assert np.allclose(result.local_i, -1.0, rtol=0, atol=0)
        assert result.quadrant == ("HL", "LH", "LH", "HL")

    def test_sum_identity(self):
        rng = np.random.default_rng(59)
        for _ in range(10):
            n = int(rng.integers(5, 30))
            pts = rng.uniform(0, 100, size=(n, 2))
            values = rng.normal(size=n)
            w = build_weights(pts, k=min(4, n - 1), coord_kind="planar")
            local = lisa(values, w, n_permutations=9, seed=0).local_i
            global_i = morans_i(values, w, n_permutations=9, seed=0).i
            assert local.sum() == pytest.approx(n * global_i, rel=1e-9)

    def test_affine_invariance_and_quadrant_flip(self):
        rng = np.random.default_rng(60)
        pts = rng.uniform(0, 100, size=(12, 2))
        values = rng.normal(size=12)
        w = build_weights(pts, k=3, coord_kind="planar")
        base = lisa(values, w, n_permutations=9, seed=1)
        scaled = lisa(2.0 * values + 5.0, w, n_permutations=9, seed=1)
        assert np.allclose(scaled.local_i, base.local_i, rtol=1e-9)
        assert scaled.quadrant == base.quadrant
        flipped = lisa(-1.0 * values, w, n_permutations=9, seed=1)
        swap = {"H": "L", "L": "H"}
        assert flipped.quadrant == tuple(
            swap[q[0]] + swap[q[1]] for q in base.quadrant)
        assert np.allclose(flipped.local_i, base.local_i, rtol=1e-9)

    def test_isolated_unit_rule(self):
        # unit 2 has an empty row: local value 0, lag 0 classified as low
        weights = SpatialWeights(
            n=3,
            neighbor_indices=((1,), (0,), ()),
            neighbor_weights=((1.0,), (1.0,), ()),
            row_standardized=True,
            isolated=(2,),
        )
        result = lisa([5.0, 1.0, 9.0], weights, n_permutations=99, seed=2)
        assert result.local_i[2] == 0.0
        assert result.quadrant[2] == "HL"
        assert result.p_value[2] == 1.0

    def test_p_values_within_bounds(self):
        rng = np.random.default_rng(61)
        pts = rng.uniform(0, 100, size=(20, 2))
        values = rng.normal(size=20)
        w = build_weights(pts, k=4, coord_kind="planar")
        result = lisa(values, w, n_permutations=99, seed=5)
        assert (result.p_value >= 1 / 100).all()
        assert (result.p_value <= 1.0).all()

    def test_thread_count_does_not_change_results(self):
        rng = np.random.default_rng(62)
        pts = rng.uniform(0, 100, size=(30, 2))
        values = rng.normal(size=30)
        w = build_weights(pts, k=5, coord_kind="planar")
        base = lisa(values, w, n_permutations=199, seed=42, threads=1)
        for threads in (2, 8):
            other = lisa(values, w, n_permutations=199, seed=42, threads=threads)
            assert (other.p_value == base.p_value).all()

    def test_full_neighbor_set_sampling(self):
        # k = n-1 exercises the degenerate corner of the without-replacement
        # sampler where every other unit is drawn
        values = [3.0, 1.0, 4.0, 1.5, 9.0]
        pts = [(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)]
        w = build_weights(pts, k=4, coord_kind="planar")
        result = lisa(values, w, n_permutations=49, seed=8)
        assert np.isfinite(result.local_i).all()
        # with all others as neighbors every permutation gives the same lag,
        # so the p-value hits its ceiling
        assert (result.p_value == 1.0).all()


class TestOutputs:
    def test_moran_json_keys(self):
        result = morans_i(CHECKERBOARD, rook_weights(), n_permutations=99, seed=1)
        d = moran_json_dict(result)
        assert set(d) == {"i", "expected_i", "z", "p", "permutations", "seed"}

    def test_lisa_csv_shape(self):
        result = lisa(CHECKERBOARD, rook_weights(), n_permutations=9, seed=1)
        text = lisa_csv_text(["a", "b", "c", "d"], result)
        lines = text.splitlines()
        assert lines[0] == "unit_id,local_i,quadrant,p_value"
        assert len(lines) == 5
        assert lines[1].startswith("a,-1.0,HL,")
