import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from satmetric.errors import ComputationError
from satmetric.ingest import ResponseKind, ResponseSet, generate_synthetic
from satmetric.instrument import LikertScale, build_instrument
from satmetric.psychometrics import (
    VarianceMode,
    cronbach_alpha,
    item_descriptives,
    omitted_item_stats,
    reliability_gate,
    reliability_report,
)

# 4 respondents x 3 items; hand-checked oracle values:
#   sample item variances 5/3, 5/3, 11/12 (sum 17/4); total-score variance 131/12
#   alpha = (3/2) * (1 - (17/4)/(131/12)) = 120/131
ORACLE_MATRIX = np.array([(1, 2, 3), (2, 4, 5), (3, 3, 4), (4, 5, 5)], dtype=float)
ORACLE_ALPHA = 120 / 131
ORACLE_ALPHA_WITHOUT_LAST = 8 / 9  # columns 1-2: 2 * (1 - (10/3)/6)


def alpha_covariance_oracle(matrix: np.ndarray) -> float:
    """Independent route: alpha from the sample covariance matrix."""
    k = matrix.shape[1]
    cov = np.cov(matrix, rowvar=False)
    return (k / (k - 1)) * (1.0 - np.trace(cov) / cov.sum())


def make_response_set(matrix, kind=ResponseKind.EXPECTATION):
    matrix = np.asarray(matrix)
    return ResponseSet(kind=kind, instrument_ref="test", values=matrix,
                       respondent_ids=tuple(f"r{i}" for i in range(matrix.shape[0])))


def tiny_instrument(k):
    return build_instrument({
        "scale": {"min": 1, "max": 5},
        "items": [{"id": i, "prompt": f"item {i}", "dimension": "empathy", "kano": "must_be"}
                  for i in range(1, k + 1)],
    })


class TestItemDescriptives:
    def test_mean_is_column_sum_over_n(self):
        # six 3s, forty-five 4s, thirty 5s: sum 348, sum of squares 1524
        column = np.array([3] * 6 + [4] * 45 + [5] * 30)
        rs = make_response_set(column.reshape(-1, 1))
        (d,) = item_descriptives(rs, tiny_instrument(1))
        assert d.n == 81
        assert d.mean == 348 / 81
        assert d.mean == pytest.approx(4.296296296, abs=1e-9)

    def test_population_variance_matches_published_value(self):
        column = np.array([3] * 6 + [4] * 45 + [5] * 30)
        assert int((column ** 2).sum()) == 1524
        rs = make_response_set(column.reshape(-1, 1))
        (d,) = item_descriptives(rs, tiny_instrument(1), VarianceMode.POPULATION)
        assert d.variance == pytest.approx(0.356652949, abs=1e-9)
        (d_sample,) = item_descriptives(rs, tiny_instrument(1), VarianceMode.SAMPLE)
        assert d_sample.variance == pytest.approx(d.variance * 81 / 80, rel=1e-12)

    def test_population_variance_second_published_column(self):
        # one 3, forty-seven 4s, thirty-three 5s: sum 356, sum of squares 1586
        column = np.array([3] * 1 + [4] * 47 + [5] * 33)
        assert column.sum() == 356 and int((column ** 2).sum()) == 1586
        rs = make_response_set(column.reshape(-1, 1))
        (d,) = item_descriptives(rs, tiny_instrument(1), VarianceMode.POPULATION)
        assert d.mean == pytest.approx(4.395061728, abs=1e-9)
        assert d.variance == pytest.approx(0.263679317, abs=1e-9)

    def test_constant_column_has_zero_variance_in_both_modes(self):
        rs = make_response_set(np.full((7, 1), 3))
        for mode in VarianceMode:
            (d,) = item_descriptives(rs, tiny_instrument(1), mode)
            assert d.mean == 3.0 and d.variance == 0.0

    def test_means_are_respondent_permutation_invariant(self):
        rng = np.random.default_rng(5)
        matrix = rng.integers(1, 6, size=(9, 3))
        shuffled = matrix[rng.permutation(9)]
        instrument = tiny_instrument(3)
        a = item_descriptives(make_response_set(matrix), instrument)
        b = item_descriptives(make_response_set(shuffled), instrument)
        assert [d.mean for d in a] == [d.mean for d in b]

    def test_importance_kind_rejected(self):
        rs = make_response_set(np.full((3, 5), 20), kind=ResponseKind.IMPORTANCE)
        with pytest.raises(ComputationError, match="Likert"):
            item_descriptives(rs, tiny_instrument(5))


class TestCronbachAlpha:
    def test_oracle_matrix(self):
        assert cronbach_alpha(ORACLE_MATRIX) == pytest.approx(ORACLE_ALPHA, abs=1e-12)

    def test_identical_columns_give_alpha_one(self):
        column = np.array([1, 3, 2, 5, 4], dtype=float)
        matrix = np.column_stack([column] * 4)
        assert cronbach_alpha(matrix) == pytest.approx(1.0, abs=1e-12)

    def test_too_few_items_rejected(self):
        with pytest.raises(ComputationError, match="at least 2 items"):
            cronbach_alpha(ORACLE_MATRIX[:, :1])

    def test_zero_total_variance_is_an_error_not_nan(self):
        matrix = np.array([[1, 2], [1, 2], [1, 2]], dtype=float)
        with pytest.raises(ComputationError, match="variance is zero"):
            cronbach_alpha(matrix)

    def test_translation_invariance(self):
        shifted = ORACLE_MATRIX.copy()
        shifted[:, 1] += 7.0
        assert cronbach_alpha(shifted) == pytest.approx(ORACLE_ALPHA, abs=1e-12)

    def test_positive_scaling_invariance(self):
        assert cronbach_alpha(ORACLE_MATRIX * 3.5) == pytest.approx(ORACLE_ALPHA, abs=1e-12)

    @settings(max_examples=80, deadline=None)
    @given(st.integers(0, 10_000))
    def test_matches_covariance_oracle_on_random_matrices(self, seed):
        rng = np.random.default_rng(seed)
        n = rng.integers(5, 11)
        k = rng.integers(3, 7)
        matrix = rng.integers(1, 6, size=(n, k)).astype(float)
        total_var = matrix.sum(axis=1).var(ddof=1)
        if total_var == 0:
            return
        assert cronbach_alpha(matrix) == pytest.approx(
            alpha_covariance_oracle(matrix), abs=1e-12)


class TestOmittedItemStats:
    def test_alpha_if_deleted_matches_column_deleted_alpha(self):
        stats = omitted_item_stats(ORACLE_MATRIX)
        assert stats[2].alpha_if_deleted == pytest.approx(ORACLE_ALPHA_WITHOUT_LAST, abs=1e-12)
        for i, s in enumerate(stats):
            expected = cronbach_alpha(np.delete(ORACLE_MATRIX, i, axis=1))
            assert s.alpha_if_deleted == pytest.approx(expected, abs=1e-12)

    def test_adjusted_total_statistics(self):
        stats = omitted_item_stats(ORACLE_MATRIX)
        adj = ORACLE_MATRIX[:, 1:].sum(axis=1)  # totals without item 1
        assert stats[0].adj_total_mean == pytest.approx(adj.mean(), abs=1e-12)
        assert stats[0].adj_total_stdev == pytest.approx(adj.std(ddof=1), abs=1e-12)
        r = np.corrcoef(ORACLE_MATRIX[:, 0], adj)[0, 1]
        assert stats[0].item_adj_total_corr == pytest.approx(r, abs=1e-12)

    def test_squared_multiple_corr_is_regression_r2(self):
        stats = omitted_item_stats(ORACLE_MATRIX)
        y = ORACLE_MATRIX[:, 0]
        X = np.column_stack([np.ones(4), ORACLE_MATRIX[:, 1:]])
        beta, *_ = np.linalg.lstsq(X, y, rcond=None)
        ss_res = ((y - X @ beta) ** 2).sum()
        ss_tot = ((y - y.mean()) ** 2).sum()
        assert stats[0].squared_multiple_corr == pytest.approx(1 - ss_res / ss_tot, abs=1e-9)
        assert 0.0 <= stats[0].squared_multiple_corr <= 1.0

    def test_constant_column_gets_undefined_markers(self):
        matrix = np.column_stack([ORACLE_MATRIX[:, :2], np.full(4, 3.0)])
        stats = omitted_item_stats(matrix)
        assert stats[2].item_adj_total_corr is None
        assert stats[2].squared_multiple_corr is None
        # the other items stay defined
        assert stats[0].item_adj_total_corr is not None

    def test_fewer_than_three_items_rejected(self):
        with pytest.raises(ComputationError, match="at least 3 items"):
            omitted_item_stats(ORACLE_MATRIX[:, :2])

    def test_item_ids_are_carried_through(self):
        stats = omitted_item_stats(ORACLE_MATRIX, item_ids=[10, 20, 30])
        assert [s.item_id for s in stats] == [10, 20, 30]


class TestReliabilityGate:
    @pytest.mark.parametrize("alpha, expected", [
        (0.7242, True),
        (0.6, False),   # strict inequality at the boundary
        (0.59, False),
        (0.6000001, True),
    ])
    def test_gate(self, alpha, expected):
        assert reliability_gate(alpha) is expected

    def test_report_assembles_alpha_omitted_and_gate(self):
        instrument = tiny_instrument(3)
        rs = make_response_set(ORACLE_MATRIX.astype(int))
        report = reliability_report(rs, instrument, threshold=0.6)
        assert report.alpha == pytest.approx(ORACLE_ALPHA, abs=1e-12)
        assert report.passes_gate is True
        assert report.n_items == 3 and report.n_respondents == 4
        assert len(report.omitted) == 3
        assert [o.item_id for o in report.omitted] == [1, 2, 3]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_alpha_invariances_on_random_matrices(seed):
    rng = np.random.default_rng(seed)
    matrix = rng.integers(1, 6, size=(8, 4)).astype(float)
    if matrix.sum(axis=1).var(ddof=1) == 0:
        return
    base = cronbach_alpha(matrix)
    shifted = matrix.copy()
    shifted[:, 2] += 11.0
    assert cronbach_alpha(shifted) == pytest.approx(base, abs=1e-12)
    assert cronbach_alpha(matrix * 0.25) == pytest.approx(base, abs=1e-12)


def test_descriptives_recover_synthetic_targets():
    targets = [356 / 81, 348 / 81, 330 / 81]
    rs = generate_synthetic(targets, 81, LikertScale(), seed=4)
    descriptives = item_descriptives(rs, tiny_instrument(3))
    assert [d.mean for d in descriptives] == targets
