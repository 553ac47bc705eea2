import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treecast import LagSet, SeriesTooShort, TimeSeries, build_training_set, prediction_window
from treecast.series import shift_period


class TestTimeSeries:
    def test_rejects_nan_and_inf(self):
        with pytest.raises(ValueError):
            TimeSeries([1.0, float("nan"), 3.0])
        with pytest.raises(ValueError):
            TimeSeries([1.0, float("inf")])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            TimeSeries([])

    def test_rejects_bad_frequency_and_phase(self):
        with pytest.raises(ValueError):
            TimeSeries([1.0], frequency=0)
        with pytest.raises(ValueError):
            TimeSeries([1.0], frequency=4, start=(2020, 5))
        with pytest.raises(ValueError):
            TimeSeries([1.0], frequency=4, start=(2020, 0))

    def test_values_are_read_only(self):
        s = TimeSeries([1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            s.values[0] = 9.0

    def test_period_after_end(self):
        s = TimeSeries(np.ones(10), frequency=1, start=(1, 1))
        assert s.period_after_end() == (11, 1)
        q = TimeSeries(np.ones(6), frequency=4, start=(2023, 2))
        assert q.period_after_end() == (2024, 4)

    def test_shift_period_wraps_cycles(self):
        assert shift_period((2020, 1), 4, 4) == (2021, 1)
        assert shift_period((2020, 3), 3, 4) == (2021, 2)
        assert shift_period((5, 1), 7, 1) == (12, 1)


class TestLagSet:
    def test_sorts_input(self):
        assert LagSet([3, 1, 2]).lags == (1, 2, 3)

    def test_rejects_empty_duplicates_nonpositive(self):
        with pytest.raises(ValueError):
            LagSet([])
        with pytest.raises(ValueError):
            LagSet([1, 1, 2])
        with pytest.raises(ValueError):
            LagSet([0, 1])

    def test_max_lag_and_descending(self):
        lags = LagSet([1, 4, 2])
        assert lags.max_lag == 4
        assert lags.descending() == (4, 2, 1)


class TestBuildTrainingSet:
    def test_table_one_golden(self):
        # series t1..t8 with lags 1..3: five rows, descending lag order
        s = TimeSeries(np.arange(1.0, 9.0))
        ts = build_training_set(s, LagSet([1, 2, 3]))
        assert ts.feature_names == ("Lag3", "Lag2", "Lag1")
        assert ts.n_examples == 5
        np.testing.assert_array_equal(ts.features[0], [1.0, 2.0, 3.0])
        assert ts.targets[0] == 4.0
        np.testing.assert_array_equal(ts.features[-1], [5.0, 6.0, 7.0])
        assert ts.targets[-1] == 8.0

    def test_console_output_golden(self):
        s = TimeSeries(np.arange(1.0, 11.0))
        ts = build_training_set(s, LagSet([1, 2, 3]))
        expected_features = np.array(
            [[1, 2, 3], [2, 3, 4], [3, 4, 5], [4, 5, 6], [5, 6, 7], [6, 7, 8], [7, 8, 9]],
            dtype=float,
        )
        np.testing.assert_array_equal(ts.features, expected_features)
        np.testing.assert_array_equal(ts.targets, np.arange(4.0, 11.0))
        np.testing.assert_array_equal(ts.features[6], [7.0, 8.0, 9.0])
        assert ts.targets[6] == 10.0

    def test_minimal_length_single_row(self):
        s = TimeSeries([5.0, -1.0, 2.5, 7.0])
        ts = build_training_set(s, LagSet([1, 2, 3]))
        assert ts.n_examples == 1
        np.testing.assert_array_equal(ts.features[0], [5.0, -1.0, 2.5])
        assert ts.targets[0] == 7.0

    def test_too_short_raises(self):
        with pytest.raises(SeriesTooShort):
            build_training_set(TimeSeries([1.0, 2.0, 3.0]), LagSet([1, 2, 3]))

    def test_row_feature_means_are_raw_means(self):
        s = TimeSeries(np.arange(1.0, 11.0))
        ts = build_training_set(s, LagSet([1, 2, 3]))
        np.testing.assert_allclose(ts.row_feature_means, ts.features.mean(axis=1))

    @settings(max_examples=60, deadline=None)
    @given(
        length=st.integers(min_value=2, max_value=40),
        lags=st.sets(st.integers(min_value=1, max_value=10), min_size=1, max_size=5),
        seed=st.integers(min_value=0, max_value=2**32 - 1),
    )
    def test_row_count_law_and_lag_correspondence(self, length, lags, seed):
        lag_set = LagSet(sorted(lags))
        if length <= lag_set.max_lag:
            return
        rng = np.random.default_rng(seed)
        values = rng.normal(size=length)
        ts = build_training_set(TimeSeries(values), lag_set)
        assert ts.n_examples == length - lag_set.max_lag
        assert ts.n_features == len(lag_set)
        descending = lag_set.descending()
        for i in range(ts.n_examples):
            j = lag_set.max_lag + i  # 0-based target index
            assert ts.targets[i] == values[j]
            for c, k in enumerate(descending):
                assert ts.features[i, c] == values[j - k]

    def test_deterministic(self):
        s = TimeSeries(np.sin(np.arange(30.0)))
        lags = LagSet([1, 3, 7])
        a = build_training_set(s, lags)
        b = build_training_set(s, lags)
        np.testing.assert_array_equal(a.features, b.features)
        np.testing.assert_array_equal(a.targets, b.targets)


class TestPredictionWindow:
    def test_table_two_first_row(self):
        history = np.arange(1.0, 9.0)  # t1..t8
        window = prediction_window(history, LagSet([1, 2, 3]))
        np.testing.assert_array_equal(window, [6.0, 7.0, 8.0])

    def test_table_two_second_row_uses_forecast(self):
        history = np.concatenate([np.arange(1.0, 9.0), [42.0]])  # t1..t8, f1
        window = prediction_window(history, LagSet([1, 2, 3]))
        np.testing.assert_array_equal(window, [7.0, 8.0, 42.0])

    def test_single_lag_identity(self):
        np.testing.assert_array_equal(prediction_window([3.25], LagSet([1])), [3.25])

    def test_too_short_raises(self):
        with pytest.raises(SeriesTooShort):
            prediction_window([1.0, 2.0], LagSet([3]))

    def test_matches_hypothetical_next_row(self):
        # the window equals the feature row that would exist with one more point
        rng = np.random.default_rng(7)
        values = rng.normal(size=25)
        lags = LagSet([2, 5])
        extended = np.concatenate([values, [0.0]])
        ts = build_training_set(TimeSeries(extended), lags)
        np.testing.assert_array_equal(prediction_window(values, lags), ts.features[-1])
