import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from dsvis.errors import (
    EmptyViewError,
    InvalidBucketCountError,
    LengthMismatchError,
    NonFiniteValueError,
    NonMonotonicXError,
    TooShortError,
)
from dsvis.series import TimeSeries, bucket_bounds, partition, slice_view, validate


class TestValidate:
    def test_minimal_valid(self):
        s = validate([0, 1, 2], [5, 5, 5])
        assert len(s) == 3
        assert s.x.dtype == np.float64

    @pytest.mark.parametrize(
        "x, y, err",
        [
            ([0, 0, 1], [1, 2, 3], NonMonotonicXError),
            ([0, 2, 1], [1, 2, 3], NonMonotonicXError),
            ([0, 1], [1], LengthMismatchError),
            ([0, 1], [1, np.nan], NonFiniteValueError),
            ([0, np.inf], [1, 2], NonFiniteValueError),
            ([0], [1], TooShortError),
        ],
    )
    def test_rejects(self, x, y, err):
        with pytest.raises(err):
            validate(x, y)

    def test_y_only_gets_index_x(self):
        s = validate([3.0, 1.0, 2.0])
        np.testing.assert_array_equal(s.x, [0, 1, 2])

    def test_immutable_and_copied(self):
        x = np.arange(4.0)
        s = TimeSeries(x, np.ones(4))
        x[0] = -10
        assert s.x[0] == 0
        with pytest.raises(ValueError):
            s.y[0] = 3

    def test_equality(self):
        assert validate([0, 1], [2, 3]) == validate([0, 1], [2, 3])
        assert validate([0, 1], [2, 3]) != validate([0, 1], [2, 4])


class TestPartition:
    def test_even_split(self):
        s = validate(np.arange(10.0), np.zeros(10))
        assert partition(s, 2).ranges == [(0, 5), (5, 10)]

    def test_near_equal_split(self):
        s = validate(np.arange(10.0), np.zeros(10))
        expected = [(0, 4), (4, 7), (7, 10)]
        assert [(g[0], g[-1] + 1) for g in oracles.index_buckets(10, 3)] == expected
        assert partition(s, 3).ranges == expected

    def test_x_based(self):
        s = validate([0, 1, 2, 9], [0, 0, 0, 0])
        expected = [(0, 3), (3, 4)]
        assert [(g[0], g[-1] + 1) for g in oracles.x_buckets([0, 1, 2, 9], 2)] == expected
        assert partition(s, 2, "x").ranges == expected

    def test_x_based_merges_empty_intervals(self):
        # intervals [0,2.5) [2.5,5) [5,7.5) [7.5,10]; the middle two are empty
        s = validate([0, 1, 2, 10], [0, 0, 0, 0])
        assert partition(s, 4, "x").ranges == [(0, 3), (3, 4)]

    @pytest.mark.parametrize("b", [0, 11])
    def test_invalid_count(self, b):
        with pytest.raises(InvalidBucketCountError):
            partition(validate(np.zeros(10)), b)

    @pytest.mark.parametrize("k, b", [(1, 7), (3, 5), (10, 10)])
    def test_exact_multiple(self, k, b):
        p = partition(validate(np.zeros(k * b)), b)
        assert p.count == b
        assert set(p.sizes().tolist()) == {k}

    @given(st.integers(1, 300).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))))
    def test_index_partition_total_and_balanced(self, nb):
        n, b = nb
        bounds = bucket_bounds(np.arange(n, dtype=float), b, "index")
        sizes = np.diff(bounds)
        assert bounds[0] == 0 and bounds[-1] == n
        assert len(sizes) == b and sizes.min() >= 1
        assert sizes.max() - sizes.min() <= 1

    @given(
        st.lists(st.integers(-10**6, 10**6), min_size=2, max_size=80, unique=True),
        st.integers(1, 80),
    )
    def test_x_partition_matches_exact_membership(self, xs, b):
        xs = sorted(xs)
        b = min(b, len(xs))
        bounds = bucket_bounds(np.array(xs, dtype=float), b, "x")
        got = [list(range(bounds[k], bounds[k + 1])) for k in range(len(bounds) - 1)]
        assert got == oracles.x_buckets(xs, b)


class TestSliceView:
    s = validate(np.arange(10.0), np.arange(10.0) ** 2)

    def test_inclusive(self):
        np.testing.assert_array_equal(slice_view(self.s, 2, 5).x, [2, 3, 4, 5])

    def test_superset(self):
        assert slice_view(self.s, -1, 100) == self.s

    def test_empty(self):
        with pytest.raises(EmptyViewError):
            slice_view(self.s, 4.5, 4.6)

    @given(st.floats(-2, 11), st.floats(0.5, 12))
    def test_idempotent(self, a, w):
        b = a + w
        try:
            once = slice_view(self.s, a, b)
        except EmptyViewError:
            return
        assert slice_view(once, a, b) == once
