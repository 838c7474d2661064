import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from dsvis.algorithms import (
    ALGORITHMS,
    DownsampleSpec,
    downsample,
    every_nth,
    lttb,
    m4,
    materialize,
    min_max,
    parse_algorithm,
)
from dsvis.errors import InvalidNOutError, TooShortError, UnknownAlgorithmError
from dsvis.series import validate


def series(y, x=None):
    return validate(np.arange(len(y), dtype=float) if x is None else x, y)


class TestEveryNth:
    @pytest.mark.parametrize(
        "n, n_out, expected",
        [(10, 5, [0, 2, 4, 6, 8]), (10, 10, list(range(10))), (7, 3, [0, 2, 4])],
    )
    def test_examples(self, n, n_out, expected):
        assert oracles.every_nth(n, n_out) == expected
        assert every_nth(series(np.zeros(n)), n_out).tolist() == expected

    @pytest.mark.parametrize("n_out", [0, 11])
    def test_invalid(self, n_out):
        with pytest.raises(InvalidNOutError):
            every_nth(series(np.zeros(10)), n_out)


class TestMinMax:
    def test_every_point_is_extremum(self):
        assert min_max(series([1, 5, 2, 8]), 4).tolist() == [0, 1, 2, 3]

    def test_constant_bucket_dedup(self):
        assert min_max(series([3, 3, 3, 3]), 2).tolist() == [0]

    def test_two_buckets(self):
        y = [0, 9, 1, 8, 2, 7]
        assert oracles.min_max(list(range(6)), y, 4) == [0, 1, 3, 4]
        assert min_max(series(y), 4).tolist() == [0, 1, 3, 4]

    def test_materialize(self):
        s = series([0, 9, 1, 8, 2, 7])
        np.testing.assert_array_equal(materialize(s, min_max(s, 4)).y, [0, 9, 8, 2])

    @pytest.mark.parametrize("n_out", [3, 0])
    def test_parity(self, n_out):
        with pytest.raises(InvalidNOutError):
            min_max(series(np.zeros(10)), n_out)


class TestM4:
    def test_all_distinct(self):
        assert m4(series([3, 7, 1, 5]), 4).tolist() == [0, 1, 2, 3]

    def test_first_is_max(self):
        assert oracles.m4(list(range(4)), [9, 1, 2, 3], 4) == [0, 1, 3]
        assert m4(series([9, 1, 2, 3]), 4).tolist() == [0, 1, 3]

    def test_two_buckets(self):
        y = [0, 9, 1, 8, 2, 7, 0, 9]
        assert oracles.m4(list(range(8)), y, 8) == [0, 1, 3, 4, 6, 7]
        assert m4(series(y), 8).tolist() == [0, 1, 3, 4, 6, 7]

    @pytest.mark.parametrize("n_out", [6, 2])
    def test_divisibility(self, n_out):
        with pytest.raises(InvalidNOutError):
            m4(series(np.zeros(12)), n_out)


class TestLTTB:
    def test_spike(self):
        x, y = [0, 1, 2, 3, 4], [0, 0, 5, 0, 0]
        assert [oracles.triangle_area(0, 0, x[j], y[j], 4, 0) for j in (1, 2, 3)] == [0, 10, 0]
        assert oracles.lttb(x, y, 3) == [0, 2, 4]
        assert lttb(series(y), 3).tolist() == [0, 2, 4]

    def test_identity(self, rng):
        s = series(rng.normal(size=37))
        assert lttb(s, 37).tolist() == list(range(37))

    def test_collinear_tie_breaks_low(self):
        assert lttb(series(np.full(9, 4.0)), 3).tolist() == [0, 1, 8]

    def test_minimum(self):
        with pytest.raises(InvalidNOutError):
            lttb(series(np.zeros(5)), 2)


class TestDispatch:
    def test_identity_everynth(self):
        s = series(np.arange(6.0))
        assert downsample(s, DownsampleSpec("EveryNth", 6)).tolist() == list(range(6))

    @pytest.mark.parametrize("algo, n_out", [("MinMax", 3), ("LTTB", 2), ("m4", 10)])
    def test_spec_rejects(self, algo, n_out):
        with pytest.raises(InvalidNOutError):
            DownsampleSpec(algo, n_out)

    def test_too_large_at_call_time(self):
        with pytest.raises(InvalidNOutError):
            downsample(series(np.zeros(10)), DownsampleSpec("lttb", 11))

    @pytest.mark.parametrize("name", ["every-nth", "MIN_MAX", "M4", "Lttb"])
    def test_names(self, name):
        assert parse_algorithm(name) in ALGORITHMS

    def test_unknown(self):
        with pytest.raises(UnknownAlgorithmError):
            DownsampleSpec("douglas-peucker", 10)


class TestMaterialize:
    def test_endpoints(self):
        s = series([1.0, 2.0, 3.0])
        out = materialize(s, [0, 2])
        np.testing.assert_array_equal(out.x, [0, 2])

    def test_identity(self, rng):
        s = series(rng.normal(size=20))
        assert materialize(s, np.arange(20)) == s

    def test_bad_index(self):
        with pytest.raises(IndexError):
            materialize(series([1.0, 2.0, 3.0]), [0, 3])

    def test_single(self):
        with pytest.raises(TooShortError):
            materialize(series([1.0, 2.0, 3.0]), [1])


values = arrays(np.float64, st.integers(4, 200), elements=st.floats(-1e3, 1e3))


def _valid_n_outs(algo, n):
    step = {"minmax": 2, "m4": 4}.get(algo, 1)
    lo = {"everynth": 1, "minmax": 2, "m4": 4, "lttb": 3}[algo]
    return st.sampled_from(range(lo, n + 1, step))


class TestProperties:
    @pytest.mark.parametrize("algo", ALGORITHMS)
    @given(data=st.data(), y=values)
    def test_strictly_increasing_and_bounded(self, algo, data, y):
        n_out = data.draw(_valid_n_outs(algo, len(y)))
        sel = downsample(series(y), DownsampleSpec(algo, n_out))
        assert np.all(np.diff(sel) > 0)
        assert 0 <= sel[0] and sel[-1] < len(y)
        assert len(sel) <= n_out

    @given(data=st.data(), y=values)
    def test_lttb_keeps_endpoints_and_size(self, data, y):
        n_out = data.draw(_valid_n_outs("lttb", len(y)))
        sel = lttb(series(y), n_out)
        assert sel[0] == 0 and sel[-1] == len(y) - 1 and len(sel) == n_out

    @pytest.mark.parametrize("fn, algo", [(min_max, "minmax"), (m4, "m4")])
    @given(data=st.data(), y=values)
    def test_contains_global_extrema(self, fn, algo, data, y):
        n_out = data.draw(_valid_n_outs(algo, len(y)))
        sel = set(fn(series(y), n_out).tolist())
        assert int(np.argmin(y)) in sel and int(np.argmax(y)) in sel

    @given(data=st.data(), y=arrays(np.float64, 48, elements=st.floats(-10, 10), unique=True))
    def test_m4_bucket_locality(self, data, y):
        # Reorder the non-witness samples of one bucket: that bucket's contribution is unchanged.
        s = series(y)
        before = m4(s, 16).tolist()  # 4 buckets of 12
        b = data.draw(st.integers(0, 3))
        lo, hi = 12 * b, 12 * b + 12
        witnesses = {lo, hi - 1, lo + int(np.argmin(y[lo:hi])), lo + int(np.argmax(y[lo:hi]))}
        free = [i for i in range(lo, hi) if i not in witnesses]
        perm = data.draw(st.permutations(free))
        y2 = y.copy()
        y2[free] = y[perm]
        assert m4(series(y2), 16).tolist() == before

    @given(data=st.data(), y=values)
    def test_x_binning_matches_oracle(self, data, y):
        # integer positions: float bin membership is exact, so it must equal the oracle's
        x = np.cumsum(data.draw(arrays(np.int64, len(y), elements=st.integers(1, 9)))).astype(float)
        for algo, fn, ref in (("minmax", min_max, oracles.min_max), ("m4", m4, oracles.m4), ("lttb", lttb, oracles.lttb)):
            n_out = data.draw(_valid_n_outs(algo, len(y)))
            got = fn(series(y, x), n_out, "x").tolist()
            assert got == ref(x.tolist(), y.tolist(), n_out, "x")
