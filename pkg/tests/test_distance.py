import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsgraphssl.dataset import Dataset, TimeSeries
from tsgraphssl.distance import (
    DTW,
    Euclidean,
    MPDist,
    SoftDTWDivergence,
    dtw_distance,
    euclidean_distance,
    load_distance_matrix,
    matrix_profile,
    mpdist,
    pairwise_distance_matrix,
    save_distance_matrix,
    soft_dtw,
    soft_dtw_divergence,
    soft_min,
)
from tsgraphssl.errors import (
    CacheFormatError,
    EmptySeriesError,
    IncompatibleLengthsError,
    PairwiseDistanceError,
    ParameterError,
    WindowTooLargeError,
)

import oracles

small_series = st.lists(st.integers(0, 2), min_size=1, max_size=5)
real_series = st.lists(st.floats(-3, 3, allow_nan=False), min_size=1, max_size=4)


# --- Euclidean ---------------------------------------------------------------

def test_euclidean_examples():
    assert euclidean_distance([0, 3, 4], [0, 0, 0]) == 5.0
    assert euclidean_distance([1.5, 2], [1.5, 2]) == 0.0
    assert euclidean_distance([1, 2], [2, 4]) == pytest.approx(math.sqrt(5), abs=1e-15)


def test_euclidean_length_mismatch():
    with pytest.raises(IncompatibleLengthsError):
        euclidean_distance([1, 2], [1])


# --- DTW ----------------------------------------------------------------------

def test_dtw_examples():
    assert dtw_distance([1, 2, 3], [2, 3]) == 1.0
    assert dtw_distance([0, 0], [1, 1]) == 2.0
    x = [0.3, -1.2, 4.0]
    assert dtw_distance(x, x) == 0.0
    assert dtw_distance(TimeSeries(x), TimeSeries(x)) == 0.0


def test_dtw_empty():
    with pytest.raises(EmptySeriesError):
        dtw_distance([], [1.0])


@settings(max_examples=200, deadline=None)
@given(small_series, small_series)
def test_dtw_matches_path_enumeration(x, y):
    assert dtw_distance(x, y) == oracles.dtw_bruteforce(x, y)


# --- soft-min / soft-DTW ------------------------------------------------------

def test_soft_min_examples():
    assert soft_min([2.5], 0.7) == 2.5
    assert soft_min([1, 1, 1], 1.0) == pytest.approx(1 - math.log(3), abs=1e-15)
    v = soft_min([0, 1000], 1.0)
    assert math.isfinite(v) and abs(v) <= 1e-300


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-50, 50), min_size=1, max_size=6), st.floats(1e-3, 10))
def test_soft_min_bounds(values, gamma):
    s = soft_min(values, gamma)
    lo = min(values) - gamma * math.log(len(values))
    assert lo - 1e-9 <= s <= min(values) + 1e-12


def test_soft_min_tends_to_min():
    v = [3.0, 1.0, 2.0]
    assert soft_min(v, 1e-8) == pytest.approx(1.0, abs=1e-9)


def test_soft_min_rejects_bad_input():
    with pytest.raises(ValueError):
        soft_min([], 1.0)
    with pytest.raises(ParameterError):
        soft_min([1.0], 0.0)


def test_soft_dtw_examples():
    assert soft_dtw([1], [1], 0.3) == 0.0
    assert soft_dtw([1, 2], [1, 2], 1.0) == pytest.approx(-math.log(1 + 2 * math.exp(-1)), abs=1e-14)
    # frozen from the alignment enumeration oracle
    assert soft_dtw([1, 2], [1, 2], 1.0) == pytest.approx(-0.5514447139320511, abs=1e-14)


def test_soft_dtw_small_gamma_tends_to_dtw(rng):
    for _ in range(20):
        x = rng.standard_normal(rng.integers(1, 6))
        y = rng.standard_normal(rng.integers(1, 6))
        assert abs(soft_dtw(x, y, 1e-6) - dtw_distance(x, y)) <= 1e-4


@settings(max_examples=150, deadline=None)
@given(real_series, real_series, st.sampled_from([0.1, 1.0, 10.0]))
def test_soft_dtw_matches_alignment_enumeration(x, y, gamma):
    assert abs(soft_dtw(x, y, gamma) - oracles.soft_dtw_bruteforce(x, y, gamma)) <= 1e-9


def test_soft_dtw_divergence_examples():
    assert soft_dtw_divergence([1, 2], [1, 2], 1.0) == 0.0
    expected = oracles.soft_dtw_divergence_bruteforce([0, 0], [1, 1], 1.0)
    assert expected == pytest.approx(2.5471675747360587, abs=1e-13)
    assert soft_dtw_divergence([0, 0], [1, 1], 1.0) == pytest.approx(expected, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(real_series, real_series, st.sampled_from([0.1, 1.0, 10.0]))
def test_soft_dtw_divergence_symmetric(x, y, gamma):
    a = soft_dtw_divergence(x, y, gamma)
    b = soft_dtw_divergence(y, x, gamma)
    assert a == pytest.approx(b, abs=1e-10)
    assert soft_dtw_divergence(x, x, gamma) == 0.0


# --- matrix profile / MPdist --------------------------------------------------

def test_matrix_profile_example():
    p = matrix_profile([0, 1, 0, 1, 0, 1], [5] * 6, 3)
    assert p.size == 8
    assert np.sum(np.isclose(p, math.sqrt(57), rtol=0, atol=1e-12)) == 6
    assert np.sum(np.isclose(p, math.sqrt(66), rtol=0, atol=1e-12)) == 2


def test_matrix_profile_self_is_zero(rng):
    x = rng.standard_normal(17)
    for L in (1, 4, 17):
        p = matrix_profile(x, x, L)
        assert p.size == 2 * (17 - L + 1)
        assert np.all(p == 0)


def test_matrix_profile_window_too_large():
    with pytest.raises(WindowTooLargeError):
        matrix_profile([1, 2, 3], [1, 2], 3)


def test_mpdist_example():
    assert mpdist([0, 1, 0, 1, 0, 1], [5] * 6, 0.5, 0.05) == math.sqrt(57)


def test_mpdist_symmetric_and_zero(rng):
    for _ in range(20):
        x = rng.standard_normal(rng.integers(2, 30))
        y = rng.standard_normal(rng.integers(2, 30))
        assert mpdist(x, y) == mpdist(y, x)
        assert mpdist(x, x) == 0.0


def test_mpdist_k_clamped_to_profile_size():
    # k_fraction = 1 asks for k = 12 > |P| = 8; falls back to the largest entry
    assert mpdist([0, 1, 0, 1, 0, 1], [5] * 6, 0.5, 1.0) == pytest.approx(math.sqrt(66))


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.floats(-5, 5), min_size=2, max_size=30),
    st.lists(st.floats(-5, 5), min_size=2, max_size=30),
    st.floats(0.05, 1.0),
    st.floats(0.01, 0.5),
)
def test_mpdist_matches_naive(x, y, wf, kf):
    assert mpdist(x, y, wf, kf) == pytest.approx(oracles.mpdist_naive(x, y, wf, kf), abs=1e-9)


def test_mpdist_grows_with_window_for_dissimilar_series():
    # sinusoid against white noise: longer windows leave less room for chance matches
    rng = np.random.default_rng(7)
    t = np.arange(100)
    x = np.sin(2 * np.pi * t / 25)
    y = rng.standard_normal(100)
    values = [mpdist(x, y, L / 100, 0.05) for L in (10, 20, 30, 40)]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_mpdist_znorm_option_is_shift_and_scale_invariant(rng):
    x = rng.standard_normal(40)
    y = 3.0 * x + 10.0
    assert mpdist(x, y, znorm=True) == pytest.approx(0.0, abs=1e-9)
    assert mpdist(x, y) > 1.0


# --- pairwise matrices --------------------------------------------------------

ALL_KINDS = [Euclidean(), DTW(), SoftDTWDivergence(1.0), SoftDTWDivergence(0.1), MPDist()]


def test_pairwise_single_series():
    dm = pairwise_distance_matrix([TimeSeries([1.0, 2.0])], DTW())
    assert dm.entries.shape == (1, 1) and dm.entries[0, 0] == 0


@pytest.mark.parametrize("kind", ALL_KINDS, ids=lambda k: f"{k.tag}{k.params()}")
def test_pairwise_invariants_and_spot_checks(kind, toy_dataset, rng):
    from tsgraphssl.distance import distance

    dm = pairwise_distance_matrix(toy_dataset, kind)
    e = dm.entries
    assert np.array_equal(e, e.T)
    assert np.all(np.diag(e) == 0)
    assert np.all(e >= 0)
    assert dm.dataset_fingerprint == toy_dataset.fingerprint()
    for _ in range(10):
        i, j = rng.choice(toy_dataset.n, size=2, replace=False)
        ref = distance(toy_dataset.series[i], toy_dataset.series[j], kind)
        assert e[i, j] == pytest.approx(max(ref, 0.0), rel=1e-12, abs=1e-12)


def test_pairwise_ragged_dtw():
    series = [TimeSeries([0, 1, 2], -1), TimeSeries([0, 2], 1), TimeSeries([5], 1)]
    dm = pairwise_distance_matrix(series, DTW())
    assert dm.entries[0, 1] == dtw_distance([0, 1, 2], [0, 2])
    assert dm.entries[1, 2] == dtw_distance([0, 2], [5])


def test_pairwise_euclidean_rejects_ragged():
    series = [TimeSeries([0, 1, 2]), TimeSeries([0, 2]), TimeSeries([5, 1, 1])]
    with pytest.raises(PairwiseDistanceError) as err:
        pairwise_distance_matrix(series, Euclidean())
    assert err.value.pair == (0, 1)


def test_pairwise_mpdist_rejects_length_one():
    series = [TimeSeries([0, 1, 2]), TimeSeries([0, 2]), TimeSeries([5])]
    with pytest.raises(PairwiseDistanceError) as err:
        pairwise_distance_matrix(series, MPDist())
    assert err.value.pair == (0, 2)


def test_kind_validation():
    with pytest.raises(ParameterError):
        SoftDTWDivergence(0.0)
    with pytest.raises(ParameterError):
        MPDist(window_fraction=0.0)


@pytest.mark.parametrize("kind", ALL_KINDS, ids=lambda k: f"{k.tag}{k.params()}")
def test_cache_roundtrip_is_bit_identical(kind, toy_dataset, tmp_path):
    dm = pairwise_distance_matrix(toy_dataset, kind)
    p = tmp_path / "m.tsgd"
    save_distance_matrix(dm, p)
    back = load_distance_matrix(p)
    assert back.kind == kind
    assert np.array_equal(back.entries, dm.entries)


def test_cache_header_layout(toy_dataset, tmp_path):
    import struct

    dm = pairwise_distance_matrix(toy_dataset, SoftDTWDivergence(0.5))
    p = tmp_path / "m.tsgd"
    save_distance_matrix(dm, p)
    raw = p.read_bytes()
    magic, version, code, _, n, nparams = struct.unpack_from("<4sHBBQI", raw)
    assert (magic, version, n, nparams) == (b"TSGD", 1, toy_dataset.n, 1)
    assert struct.unpack_from("<d", raw, 20)[0] == 0.5
    first = struct.unpack_from("<d", raw, 28)[0]
    assert first == dm.entries[0, 1]
    assert len(raw) == 28 + 8 * (n * (n - 1) // 2)


def test_cache_rejects_garbage(tmp_path):
    p = tmp_path / "bad.tsgd"
    p.write_bytes(b"XXXX" + bytes(30))
    with pytest.raises(CacheFormatError):
        load_distance_matrix(p)
