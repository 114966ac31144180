import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cohesig.dsp import (
    CorrelationMatrix, FilterKind, FilterSpec, correlation_matrix, cross_correlate,
    format_plot_data, format_smoothed_csv, lowpass,
)
from cohesig.exceptions import FilterWindowError, SignalLengthError, ZeroNormError
from cohesig.vectors import CohesionSignal

from oracles import correlation_h


def _sig(values):
    return CohesionSignal("s", tuple(values))


@pytest.mark.parametrize("kind", list(FilterKind))
@pytest.mark.parametrize("window", [1, 3, 5, 7, 9])
def test_kernel_normalized(kind, window):
    k = FilterSpec(kind, window).kernel()
    assert len(k) == window
    assert (k >= 0).all()
    assert abs(k.sum() - 1) <= 1e-12
    assert np.array_equal(k, k[::-1])


@pytest.mark.parametrize("window", [0, 2, 4, -1])
def test_filter_spec_rejects_even_or_small_window(window):
    with pytest.raises(ValueError):
        FilterSpec(window=window)


def test_moving_average_hand_example():
    out = lowpass(_sig([0, 1, 0, 1, 0]), FilterSpec("moving_average", 3))
    assert out.values == pytest.approx([2 / 3, 1 / 3, 2 / 3, 1 / 3, 2 / 3], abs=1e-15)
    assert out.smoothed and out.filter == FilterSpec("moving_average", 3)


def test_window_one_is_identity():
    vals = [0.3, 0.9, 0.1, 0.5]
    assert lowpass(_sig(vals), FilterSpec(window=1)).values == tuple(vals)


@pytest.mark.parametrize("kind", list(FilterKind))
def test_constant_signal_fixpoint(kind):
    out = lowpass(_sig([0.37] * 11), FilterSpec(kind, 7))
    assert max(abs(v - 0.37) for v in out.values) <= 1e-12


def test_window_too_large():
    with pytest.raises(FilterWindowError):
        lowpass(_sig([0.1, 0.2]), FilterSpec(window=5))
    # 2 * len - 1 is the largest admissible window
    assert len(lowpass(_sig([0.1, 0.2, 0.3]), FilterSpec(window=5))) == 3


_unit = st.floats(0, 1, allow_nan=False)


@given(st.lists(_unit, min_size=4, max_size=40), st.sampled_from(list(FilterKind)), st.sampled_from([1, 3, 5, 7]))
def test_lowpass_range_length_and_reversal(values, kind, window):
    spec = FilterSpec(kind, window)
    out = lowpass(_sig(values), spec)
    assert len(out) == len(values)
    assert all(0.0 <= v <= 1.0 for v in out.values)
    rev = lowpass(_sig(values[::-1]), spec)
    assert np.allclose(rev.values[::-1], out.values, rtol=0, atol=1e-12)


def test_lowpass_keeps_degenerate_flags():
    sig = CohesionSignal("s", (0.5, 0.0, 0.5), (False, True, False))
    assert lowpass(sig, FilterSpec(window=3)).degenerate == sig.degenerate


def test_cross_correlate_hand_example():
    res = cross_correlate([1, 2], [2, 1])
    assert res.h == (4.0, 4.0, 0.0)
    assert res.r == 0.8
    assert (res.n_x, res.n_y) == (2, 2)


def test_cross_correlate_identity_and_orthogonal():
    assert cross_correlate([0.2, 0.5, 0.1], [0.2, 0.5, 0.1]).r == 1.0
    assert cross_correlate([1, 0], [0, 1]).r == 0.0


def test_cross_correlate_zero_norm():
    with pytest.raises(ZeroNormError):
        cross_correlate([0, 0], [1, 2])


@pytest.mark.parametrize("seed", range(3))
def test_h_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    for _ in range(100):
        x = rng.random(rng.integers(1, 17))
        y = rng.random(rng.integers(1, 17))
        got = cross_correlate(x, y).h
        exp = correlation_h(list(x), list(y))
        assert len(got) == len(x) + len(y) - 1
        assert max(abs(a - b) for a, b in zip(got, exp)) <= 1e-12


_pos = st.lists(st.floats(0.01, 1), min_size=1, max_size=16)


@given(_pos, _pos, st.floats(0.1, 100))
def test_r_symmetric_scale_invariant_bounded(x, y, c):
    n = min(len(x), len(y))
    x, y = x[:n], y[:n]
    r = cross_correlate(x, y).r
    assert abs(r - cross_correlate(y, x).r) <= 1e-12
    assert abs(r - cross_correlate([c * v for v in x], y).r) <= 1e-12
    assert 0.0 <= r <= 1.0


def test_correlation_matrix_identity():
    s = [0.2, 0.4, 0.1, 0.3]
    m = correlation_matrix({"a": s, "b": s})
    assert m.cells == ((1.0, 1.0), (1.0, 1.0))
    assert m.to_csv() == ",a,b\na,1.000,1.000\nb,1.000,1.000\n"


def test_correlation_matrix_symmetry_and_json():
    rng = np.random.default_rng(7)
    runs = [(f"r{i}", rng.random(20)) for i in range(4)]
    m = correlation_matrix(runs)
    for i in range(4):
        assert abs(m.cells[i][i] - 1) <= 1e-9
        for j in range(4):
            assert m.cells[i][j] == m.cells[j][i]
    assert CorrelationMatrix.from_json(m.to_json()) == m
    assert m["r0", "r2"] == m.cells[0][2]
    assert json.loads(m.to_json())["labels"] == ["r0", "r1", "r2", "r3"]


def test_correlation_matrix_length_mismatch_names_runs():
    with pytest.raises(SignalLengthError, match="'b'"):
        correlation_matrix([("a", [0.1, 0.2]), ("b", [0.1, 0.2, 0.3])])


def test_correlation_matrix_needs_two_unique_runs():
    with pytest.raises(ValueError):
        correlation_matrix([("a", [0.1])])
    with pytest.raises(ValueError):
        correlation_matrix([("a", [0.1]), ("a", [0.2])])


def test_smoothed_csv_and_plot_data():
    raw = _sig([0.0, 1.0, 0.0])
    sm = lowpass(raw, FilterSpec(window=3))
    assert format_smoothed_csv(raw, sm).splitlines() == [
        "gap_index,raw,smoothed", "0,0.000000,0.666667", "1,1.000000,0.333333", "2,0.000000,0.666667"]
    assert format_plot_data(raw) == "0 0.000000\n1 1.000000\n2 0.000000\n"
