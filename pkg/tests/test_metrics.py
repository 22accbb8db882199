import math
import statistics

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gsbench import (
    Backend,
    Kernel,
    KernelResult,
    RunConfig,
    bwbw_points,
    custom_pattern,
    harmonic_mean,
    normalize_to_baseline,
    pearson_r,
    summarize,
)
from gsbench.metrics import GUIDE_FRACTIONS

_CONFIG = RunConfig(kernel=Kernel.GATHER, pattern=custom_pattern([0, 1]),
                    delta=2, count=4, backend=Backend.serial())


def result(bandwidth: float, name: str = "r") -> KernelResult:
    """Fabricated timing record: only name and bandwidth matter here."""
    return KernelResult(config=_CONFIG, config_name=name, run_times=(1.0,),
                        min_time=1.0, moved_bytes=64,
                        bandwidth_mb_s=bandwidth, checksum=0.0)


finite = st.floats(min_value=0.25, max_value=1e6, allow_nan=False)


# --- harmonic mean ----------------------------------------------------------


def test_harmonic_mean_goldens():
    assert harmonic_mean([4.0]) == 4.0
    assert harmonic_mean([2.0, 6.0]) == pytest.approx(3.0, abs=1e-12)
    assert harmonic_mean([1.0, 2.0, 4.0]) == pytest.approx(12.0 / 7.0, abs=1e-12)


def test_harmonic_mean_rejects_bad_input():
    with pytest.raises(ValueError):
        harmonic_mean([])
    with pytest.raises(ValueError):
        harmonic_mean([1.0, 0.0])
    with pytest.raises(ValueError):
        harmonic_mean([1.0, -2.0])


@given(st.lists(finite, min_size=1, max_size=20))
def test_harmonic_mean_bounds(values):
    h = harmonic_mean(values)
    assert min(values) <= h + 1e-9
    assert h <= max(values) + 1e-9
    assert h <= statistics.fmean(values) + 1e-9


@given(st.lists(finite, min_size=1, max_size=20), st.floats(0.5, 100.0))
def test_harmonic_mean_is_homogeneous(values, scale):
    assert harmonic_mean([scale * v for v in values]) == pytest.approx(
        scale * harmonic_mean(values), rel=1e-9)


# --- correlation ------------------------------------------------------------


def test_pearson_goldens():
    assert pearson_r([1, 2, 3], [10, 20, 30]) == pytest.approx(1.0, abs=1e-12)
    assert pearson_r([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0, abs=1e-12)
    assert pearson_r([1, 2, 3], [2, 2, 5]) == pytest.approx(
        3.0 / math.sqrt(12.0), abs=1e-12)
    assert pearson_r([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8, abs=1e-12)


def test_pearson_rejects_bad_input():
    with pytest.raises(ValueError):
        pearson_r([1, 2], [1, 2, 3])
    with pytest.raises(ValueError):
        pearson_r([1], [2])
    with pytest.raises(ValueError):
        pearson_r([5, 5, 5], [1, 2, 3])
    with pytest.raises(ValueError):
        pearson_r([1, 2, 3], [7, 7, 7])


@given(
    xs=st.lists(st.floats(-100, 100), min_size=3, max_size=15, unique=True),
    a=st.floats(0.5, 20.0), b=st.floats(-50.0, 50.0),
    c=st.floats(0.5, 20.0), d=st.floats(-50.0, 50.0),
)
def test_pearson_is_affine_invariant(xs, a, b, c, d):
    ys = [x * 1.5 + (i % 3) for i, x in enumerate(xs)]
    base = pearson_r(xs, ys)
    moved = pearson_r([a * x + b for x in xs], [c * y + d for y in ys])
    assert moved == pytest.approx(base, abs=1e-7)
    assert -1.0 - 1e-9 <= base <= 1.0 + 1e-9


# --- normalisation ----------------------------------------------------------


def test_normalize_goldens():
    rows = normalize_to_baseline(
        [result(16.0, "base"), result(32.0, "fast"), result(1.0, "slow")], 16.0)
    assert rows == [("base", 100.0), ("fast", 200.0), ("slow", 6.25)]


def test_normalize_is_homogeneous():
    rows = normalize_to_baseline([result(3.0), result(9.0)], 6.0)
    scaled = normalize_to_baseline([result(30.0), result(90.0)], 60.0)
    assert rows == scaled


def test_normalize_rejects_nonpositive_baseline():
    with pytest.raises(ValueError):
        normalize_to_baseline([result(1.0)], 0.0)
    with pytest.raises(ValueError):
        normalize_to_baseline([result(1.0)], -4.0)


# --- bandwidth-vs-bandwidth points ------------------------------------------


def test_bwbw_synthetic_baseline_point_comes_first():
    data = bwbw_points([result(100.0, "a"), result(400.0, "b")], 400.0)
    assert data.points[0] == (400.0, 400.0, "stride-1")
    assert data.points[1] == (400.0, 100.0, "a")
    assert data.points[2] == (400.0, 400.0, "b")
    assert data.guide_fractions == (1.0, 0.5, 0.25, 0.125, 0.0625)
    assert data.guide_fractions == GUIDE_FRACTIONS


def test_bwbw_empty_results_keep_the_diagonal_point():
    data = bwbw_points([], 250.0)
    assert data.points == ((250.0, 250.0, "stride-1"),)


def test_bwbw_rejects_nonpositive_baseline():
    with pytest.raises(ValueError):
        bwbw_points([result(1.0)], 0.0)


# --- summarize --------------------------------------------------------------


def test_summarize_statistics():
    report = summarize([result(2.0, "a"), result(6.0, "b")])
    assert report.min_mb_s == 2.0
    assert report.max_mb_s == 6.0
    assert report.harmonic_mean_mb_s == pytest.approx(3.0, abs=1e-12)
    assert report.baseline_mb_s is None
    assert report.normalized_percent is None
    assert report.correlation_r is None
    assert [r.config_name for r in report.results] == ["a", "b"]


def test_summarize_singleton():
    report = summarize([result(5.0)])
    assert report.min_mb_s == report.max_mb_s == report.harmonic_mean_mb_s == 5.0


def test_summarize_with_baseline():
    report = summarize([result(16.0, "base"), result(4.0, "quarter")],
                       baseline_index=0)
    assert report.baseline_mb_s == 16.0
    assert report.normalized_percent == (("base", 100.0), ("quarter", 25.0))


def test_summarize_with_reference_sample():
    report = summarize([result(1.0), result(2.0), result(3.0)],
                       reference_mb_s=[10.0, 20.0, 30.0])
    assert report.correlation_r == pytest.approx(1.0, abs=1e-12)


def test_summarize_rejects_bad_input():
    with pytest.raises(ValueError):
        summarize([])
    with pytest.raises(ValueError):
        summarize([result(1.0)], baseline_index=1)
    with pytest.raises(ValueError):
        summarize([result(1.0)], baseline_index=-1)
    with pytest.raises(ValueError):
        summarize([result(1.0), result(2.0)], reference_mb_s=[1.0])


@given(st.lists(finite, min_size=1, max_size=12))
def test_summarize_orders_min_hmean_max(bws):
    report = summarize([result(b, f"r{i}") for i, b in enumerate(bws)])
    assert report.min_mb_s <= report.harmonic_mean_mb_s + 1e-9
    assert report.harmonic_mean_mb_s <= report.max_mb_s + 1e-9
