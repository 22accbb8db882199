"""Bandwidth statistics and plot-ready report data.

All summary statistics work on the per-configuration best-run bandwidths.
The harmonic mean is the rate-correct average; the correlation helper uses
population normalisation (the 1/n factors cancel in the quotient).
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .engine import KernelResult

GUIDE_FRACTIONS = (1.0, 0.5, 0.25, 0.125, 0.0625)


def harmonic_mean(values: Sequence[float]) -> float:
    """Harmonic mean of strictly positive rates."""
    if not values:
        raise ValueError("harmonic mean of an empty sequence")
    for v in values:
        if v <= 0:
            raise ValueError(f"harmonic mean requires positive values, got {v}")
    return statistics.harmonic_mean(values)


def pearson_r(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation of two equal-length samples."""
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise ValueError("correlation needs at least two points")
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    dx = x - x.mean()
    dy = y - y.mean()
    sx = np.sqrt(np.mean(dx * dx))
    sy = np.sqrt(np.mean(dy * dy))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("correlation is undefined for a constant sample")
    return float(np.mean(dx * dy) / (sx * sy))


def normalize_to_baseline(results: Sequence[KernelResult],
                          baseline_mb_s: float) -> list[tuple[str, float]]:
    """Each result's bandwidth as a percentage of the baseline bandwidth."""
    if baseline_mb_s <= 0:
        raise ValueError(f"baseline bandwidth must be positive, got {baseline_mb_s}")
    return [
        (r.config_name, 100.0 * r.bandwidth_mb_s / baseline_mb_s) for r in results
    ]


class BwbwPoint(NamedTuple):
    x_mb_s: float
    y_mb_s: float
    name: str


@dataclass(frozen=True)
class BwbwData:
    """Scatter-plot data: pattern bandwidth against the stride-1 baseline.

    The baseline itself appears as the first point (on the diagonal), and
    ``guide_fractions`` are the slopes of the reference lines to draw under
    the x = y diagonal.
    """

    points: tuple[BwbwPoint, ...]
    guide_fractions: tuple[float, ...] = GUIDE_FRACTIONS


def bwbw_points(results: Sequence[KernelResult], baseline_mb_s: float) -> BwbwData:
    if baseline_mb_s <= 0:
        raise ValueError(f"baseline bandwidth must be positive, got {baseline_mb_s}")
    points = [BwbwPoint(baseline_mb_s, baseline_mb_s, "stride-1")]
    points.extend(
        BwbwPoint(baseline_mb_s, r.bandwidth_mb_s, r.config_name) for r in results
    )
    return BwbwData(points=tuple(points))


@dataclass(frozen=True)
class SuiteReport:
    """Summary of one executed batch, ready for rendering."""

    results: tuple[KernelResult, ...]
    min_mb_s: float
    max_mb_s: float
    harmonic_mean_mb_s: float
    baseline_mb_s: float | None = None
    normalized_percent: tuple[tuple[str, float], ...] | None = None
    correlation_r: float | None = None


def summarize(results: Sequence[KernelResult], *,
              baseline_index: int | None = None,
              reference_mb_s: Sequence[float] | None = None) -> SuiteReport:
    """Fold results into a report.

    ``baseline_index`` names the stride-1 configuration used for the
    normalised view; ``reference_mb_s`` is an optional external bandwidth
    sample (one value per result) to correlate against.
    """
    if not results:
        raise ValueError("cannot summarize an empty result list")
    bws = [r.bandwidth_mb_s for r in results]
    baseline = None
    normalized = None
    if baseline_index is not None:
        if not 0 <= baseline_index < len(results):
            raise ValueError(f"baseline index {baseline_index} out of range")
        baseline = bws[baseline_index]
        normalized = tuple(normalize_to_baseline(results, baseline))
    correlation = None
    if reference_mb_s is not None:
        correlation = pearson_r(bws, reference_mb_s)
    return SuiteReport(
        results=tuple(results),
        min_mb_s=min(bws),
        max_mb_s=max(bws),
        harmonic_mean_mb_s=harmonic_mean(bws),
        baseline_mb_s=baseline,
        normalized_percent=normalized,
        correlation_r=correlation,
    )
