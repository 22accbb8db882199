"""Render report figures to image files.

Three views: a bandwidth bar chart for every report, and, when the report
carries a stride-1 baseline, a polar percent-of-baseline chart and a
bandwidth-versus-baseline scatter with an x = y diagonal and fractional
guide lines below it.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402 - backend must be pinned first
import numpy as np  # noqa: E402

from .metrics import SuiteReport, bwbw_points

_DPI = 150


def _names(report: SuiteReport) -> list[str]:
    return [r.config_name for r in report.results]


def _bandwidth_chart(report: SuiteReport, path: Path) -> None:
    names = _names(report)
    bws = [r.bandwidth_mb_s for r in report.results]
    fig, ax = plt.subplots(figsize=(8, max(3, 0.3 * len(names) + 1)))
    pos = np.arange(len(names))
    ax.barh(pos, bws, color="#3b6ea5")
    ax.set_yticks(pos, names, fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("effective bandwidth (MB/s)")
    if min(bws) > 0 and max(bws) / min(bws) > 10:
        ax.set_xscale("log")
    ax.set_title("best-run effective bandwidth")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def _normalized_chart(report: SuiteReport, path: Path) -> None:
    entries = report.normalized_percent or ()
    names = [name for name, _ in entries]
    percents = [pct for _, pct in entries]
    angles = np.linspace(0, 2 * np.pi, len(names), endpoint=False)
    fig, ax = plt.subplots(figsize=(7, 7), subplot_kw={"projection": "polar"})
    closed = np.append(angles, angles[0])
    ax.plot(closed, percents + [percents[0]], color="#3b6ea5", linewidth=1.2)
    ax.fill(closed, percents + [percents[0]], color="#3b6ea5", alpha=0.2)
    ax.plot(closed, [100.0] * len(closed), color="#888888", linewidth=0.8, linestyle="--")
    ax.set_xticks(angles)
    ax.set_xticklabels(names, fontsize=6)
    ax.set_title("percent of stride-1 bandwidth")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def _bwbw_chart(report: SuiteReport, path: Path) -> None:
    data = bwbw_points(report.results, report.baseline_mb_s or 1.0)
    xs = [p.x_mb_s for p in data.points]
    ys = [p.y_mb_s for p in data.points]
    top = 1.05 * max(xs + ys)
    fig, ax = plt.subplots(figsize=(7, 7))
    line = np.array([0.0, top])
    for frac in data.guide_fractions:
        style = "-" if frac == 1.0 else ":"
        ax.plot(line, frac * line, style, color="#aaaaaa", linewidth=0.8)
        ax.annotate(f"1/{round(1 / frac)}" if frac < 1.0 else "x=y",
                    (top * 0.97, frac * top * 0.97), fontsize=6, color="#777777")
    ax.scatter(xs, ys, s=14, color="#3b6ea5", zorder=3)
    for p in data.points[1:]:
        ax.annotate(p.name, (p.x_mb_s, p.y_mb_s), fontsize=5,
                    textcoords="offset points", xytext=(3, 3))
    ax.set_xlim(0, top)
    ax.set_ylim(0, top)
    ax.set_xlabel("stride-1 bandwidth (MB/s)")
    ax.set_ylabel("pattern bandwidth (MB/s)")
    ax.set_title("pattern bandwidth vs stride-1 bandwidth")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_figures(report: SuiteReport, out_dir: str | Path, *,
                   prefix: str = "") -> list[Path]:
    """Write the applicable figures for ``report`` into ``out_dir``.

    Returns the created paths.  The baseline-relative figures are skipped
    when the report has no baseline.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    created = []
    path = out / f"{prefix}bandwidth.png"
    _bandwidth_chart(report, path)
    created.append(path)
    if report.baseline_mb_s is not None and report.normalized_percent:
        path = out / f"{prefix}normalized.png"
        _normalized_chart(report, path)
        created.append(path)
        path = out / f"{prefix}bwbw.png"
        _bwbw_chart(report, path)
        created.append(path)
    return created


__all__: Sequence[str] = ["render_figures"]
