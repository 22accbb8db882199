import oracles
import pytest

from gsbench import (
    Backend,
    BufferArena,
    Kernel,
    plan_arena,
    suite_ustride,
    summarize,
    sweep,
)
from gsbench.figures import render_figures

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


@pytest.fixture(scope="module")
def reports():
    suite = suite_ustride(Kernel.GATHER, target_bytes=2**16, runs=2,
                          backend=Backend.serial())
    batch = list(suite.configs)
    results = sweep(batch, arena=BufferArena.allocate(plan_arena(batch)),
                    timer=oracles.TickTimer())
    with_baseline = summarize(results, baseline_index=0)
    without_baseline = summarize(results)
    return with_baseline, without_baseline


def test_baseline_report_renders_three_figures(reports, tmp_path):
    with_baseline, _ = reports
    paths = render_figures(with_baseline, tmp_path)
    assert [p.name for p in paths] == ["bandwidth.png", "normalized.png",
                                      "bwbw.png"]
    for p in paths:
        data = p.read_bytes()
        assert data.startswith(PNG_MAGIC)
        assert len(data) > 2000  # a drawn chart, not an empty canvas


def test_report_without_baseline_renders_bandwidth_only(reports, tmp_path):
    _, without_baseline = reports
    paths = render_figures(without_baseline, tmp_path)
    assert [p.name for p in paths] == ["bandwidth.png"]


def test_prefix_names_the_files(reports, tmp_path):
    with_baseline, _ = reports
    paths = render_figures(with_baseline, tmp_path, prefix="sweep-")
    assert [p.name for p in paths] == ["sweep-bandwidth.png",
                                      "sweep-normalized.png", "sweep-bwbw.png"]


def test_rendering_twice_overwrites_in_place(reports, tmp_path):
    with_baseline, _ = reports
    first = render_figures(with_baseline, tmp_path)
    sizes = [p.stat().st_size for p in first]
    second = render_figures(with_baseline, tmp_path)
    assert first == second
    assert [p.stat().st_size for p in second] == sizes


def test_output_directory_is_created(reports, tmp_path):
    with_baseline, _ = reports
    nested = tmp_path / "a" / "b"
    paths = render_figures(with_baseline, nested)
    assert all(p.parent == nested for p in paths)
    assert all(p.exists() for p in paths)
