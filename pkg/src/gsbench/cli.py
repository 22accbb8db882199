"""Command-line front end: build a batch, run it, report it.

A batch comes from exactly one of three sources: bare flags describing a
single configuration, a JSON config file, or a named suite.  Reports are
deterministic for a given set of measured times: they never mention the
backend or thread count, and the scatter checksum goes to stderr only.

Exit codes: 0 success, 1 usage error, 2 invalid configuration,
3 validation failure or refusal, 4 I/O error.
"""

from __future__ import annotations

import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .engine import BufferArena, sweep, validate
from .errors import BenchmarkError, ConfigError, UsageError
from .metrics import SuiteReport, bwbw_points, summarize
from .patterns import Custom, render_pattern
from .planner import (
    _StrictParser,
    add_config_flags,
    config_from_flags,
    parse_json,
    plan_arena,
    resolve_backend,
)
from .suites import SUITE_NAMES, Suite, export_suite_json, get_suite

CSV_HEADER = ("name", "kernel", "pattern", "delta", "count", "runs",
              "moved_bytes", "min_time_s", "bandwidth_mb_s")

REPORT_FORMATS = ("text", "csv", "json")


@dataclass(frozen=True)
class OutputSpec:
    """Where and how to write the report.

    The include flags gate the baseline-relative sections of the JSON
    format; the text and CSV layouts are fixed.
    """

    format: str = "text"
    destination: Path | None = None
    include_normalized: bool = True
    include_bwbw: bool = True

    def __post_init__(self) -> None:
        if self.format not in REPORT_FORMATS:
            raise ConfigError(f"unknown report format {self.format!r}")


def _pattern_text(config) -> str:
    return render_pattern(config.pattern)


def _row_cells(report: SuiteReport) -> list[tuple[str, ...]]:
    rows = []
    for r in report.results:
        rows.append((
            r.config_name,
            r.config.kernel.value,
            _pattern_text(r.config),
            str(r.config.delta),
            str(r.config.count),
            f"{r.min_time:.9f}",
            f"{r.bandwidth_mb_s:#.6g}",
        ))
    return rows


def _text_report(report: SuiteReport) -> str:
    header = ("name", "kernel", "pattern", "delta", "count", "min_time_s", "bandwidth_MB_s")
    rows = _row_cells(report)
    widths = [max(len(header[c]), max(len(row[c]) for row in rows)) for c in range(len(header))]
    right = {3, 4, 5, 6}  # numeric columns

    def fmt(cells: tuple[str, ...]) -> str:
        parts = [
            cells[c].rjust(widths[c]) if c in right else cells[c].ljust(widths[c])
            for c in range(len(cells))
        ]
        return "  ".join(parts).rstrip()

    lines = [fmt(header)]
    lines.extend(fmt(row) for row in rows)
    lines.append("")
    lines.append(f"MIN    {report.min_mb_s:#.6g} MB/s")
    lines.append(f"MAX    {report.max_mb_s:#.6g} MB/s")
    lines.append(f"HMEAN  {report.harmonic_mean_mb_s:#.6g} MB/s")
    if report.correlation_r is not None:
        lines.append(f"R      {report.correlation_r:.6f}")
    return "\n".join(lines) + "\n"


def _csv_report(report: SuiteReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(CSV_HEADER)
    for r in report.results:
        writer.writerow((
            r.config_name,
            r.config.kernel.value,
            _pattern_text(r.config),
            r.config.delta,
            r.config.count,
            r.config.runs,
            r.moved_bytes,
            repr(r.min_time),
            repr(r.bandwidth_mb_s),
        ))
    return buf.getvalue()


def _json_report(report: SuiteReport, spec: OutputSpec) -> str:
    results = []
    for r in report.results:
        c = r.config
        if isinstance(c.pattern.descriptor, Custom):
            pattern: object = list(c.pattern.indices)
        else:
            pattern = render_pattern(c.pattern)
        results.append({
            "name": r.config_name,
            "kernel": c.kernel.value,
            "pattern": pattern,
            "delta": c.delta,
            "count": c.count,
            "runs": c.runs,
            "moved_bytes": r.moved_bytes,
            "run_times_s": list(r.run_times),
            "min_time_s": r.min_time,
            "bandwidth_mb_s": r.bandwidth_mb_s,
        })
    summary: dict = {
        "min_mb_s": report.min_mb_s,
        "max_mb_s": report.max_mb_s,
        "harmonic_mean_mb_s": report.harmonic_mean_mb_s,
    }
    if report.baseline_mb_s is not None:
        summary["baseline_mb_s"] = report.baseline_mb_s
        if spec.include_normalized:
            summary["normalized_percent"] = [
                [name, pct] for name, pct in (report.normalized_percent or ())
            ]
        if spec.include_bwbw:
            data = bwbw_points(report.results, report.baseline_mb_s)
            summary["bwbw"] = {
                "points": [[p.x_mb_s, p.y_mb_s, p.name] for p in data.points],
                "guide_fractions": list(data.guide_fractions),
            }
    if report.correlation_r is not None:
        summary["correlation_r"] = report.correlation_r
    return json.dumps({"results": results, "summary": summary}, indent=2) + "\n"


def emit_report(report: SuiteReport, spec: OutputSpec = OutputSpec()) -> int:
    """Render ``report`` per ``spec``; return the number of bytes emitted."""
    if spec.format == "text":
        text = _text_report(report)
    elif spec.format == "csv":
        text = _csv_report(report)
    else:
        text = _json_report(report, spec)
    data = text.encode("utf-8")
    if spec.destination is None:
        sys.stdout.write(text)
    else:
        spec.destination.write_bytes(data)
    return len(data)


def _build_parser() -> _StrictParser:
    parser = _StrictParser(
        prog="gsbench",
        description="Configurable gather/scatter memory bandwidth benchmark.",
    )
    add_config_flags(parser, required=False)
    parser.add_argument("-f", "--file", type=Path, default=None, metavar="PATH",
                        help="JSON config file holding an array of configurations")
    parser.add_argument("--suite", default=None, metavar="NAME",
                        help="named suite: " + ", ".join(SUITE_NAMES))
    parser.add_argument("--format", choices=REPORT_FORMATS, default="text",
                        help="report format (default text)")
    parser.add_argument("-o", "--output", type=Path, default=None, metavar="PATH",
                        help="write the report to PATH instead of stdout")
    parser.add_argument("--validate", action="store_true",
                        help="check kernel results element for element before timing")
    parser.add_argument("--target-bytes", type=int, default=None, metavar="N",
                        help="suite traffic target per configuration")
    parser.add_argument("--arena-limit", type=int, default=None, metavar="N",
                        help="suite cap on large-buffer bytes")
    parser.add_argument("--plots", type=Path, default=None, metavar="DIR",
                        help="also render figures into DIR")
    parser.add_argument("--export", action="store_true",
                        help="print the suite as a JSON config file instead of running")
    return parser


def _reject_config_flags(ns, mode: str, flags: Sequence[str]) -> None:
    names = {"kernel": "-k", "pattern": "-p", "delta": "-d", "count": "-l",
             "runs": "-r", "backend": "-b", "threads": "-t"}
    for attr in flags:
        if getattr(ns, attr) is not None:
            raise UsageError(f"{names[attr]} is not valid with {mode}")


def _batch_from_args(ns) -> tuple[list, int | None, Suite | None]:
    """Returns (batch, baseline_index, suite-or-None)."""
    sources = [s for s in ("pattern", "file", "suite") if getattr(ns, s) is not None]
    if len(sources) != 1:
        raise UsageError("exactly one of -p/--pattern, -f/--file, --suite is required")
    if ns.suite is None:
        if ns.target_bytes is not None or ns.arena_limit is not None:
            raise UsageError("--target-bytes and --arena-limit apply to suites only")
        if ns.export:
            raise UsageError("--export applies to suites only")
    if ns.pattern is not None:
        for attr, flag in (("kernel", "-k/--kernel"), ("delta", "-d/--delta"),
                           ("count", "-l/--count")):
            if getattr(ns, attr) is None:
                raise UsageError(f"missing required flag {flag}")
        return [config_from_flags(ns)], None, None
    if ns.file is not None:
        _reject_config_flags(ns, "-f/--file", ("kernel", "pattern", "delta", "count",
                                               "runs", "backend", "threads"))
        doc = ns.file.read_text(encoding="utf-8")
        return parse_json(doc), None, None
    _reject_config_flags(ns, "--suite", ("kernel", "pattern", "delta", "count"))
    if ns.target_bytes is not None and ns.target_bytes < 8:
        raise UsageError(f"--target-bytes must be at least 8, got {ns.target_bytes}")
    if ns.arena_limit is not None and ns.arena_limit < 8:
        raise UsageError(f"--arena-limit must be at least 8, got {ns.arena_limit}")
    suite = get_suite(
        ns.suite,
        target_bytes=ns.target_bytes,
        max_arena_bytes=ns.arena_limit,
        runs=ns.runs if ns.runs is not None else 10,
        backend=resolve_backend(ns.backend, ns.threads),
    )
    return list(suite.configs), suite.baseline_index, suite


def main(argv: Sequence[str] | None = None, *,
         timer: Callable[[], float] | None = None) -> int:
    """Run the command line; returns the process exit code."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(list(sys.argv[1:] if argv is None else argv))
        batch, baseline_index, suite = _batch_from_args(ns)

        if ns.export:
            text = export_suite_json(suite)
            if ns.output is None:
                sys.stdout.write(text)
            else:
                ns.output.write_bytes(text.encode("utf-8"))
            return 0

        arena = BufferArena.allocate(plan_arena(batch))
        if ns.validate:
            worst = 0
            for i, config in enumerate(batch):
                verdict = validate(config, arena)
                name = config.name or f"cfg{i}"
                line = f"validate {name}: {verdict.status.value}"
                if verdict.message:
                    line += f" ({verdict.message})"
                print(line, file=sys.stderr)
                if not verdict.ok:
                    worst = 3
            if worst:
                return worst

        results = sweep(batch, arena=arena, timer=timer or time.perf_counter)
        report = summarize(results, baseline_index=baseline_index)
        emit_report(report, OutputSpec(format=ns.format, destination=ns.output))
        print(f"checksum {sum(r.checksum for r in results):.17g}", file=sys.stderr)

        if ns.plots is not None:
            from .figures import render_figures

            prefix = f"{suite.name}-" if suite is not None else ""
            for path in render_figures(report, ns.plots, prefix=prefix):
                print(f"figure {path}", file=sys.stderr)
        return 0
    except UsageError as exc:
        print(f"gsbench: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"gsbench: error: {exc}", file=sys.stderr)
        return 4
    except MemoryError:
        print("gsbench: error: batch does not fit in memory; lower --arena-limit",
              file=sys.stderr)
        return 2
    except BenchmarkError as exc:
        print(f"gsbench: error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
