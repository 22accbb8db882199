"""Run configuration model, CLI/JSON config parsing, and arena planning."""

from __future__ import annotations

import argparse
import json
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .errors import ConfigError, PatternError, UsageError
from .patterns import (
    Custom,
    IndexPattern,
    custom_pattern,
    extent,
    parse_pattern,
    render_pattern,
)

_U64_MAX = 2**64 - 1

DEFAULT_RUNS = 10


class Kernel(Enum):
    GATHER = "gather"
    SCATTER = "scatter"


def default_threads() -> int:
    return os.cpu_count() or 1


@dataclass(frozen=True)
class Backend:
    """Execution backend: serial in-order, or parallel over thread blocks."""

    parallel: bool
    threads: int = 1

    def __post_init__(self) -> None:
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        if not self.parallel and self.threads != 1:
            raise ConfigError("serial backend is single-threaded")

    @classmethod
    def serial(cls) -> "Backend":
        return cls(parallel=False, threads=1)

    @classmethod
    def with_threads(cls, threads: int | None = None) -> "Backend":
        return cls(parallel=True, threads=default_threads() if threads is None else threads)


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to execute one benchmark configuration."""

    kernel: Kernel
    pattern: IndexPattern
    delta: int
    count: int
    runs: int = DEFAULT_RUNS
    backend: Backend = field(default_factory=Backend.with_threads)
    name: str | None = None

    def __post_init__(self) -> None:
        if self.delta < 0:
            raise ConfigError(f"delta must be >= 0, got {self.delta}")
        if self.count < 1:
            raise ConfigError(f"count must be >= 1, got {self.count}")
        if self.runs < 1:
            raise ConfigError(f"runs must be >= 1, got {self.runs}")
        required_elements(self)  # raises if the span overflows 64 bits

    @property
    def moved_bytes(self) -> int:
        """Payload traffic per timed run; index-buffer reads are not counted."""
        return 8 * len(self.pattern) * self.count


def required_elements(config: RunConfig) -> int:
    """Elements the large buffer needs: extent of the last iteration's window."""
    span = extent(config.pattern) + config.delta * (config.count - 1)
    if span > _U64_MAX:
        raise ConfigError(
            f"required elements overflow 64 bits: "
            f"extent {extent(config.pattern)} + delta {config.delta} * {config.count - 1}"
        )
    return span


@dataclass(frozen=True)
class ArenaPlan:
    """Buffer sizes that satisfy every configuration of a batch at once."""

    large_elements: int
    small_elements: int
    max_threads: int


def plan_arena(batch: Sequence[RunConfig]) -> ArenaPlan:
    if not batch:
        raise ConfigError("cannot plan an arena for an empty batch")
    return ArenaPlan(
        large_elements=max(required_elements(c) for c in batch),
        small_elements=max(len(c.pattern) for c in batch),
        max_threads=max(c.backend.threads for c in batch),
    )


# --- command-line parsing ---------------------------------------------------


class _StrictParser(argparse.ArgumentParser):
    """argparse parser that raises instead of printing usage and exiting."""

    def error(self, message: str) -> None:  # noqa: A003 - argparse API
        raise UsageError(message)


def _kernel_value(text: str) -> Kernel:
    try:
        return Kernel(text.lower())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected gather or scatter, got {text!r}")


def _backend_value(text: str) -> str:
    kind = text.lower()
    if kind not in ("serial", "parallel"):
        raise argparse.ArgumentTypeError(f"expected serial or parallel, got {text!r}")
    return kind


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return value


def _pos_int(text: str) -> int:
    value = _nonneg_int(text)
    if value == 0:
        raise argparse.ArgumentTypeError("expected a positive integer, got '0'")
    return value


def add_config_flags(parser: argparse.ArgumentParser, *, required: bool) -> None:
    """Install the per-configuration flags on ``parser``."""
    parser.add_argument("-k", "--kernel", type=_kernel_value, required=required,
                        metavar="KERNEL", help="gather or scatter (case-insensitive)")
    parser.add_argument("-p", "--pattern", required=required, metavar="PATTERN",
                        help="generator expression or comma-separated index list")
    parser.add_argument("-d", "--delta", type=_nonneg_int, required=required,
                        metavar="N", help="elements the base address advances per iteration")
    parser.add_argument("-l", "--count", type=_pos_int, required=required,
                        metavar="N", help="iterations per timed run")
    parser.add_argument("-r", "--runs", type=_pos_int, default=None, metavar="N",
                        help=f"timed repetitions per configuration (default {DEFAULT_RUNS})")
    parser.add_argument("-b", "--backend", type=_backend_value, default=None,
                        metavar="KIND", help="serial or parallel (default parallel)")
    parser.add_argument("-t", "--threads", type=_pos_int, default=None, metavar="N",
                        help="thread blocks for the parallel backend (default: CPU count)")


def resolve_backend(backend_kind: str | None, threads: int | None) -> Backend:
    if backend_kind == "serial":
        if threads is not None:
            raise UsageError("-t/--threads conflicts with the serial backend")
        return Backend.serial()
    return Backend.with_threads(threads)


def config_from_flags(ns: argparse.Namespace, name: str | None = None) -> RunConfig:
    """Build one configuration from parsed per-configuration flags."""
    return RunConfig(
        kernel=ns.kernel,
        pattern=parse_pattern(ns.pattern),
        delta=ns.delta,
        count=ns.count,
        runs=DEFAULT_RUNS if ns.runs is None else ns.runs,
        backend=resolve_backend(ns.backend, ns.threads),
        name=name,
    )


def parse_cli(args: Sequence[str]) -> list[RunConfig]:
    """Parse bare configuration flags into a single-entry batch.

    Unknown flags, missing required flags, and malformed flag values raise
    :class:`UsageError`; pattern text that parses but is rejected raises
    :class:`PatternError`.
    """
    parser = _StrictParser(prog="gsbench", add_help=False)
    add_config_flags(parser, required=True)
    return [config_from_flags(parser.parse_args(list(args)))]


# --- JSON config files ------------------------------------------------------

_JSON_KEYS = {"name", "kernel", "pattern", "delta", "count", "runs", "backend", "threads"}


def _entry_int(entry: dict, key: str, pos: int, *, minimum: int, default=None) -> int:
    if key not in entry:
        if default is None:
            raise ConfigError(f"entry {pos}: missing required key {key!r}")
        return default
    value = entry[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"entry {pos}: {key} must be an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"entry {pos}: {key} must be >= {minimum}, got {value}")
    return value


def _entry_pattern(entry: dict, pos: int) -> IndexPattern:
    if "pattern" not in entry:
        raise ConfigError(f"entry {pos}: missing required key 'pattern'")
    value = entry["pattern"]
    if isinstance(value, str):
        try:
            return parse_pattern(value)
        except PatternError as exc:
            raise ConfigError(f"entry {pos}: {exc}") from exc
    if isinstance(value, list):
        for j, item in enumerate(value):
            if isinstance(item, bool) or not isinstance(item, int) or item < 0:
                raise ConfigError(
                    f"entry {pos}: pattern[{j}] must be a non-negative integer, got {item!r}"
                )
        if not value:
            raise ConfigError(f"entry {pos}: pattern list is empty")
        return custom_pattern(value)
    raise ConfigError(f"entry {pos}: pattern must be a string or a list of integers")


def _entry_backend(entry: dict, pos: int) -> Backend:
    kind = entry.get("backend", "parallel")
    if kind not in ("serial", "parallel"):
        raise ConfigError(f"entry {pos}: backend must be 'serial' or 'parallel', got {kind!r}")
    threads = entry.get("threads")
    if threads is not None:
        if isinstance(threads, bool) or not isinstance(threads, int) or threads < 1:
            raise ConfigError(f"entry {pos}: threads must be a positive integer, got {threads!r}")
        if kind == "serial":
            raise ConfigError(f"entry {pos}: threads is not valid with the serial backend")
    if kind == "serial":
        return Backend.serial()
    return Backend.with_threads(threads)


def parse_json(doc: str) -> list[RunConfig]:
    """Parse a JSON array of configuration objects.

    Every error message carries the array position of the offending entry.
    """
    try:
        data = json.loads(doc)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise ConfigError("config file must hold a JSON array of configurations")
    batch = []
    for pos, entry in enumerate(data):
        if not isinstance(entry, dict):
            raise ConfigError(f"entry {pos}: expected an object, got {type(entry).__name__}")
        unknown = sorted(set(entry) - _JSON_KEYS)
        if unknown:
            raise ConfigError(f"entry {pos}: unknown key {unknown[0]!r}")
        kernel_text = entry.get("kernel")
        try:
            kernel = Kernel(kernel_text)
        except ValueError:
            raise ConfigError(f"entry {pos}: unknown kernel {kernel_text!r}")
        name = entry.get("name")
        if name is not None and not isinstance(name, str):
            raise ConfigError(f"entry {pos}: name must be a string, got {name!r}")
        try:
            config = RunConfig(
                kernel=kernel,
                pattern=_entry_pattern(entry, pos),
                delta=_entry_int(entry, "delta", pos, minimum=0),
                count=_entry_int(entry, "count", pos, minimum=1),
                runs=_entry_int(entry, "runs", pos, minimum=1, default=DEFAULT_RUNS),
                backend=_entry_backend(entry, pos),
                name=name,
            )
        except ConfigError as exc:
            if str(exc).startswith("entry "):
                raise
            raise ConfigError(f"entry {pos}: {exc}") from exc
        batch.append(config)
    return batch


def emit_json(batch: Sequence[RunConfig]) -> str:
    """Serialize a batch so that :func:`parse_json` reproduces it exactly."""
    entries = []
    for config in batch:
        entry: dict = {}
        if config.name is not None:
            entry["name"] = config.name
        entry["kernel"] = config.kernel.value
        if isinstance(config.pattern.descriptor, Custom):
            entry["pattern"] = list(config.pattern.indices)
        else:
            entry["pattern"] = render_pattern(config.pattern)
        entry["delta"] = config.delta
        entry["count"] = config.count
        entry["runs"] = config.runs
        entry["backend"] = "parallel" if config.backend.parallel else "serial"
        if config.backend.parallel:
            entry["threads"] = config.backend.threads
        entries.append(entry)
    return json.dumps(entries, indent=2) + "\n"
