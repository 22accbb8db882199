"""Buffer arena, kernel execution, timing, and result validation.

Buffers are allocated once per batch and reused: the timed region of a run
touches no allocator.  The large buffer holds float64 elements initialised
to their own index, so a gathered value directly names the address it came
from.  The small buffer is one 64-byte-aligned padded row per thread block.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numba
import numpy as np

from . import kernels
from .errors import EngineError
from .patterns import extent
from .planner import ArenaPlan, Kernel, RunConfig, plan_arena, required_elements

# Scatter runs store value THREAD_TAG*t + lane + 1, so a validated element
# also names the thread block and lane that wrote it.
THREAD_TAG = float(2**20)

_large_allocations = 0


def large_allocation_count() -> int:
    """Process-wide number of large-buffer allocations, for accounting tests."""
    return _large_allocations


def _aligned_block(rows: int, row_elements: int, dtype=np.float64) -> np.ndarray:
    """(rows, row_elements) array of 8-byte words starting on a 64-byte line."""
    raw = np.zeros(rows * row_elements + 8, dtype=dtype)
    off = (-raw.ctypes.data % 64) // 8
    return raw[off : off + rows * row_elements].reshape(rows, row_elements)


def _padded_row_length(elements: int) -> int:
    # round up to a whole number of 64-byte cache lines
    return max(8, -(-elements // 8) * 8)


@dataclass
class BufferArena:
    """Pre-allocated buffers big enough for every configuration of a batch."""

    plan: ArenaPlan
    large: np.ndarray
    small: np.ndarray

    @classmethod
    def allocate(cls, plan: ArenaPlan) -> "BufferArena":
        global _large_allocations
        large = _aligned_block(1, plan.large_elements)[0]
        _large_allocations += 1
        kernels.fill_identity(large)
        # Rows pad to whole cache lines so no two thread blocks ever
        # write the same line of the small buffer.
        small = _aligned_block(plan.max_threads, _padded_row_length(plan.small_elements))
        return cls(plan=plan, large=large, small=small)

    def fits(self, plan: ArenaPlan) -> bool:
        return (
            self.large.size >= plan.large_elements
            and self.small.shape[1] >= plan.small_elements
            and self.small.shape[0] >= plan.max_threads
        )


@dataclass(frozen=True)
class KernelResult:
    """Timing record for one executed configuration."""

    config: RunConfig
    config_name: str
    run_times: tuple[float, ...]
    min_time: float
    moved_bytes: int
    bandwidth_mb_s: float
    checksum: float


class ValidationStatus(Enum):
    PASSED = "PASSED"
    FAILED = "FAILED"
    REFUSED = "REFUSED"


@dataclass(frozen=True)
class ValidationVerdict:
    status: ValidationStatus
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status is ValidationStatus.PASSED


def _physical_threads(blocks: int) -> int:
    return min(blocks, numba.config.NUMBA_NUM_THREADS)


def _check_arena(config: RunConfig, arena: BufferArena) -> None:
    need = required_elements(config)
    if arena.large.size < need:
        raise EngineError(f"arena too small: {arena.large.size} < {need} elements")
    if arena.small.shape[1] < len(config.pattern):
        raise EngineError("arena small-buffer row is narrower than the pattern")
    if config.backend.parallel and arena.small.shape[0] < config.backend.threads:
        raise EngineError("arena has fewer rows than the configured thread count")


def _prefill_small(arena: BufferArena) -> None:
    rows, width = arena.small.shape
    lanes = np.arange(1, width + 1, dtype=np.float64)
    for t in range(rows):
        arena.small[t, :] = THREAD_TAG * t + lanes


def _index_rows(idx: np.ndarray, blocks: int) -> np.ndarray:
    """One padded private copy of the index buffer per thread block."""
    rows = _aligned_block(blocks, _padded_row_length(idx.size), dtype=np.int64)
    rows[:, : idx.size] = idx
    return rows


def _kernel_call(config: RunConfig, arena: BufferArena, idx: np.ndarray) -> Callable[[], None]:
    delta, count, n = config.delta, config.count, idx.size
    large, small = arena.large, arena.small
    if config.backend.parallel:
        blocks = config.backend.threads
        numba.set_num_threads(_physical_threads(blocks))
        rows = _index_rows(idx, blocks)
        if config.kernel is Kernel.GATHER:
            return lambda: kernels.gather_blocks(large, small, rows, n, delta, count, blocks)
        return lambda: kernels.scatter_blocks(large, small, rows, n, delta, count, blocks)
    row = small[0]
    if config.kernel is Kernel.GATHER:
        return lambda: kernels.gather_serial(large, row, idx, delta, count)
    return lambda: kernels.scatter_serial(large, row, idx, delta, count)


def _observe(config: RunConfig, arena: BufferArena, idx: np.ndarray) -> float:
    # Block 0 is never empty, so its row is always freshly written.
    if config.kernel is Kernel.GATHER:
        return float(arena.small[0, 0])
    return float(arena.large[idx[0]])


def _run(config: RunConfig, arena: BufferArena, timer: Callable[[], float],
         name: str | None) -> KernelResult:
    _check_arena(config, arena)
    idx = np.asarray(config.pattern.indices, dtype=np.int64)
    if config.kernel is Kernel.SCATTER:
        _prefill_small(arena)
    call = _kernel_call(config, arena, idx)
    call()  # warm-up pass: compilation, page faults, cache state
    times = []
    checksum = 0.0
    for _ in range(config.runs):
        t0 = timer()
        call()
        t1 = timer()
        dt = t1 - t0
        if dt <= 0.0:
            raise EngineError("timer did not advance across a timed run")
        times.append(dt)
        checksum += _observe(config, arena, idx)
    min_time = min(times)
    moved = config.moved_bytes
    return KernelResult(
        config=config,
        config_name=name or config.name or "cfg0",
        run_times=tuple(times),
        min_time=min_time,
        moved_bytes=moved,
        bandwidth_mb_s=moved / min_time / 1e6,
        checksum=checksum,
    )


def run_gather(config: RunConfig, arena: BufferArena,
               timer: Callable[[], float] = time.perf_counter, *,
               name: str | None = None) -> KernelResult:
    """Time ``config.runs`` gather passes; report the best."""
    if config.kernel is not Kernel.GATHER:
        raise EngineError("run_gather called with a non-gather configuration")
    return _run(config, arena, timer, name)


def run_scatter(config: RunConfig, arena: BufferArena,
                timer: Callable[[], float] = time.perf_counter, *,
                name: str | None = None) -> KernelResult:
    """Time ``config.runs`` scatter passes; report the best."""
    if config.kernel is not Kernel.SCATTER:
        raise EngineError("run_scatter called with a non-scatter configuration")
    return _run(config, arena, timer, name)


def sweep(batch: Sequence[RunConfig], *, arena: BufferArena | None = None,
          timer: Callable[[], float] = time.perf_counter) -> list[KernelResult]:
    """Execute a batch in order against one shared arena.

    Unnamed configs report as cfg0, cfg1, ... by batch position.
    """
    if not batch:
        return []
    plan = plan_arena(batch)
    if arena is None:
        arena = BufferArena.allocate(plan)
    elif not arena.fits(plan):
        raise EngineError("provided arena does not satisfy the batch plan")
    results = []
    for i, config in enumerate(batch):
        runner = run_gather if config.kernel is Kernel.GATHER else run_scatter
        results.append(runner(config, arena, timer, name=config.name or f"cfg{i}"))
    return results


def trace_gather(config: RunConfig, arena: BufferArena | None = None) -> np.ndarray:
    """Per-iteration gather snapshot: row i holds iteration i's gathered values.

    Untimed; allocates its own output.  Intended for equivalence checks at
    small iteration counts.
    """
    if config.kernel is not Kernel.GATHER:
        raise EngineError("trace_gather called with a non-gather configuration")
    if arena is None:
        arena = BufferArena.allocate(plan_arena([config]))
    _check_arena(config, arena)
    kernels.fill_identity(arena.large)
    idx = np.asarray(config.pattern.indices, dtype=np.int64)
    out = np.empty((config.count, idx.size), dtype=np.float64)
    if config.backend.parallel:
        blocks = config.backend.threads
        numba.set_num_threads(_physical_threads(blocks))
        rows = _index_rows(idx, blocks)
        kernels.gather_trace_blocks(arena.large, out, rows, idx.size,
                                    config.delta, config.count, blocks)
    else:
        kernels.gather_trace_serial(arena.large, out, idx, config.delta, config.count)
    return out


# --- validation -------------------------------------------------------------


def _block_bounds(count: int, nblocks: int) -> list[tuple[int, int]]:
    # Iteration i belongs to block i*nblocks//count; bounds mirror kernels.py.
    return [
        (
            (t * count + nblocks - 1) // nblocks,
            ((t + 1) * count + nblocks - 1) // nblocks,
        )
        for t in range(nblocks)
    ]


def _validate_gather(config: RunConfig, arena: BufferArena) -> ValidationVerdict:
    kernels.fill_identity(arena.large)
    idx = np.asarray(config.pattern.indices, dtype=np.int64)
    call = _kernel_call(config, arena, idx)
    call()
    blocks = config.backend.threads if config.backend.parallel else 1
    for t, (lo, hi) in enumerate(_block_bounds(config.count, blocks)):
        if lo == hi:
            continue
        expected = ((hi - 1) * config.delta + idx).astype(np.float64)
        got = arena.small[t, : idx.size]
        if not np.array_equal(got, expected):
            j = int(np.argmax(got != expected))
            return ValidationVerdict(
                ValidationStatus.FAILED,
                f"gather mismatch at block {t} lane {j}: "
                f"expected {expected[j]!r}, got {got[j]!r}",
            )
    return ValidationVerdict(ValidationStatus.PASSED)


def _scatter_reference(config: RunConfig, size: int) -> np.ndarray:
    """Replay the scatter in plain iteration order against an identity array."""
    idx = np.asarray(config.pattern.indices, dtype=np.int64)
    n = idx.size
    blocks = config.backend.threads if config.backend.parallel else 1
    ref = np.arange(size, dtype=np.float64)
    lane_values = np.arange(1, n + 1, dtype=np.float64)
    chunk = max(1, (1 << 20) // n)
    for start in range(0, config.count, chunk):
        i = np.arange(start, min(start + chunk, config.count), dtype=np.int64)
        owner = i * blocks // config.count
        addr = i[:, None] * config.delta + idx[None, :]
        vals = owner[:, None] * THREAD_TAG + lane_values[None, :]
        # NumPy applies fancy-index assignment in index order, so repeated
        # addresses within the flattened chunk resolve to the last write,
        # matching the kernels' in-order semantics.
        ref[addr.ravel()] = vals.ravel()
    return ref


def _validate_scatter(config: RunConfig, arena: BufferArena) -> ValidationVerdict:
    if (
        config.backend.parallel
        and config.count > 1
        and config.delta < extent(config.pattern)
    ):
        return ValidationVerdict(
            ValidationStatus.REFUSED,
            f"parallel scatter with delta {config.delta} < extent "
            f"{extent(config.pattern)} interleaves overlapping writes "
            f"nondeterministically; validate with the serial backend",
        )
    kernels.fill_identity(arena.large)
    idx = np.asarray(config.pattern.indices, dtype=np.int64)
    _prefill_small(arena)
    call = _kernel_call(config, arena, idx)
    call()
    span = required_elements(config)
    ref = _scatter_reference(config, span)
    got = arena.large[:span]
    if not np.array_equal(got, ref):
        k = int(np.argmax(got != ref))
        return ValidationVerdict(
            ValidationStatus.FAILED,
            f"scatter mismatch at element {k}: expected {ref[k]!r}, got {got[k]!r}",
        )
    return ValidationVerdict(ValidationStatus.PASSED)


def validate(config: RunConfig, arena: BufferArena) -> ValidationVerdict:
    """Run one untimed pass and check it element for element.

    Gather is always checkable.  Scatter is checked in serial mode and in
    parallel mode when iteration windows cannot overlap; otherwise the
    verdict is REFUSED with the reason.
    """
    _check_arena(config, arena)
    if config.kernel is Kernel.GATHER:
        return _validate_gather(config, arena)
    return _validate_scatter(config, arena)
