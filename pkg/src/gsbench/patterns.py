"""Index pattern grammar, generators, and the parsed pattern type.

A pattern is a short buffer of non-negative element offsets.  It can be
written out literally as a comma-separated list, or produced by one of four
generators:

    UNIFORM:N:STRIDE        N offsets 0, stride, 2*stride, ...
    MS1:N:BREAK:GAP         stride-1 run with one jump of GAP at BREAK
    LAPLACIAN:D:L:SIZE      D-dimensional stencil with branch length L
    RANDOM:N:BOUND:SEED     N draws from [0, BOUND), NumPy PCG64 stream

Generator keywords are case-sensitive.  A comma-separated list of decimal
integers is accepted anywhere a generator expression is.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import PatternError

_U64_MAX = 2**64 - 1

_INT_RE = re.compile(r"\d+")


@dataclass(frozen=True)
class UniformStride:
    n: int
    stride: int


@dataclass(frozen=True)
class MostlyStride1:
    n: int
    break_pos: int
    gap: int


@dataclass(frozen=True)
class Laplacian:
    dims: int
    branch_len: int
    size: int


@dataclass(frozen=True)
class RandomIndices:
    n: int
    bound: int
    seed: int


@dataclass(frozen=True)
class Custom:
    """Marker for a pattern given as an explicit index list."""


Descriptor = Union[UniformStride, MostlyStride1, Laplacian, RandomIndices, Custom]


@dataclass(frozen=True)
class IndexPattern:
    """An immutable index buffer plus the descriptor it was built from.

    ``label`` is a display name only and never participates in equality.
    """

    indices: tuple[int, ...]
    descriptor: Descriptor
    label: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if not self.indices:
            raise PatternError("pattern must contain at least one index")
        for pos, idx in enumerate(self.indices):
            if idx < 0:
                raise PatternError(f"index at position {pos} is negative: {idx}")
        if max(self.indices) >= _U64_MAX:
            raise PatternError("pattern extent does not fit in 64 bits")

    def __len__(self) -> int:
        return len(self.indices)


def extent(pattern: IndexPattern) -> int:
    """Number of elements an iteration at base 0 touches: max index + 1."""
    return max(pattern.indices) + 1


def _check_range(value: int, name: str, lo: int, hi: int = _U64_MAX) -> int:
    if not lo <= value <= hi:
        raise PatternError(f"{name} out of range: {value} (expected {lo}..{hi})")
    return value


def gen_uniform(n: int, stride: int) -> IndexPattern:
    """Constant-stride buffer of ``n`` offsets: 0, stride, ..., (n-1)*stride."""
    _check_range(n, "N", 1)
    _check_range(stride, "STRIDE", 1)
    if (n - 1) * stride >= _U64_MAX:
        raise PatternError(f"UNIFORM extent overflows 64 bits: N={n} STRIDE={stride}")
    return IndexPattern(
        indices=tuple(j * stride for j in range(n)),
        descriptor=UniformStride(n, stride),
    )


def gen_ms1(n: int, break_pos: int, gap: int) -> IndexPattern:
    """Stride-1 run of ``n`` offsets with one forward jump of ``gap``.

    The jump replaces the +1 step at position ``break_pos``, so exactly one
    consecutive difference equals ``gap`` and all others equal 1.
    """
    _check_range(n, "N", 2)
    _check_range(break_pos, "BREAK", 1, n - 1)
    _check_range(gap, "GAP", 1)
    if n - 2 + gap >= _U64_MAX:
        raise PatternError(f"MS1 extent overflows 64 bits: N={n} GAP={gap}")
    out = [0]
    for j in range(1, n):
        out.append(out[-1] + (gap if j == break_pos else 1))
    return IndexPattern(indices=tuple(out), descriptor=MostlyStride1(n, break_pos, gap))


def gen_laplacian(dims: int, branch_len: int, size: int) -> IndexPattern:
    """Offsets of a ``dims``-dimensional Laplacian-style stencil.

    The buffer holds the centre point and ``branch_len`` points out along
    both directions of each axis of a ``size``-wide grid, shifted so the
    smallest offset is 0.  Coinciding points are kept, so the length is
    always 2*dims*branch_len + 1.
    """
    _check_range(dims, "D", 1)
    _check_range(branch_len, "L", 1)
    _check_range(size, "SIZE", 1)
    shift = branch_len * size ** (dims - 1)
    if shift >= _U64_MAX or 2 * shift >= _U64_MAX:
        raise PatternError(
            f"LAPLACIAN extent overflows 64 bits: D={dims} L={branch_len} SIZE={size}"
        )
    offs = [0]
    for axis in range(dims):
        step = size**axis
        for k in range(1, branch_len + 1):
            offs.append(k * step)
            offs.append(-k * step)
    offs.sort()
    return IndexPattern(
        indices=tuple(o + shift for o in offs),
        descriptor=Laplacian(dims, branch_len, size),
    )


def gen_random(n: int, bound: int, seed: int) -> IndexPattern:
    """``n`` offsets drawn uniformly from [0, bound) by a NumPy PCG64 stream.

    The same (n, bound, seed) triple always yields the same buffer.
    """
    _check_range(n, "N", 1)
    _check_range(bound, "BOUND", 1)
    _check_range(seed, "SEED", 0)
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = rng.integers(0, bound, size=n, dtype=np.uint64)
    return IndexPattern(
        indices=tuple(int(d) for d in draws),
        descriptor=RandomIndices(n, bound, seed),
    )


def custom_pattern(indices, label: str | None = None) -> IndexPattern:
    """Wrap an explicit index sequence; validation as for parsed lists."""
    return IndexPattern(indices=tuple(indices), descriptor=Custom(), label=label)


def _parse_fields(text: str, keyword: str, names: tuple[str, ...]) -> list[int]:
    parts = text.split(":")[1:]
    if len(parts) != len(names):
        raise PatternError(
            f"{keyword} takes {len(names)} fields ({':'.join(names)}), got {len(parts)}"
        )
    values = []
    for name, part in zip(names, parts):
        if not _INT_RE.fullmatch(part):
            raise PatternError(f"{keyword} field {name} is not a non-negative integer: {part!r}")
        values.append(int(part))
    return values


def parse_pattern(text: str) -> IndexPattern:
    """Parse generator syntax or a comma-separated index list."""
    body = text.strip()
    if not body:
        raise PatternError("empty pattern")
    head = body.split(":", 1)[0]
    if head == "UNIFORM":
        n, stride = _parse_fields(body, "UNIFORM", ("N", "STRIDE"))
        return gen_uniform(n, stride)
    if head == "MS1":
        n, break_pos, gap = _parse_fields(body, "MS1", ("N", "BREAK", "GAP"))
        return gen_ms1(n, break_pos, gap)
    if head == "LAPLACIAN":
        dims, branch_len, size = _parse_fields(body, "LAPLACIAN", ("D", "L", "SIZE"))
        return gen_laplacian(dims, branch_len, size)
    if head == "RANDOM":
        n, bound, seed = _parse_fields(body, "RANDOM", ("N", "BOUND", "SEED"))
        return gen_random(n, bound, seed)
    indices = []
    for pos, token in enumerate(tok.strip() for tok in body.split(",")):
        if not _INT_RE.fullmatch(token):
            raise PatternError(f"invalid index token at position {pos}: {token!r}")
        indices.append(int(token))
    return custom_pattern(indices)


def render_pattern(pattern: IndexPattern) -> str:
    """Inverse of :func:`parse_pattern`: text that parses back to ``pattern``."""
    d = pattern.descriptor
    if isinstance(d, UniformStride):
        return f"UNIFORM:{d.n}:{d.stride}"
    if isinstance(d, MostlyStride1):
        return f"MS1:{d.n}:{d.break_pos}:{d.gap}"
    if isinstance(d, Laplacian):
        return f"LAPLACIAN:{d.dims}:{d.branch_len}:{d.size}"
    if isinstance(d, RandomIndices):
        return f"RANDOM:{d.n}:{d.bound}:{d.seed}"
    return ",".join(str(i) for i in pattern.indices)
