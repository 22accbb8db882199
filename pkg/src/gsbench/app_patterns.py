"""Index patterns traced from real application kernels.

Each entry is a 16-element index buffer, the per-iteration base advance
observed in the source kernel, and a coarse shape tag.  The buffers come
from PENNANT (hydrodynamics), LULESH (shock hydro), Nekbone (spectral
element), and AMG (algebraic multigrid).  tests/data carries an
independent transcription that these tuples are checked against byte for
byte.
"""

from __future__ import annotations

from dataclasses import dataclass

from .planner import Kernel


def _strided(stride: int) -> tuple[int, ...]:
    return tuple(j * stride for j in range(16))


# Four nodes read four times each (quad corner broadcast).
_QUAD_BCAST = (0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3)
# Corner traversal of four quads, rotated one step.
_QUAD_ROT = (4, 8, 12, 0, 20, 24, 28, 16, 36, 40, 44, 32, 52, 56, 60, 48)
# Edge-neighbour pairs across a mesh row of width 482.
_EDGE_PAIRS = (482, 0, 2, 484, 484, 2, 4, 486, 486, 4, 6, 488, 488, 6, 8, 490)
# Pairs of doubled node indices, rotated within groups of four.
_DBL_ROT = (6, 0, 2, 4, 14, 8, 10, 12, 22, 16, 18, 20, 30, 24, 26, 28)


@dataclass(frozen=True)
class AppPattern:
    name: str
    kernel: Kernel
    indices: tuple[int, ...]
    delta: int
    category: str | None = None


_G = Kernel.GATHER
_S = Kernel.SCATTER

APP_PATTERNS: tuple[AppPattern, ...] = (
    AppPattern("PENNANT-G0", _G,
               (2, 484, 482, 0, 4, 486, 484, 2, 6, 488, 486, 4, 8, 490, 488, 6), 2),
    AppPattern("PENNANT-G1", _G,
               (0, 2, 484, 482, 2, 4, 486, 484, 4, 6, 488, 486, 6, 8, 490, 488), 2),
    AppPattern("PENNANT-G2", _G, _strided(4), 2, "stride-4"),
    AppPattern("PENNANT-G3", _G, _QUAD_ROT, 2),
    AppPattern("PENNANT-G4", _G, _QUAD_BCAST, 4, "broadcast"),
    AppPattern("PENNANT-G5", _G, _QUAD_ROT, 4),
    AppPattern("PENNANT-G6", _G, _EDGE_PAIRS, 480),
    AppPattern("PENNANT-G7", _G, _EDGE_PAIRS, 482),
    AppPattern("PENNANT-G8", _G,
               (2, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0), 129608),
    AppPattern("PENNANT-G9", _G, _QUAD_BCAST, 388852, "broadcast"),
    AppPattern("PENNANT-G10", _G, _QUAD_BCAST, 388848, "broadcast"),
    AppPattern("PENNANT-G11", _G, _QUAD_BCAST, 388848, "broadcast"),
    AppPattern("PENNANT-G12", _G, _DBL_ROT, 518408),
    AppPattern("PENNANT-G13", _G, _DBL_ROT, 518408),
    AppPattern("PENNANT-G14", _G, _DBL_ROT, 1036816),
    AppPattern("PENNANT-G15", _G, _QUAD_BCAST, 1882384, "broadcast"),
    AppPattern("LULESH-G0", _G, _strided(1), 1, "stride-1"),
    AppPattern("LULESH-G1", _G, _strided(1), 8, "stride-1"),
    AppPattern("LULESH-G2", _G, _strided(8), 1, "stride-8"),
    AppPattern("LULESH-G3", _G, _strided(24), 8, "stride-24"),
    AppPattern("LULESH-G4", _G, _strided(24), 4, "stride-24"),
    AppPattern("LULESH-G5", _G, _strided(24), 1, "stride-24"),
    AppPattern("LULESH-G6", _G, _strided(24), 8, "stride-24"),
    AppPattern("LULESH-G7", _G, _strided(1), 41, "stride-1"),
    AppPattern("NEKBONE-G0", _G, _strided(6), 3, "stride-6"),
    AppPattern("NEKBONE-G1", _G, _strided(6), 8, "stride-6"),
    AppPattern("NEKBONE-G2", _G, _strided(6), 8, "stride-6"),
    AppPattern("AMG-G0", _G,
               (1333, 0, 1, 36, 37, 72, 73, 1296, 1297, 1332, 1368, 1369,
                2592, 2593, 2628, 2629), 1, "mostly-stride-1"),
    AppPattern("AMG-G1", _G,
               (1333, 0, 1, 2, 36, 37, 38, 72, 73, 74, 1296, 1297, 1298,
                1332, 1334, 1368), 1, "mostly-stride-1"),
    AppPattern("PENNANT-S0", _S, _strided(4), 1, "stride-4"),
    AppPattern("LULESH-S0", _S, _strided(8), 1, "stride-8"),
    AppPattern("LULESH-S1", _S, _strided(24), 8, "stride-24"),
    AppPattern("LULESH-S2", _S, _strided(24), 1, "stride-24"),
    AppPattern("LULESH-S3", _S, _strided(24), 0, "stride-24"),
)


def render_table() -> str:
    """One line per pattern: name|kernel|delta|comma-joined indices."""
    lines = [
        f"{p.name}|{p.kernel.value}|{p.delta}|{','.join(str(i) for i in p.indices)}"
        for p in APP_PATTERNS
    ]
    return "\n".join(lines) + "\n"
