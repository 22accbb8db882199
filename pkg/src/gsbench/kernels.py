"""JIT-compiled inner loops.

The timed loops never allocate: the arena owns every buffer and every
index row is prepared before timing starts.  Parallel variants split the
iteration range into contiguous blocks: iteration i belongs to block
i*nblocks//count, so block t covers
[ceil(t*count/nblocks), ceil((t+1)*count/nblocks)).  Each block owns one
padded row of the small buffer and one padded private copy of the index
buffer, so blocks never share a cache line and the indices stay
cache-resident per core.  All loads land in caller-owned buffers, which
keeps them observable; the engine folds one element per run into a
printed checksum as a second elision guard.
"""

from __future__ import annotations

from numba import njit, prange


@njit(cache=True)
def fill_identity(buf):
    for k in range(buf.shape[0]):
        buf[k] = k


@njit(cache=True)
def gather_serial(large, small, idx, delta, count):
    n = idx.shape[0]
    for i in range(count):
        base = i * delta
        for j in range(n):
            small[j] = large[base + idx[j]]


@njit(parallel=True, nogil=True, cache=True)
def gather_blocks(large, small, idx_rows, n, delta, count, nblocks):
    for t in prange(nblocks):
        lo = (t * count + nblocks - 1) // nblocks
        hi = ((t + 1) * count + nblocks - 1) // nblocks
        for i in range(lo, hi):
            base = i * delta
            for j in range(n):
                small[t, j] = large[base + idx_rows[t, j]]


@njit(cache=True)
def scatter_serial(large, small, idx, delta, count):
    n = idx.shape[0]
    for i in range(count):
        base = i * delta
        for j in range(n):
            large[base + idx[j]] = small[j]


@njit(parallel=True, nogil=True, cache=True)
def scatter_blocks(large, small, idx_rows, n, delta, count, nblocks):
    # Stores from different blocks may land on the same element when
    # iteration windows overlap; each store is still an aligned 8-byte
    # write, so the final value is one of the written values.
    for t in prange(nblocks):
        lo = (t * count + nblocks - 1) // nblocks
        hi = ((t + 1) * count + nblocks - 1) // nblocks
        for i in range(lo, hi):
            base = i * delta
            for j in range(n):
                large[base + idx_rows[t, j]] = small[t, j]


@njit(cache=True)
def gather_trace_serial(large, out, idx, delta, count):
    n = idx.shape[0]
    for i in range(count):
        base = i * delta
        for j in range(n):
            out[i, j] = large[base + idx[j]]


@njit(parallel=True, nogil=True, cache=True)
def gather_trace_blocks(large, out, idx_rows, n, delta, count, nblocks):
    for t in prange(nblocks):
        lo = (t * count + nblocks - 1) // nblocks
        hi = ((t + 1) * count + nblocks - 1) // nblocks
        for i in range(lo, hi):
            base = i * delta
            for j in range(n):
                out[i, j] = large[base + idx_rows[t, j]]
