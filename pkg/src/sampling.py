"""
SKEWTHETA - Seeded Block Sampling
=================================

Shared randomness layer for every Monte Carlo sampler in the library.

Each sampler owns a named *stream*.  Its draws are produced in fixed-size
blocks of ``SAMPLE_BLOCK_SIZE`` rows; block b of stream s under master seed
S is generated by a PCG64 generator seeded from

    SeedSequence(entropy=S, spawn_key=(crc32(s), b))

so block contents depend only on (S, s, b).  Blocks may be evaluated by a
thread pool (``WORKERS > 1``): results are reassembled in block order, and the
output is byte-identical for any worker count.

Usage
-----
    from src.sampling import map_blocks

    def _eval(u: np.ndarray) -> np.ndarray:   # u has shape (rows, dims) in [0,1)
        return np.abs(np.exp(2j * np.pi * u[:, 0]))

    values = map_blocks(_eval, seed=0, stream="my_sampler", count=10_000, dims=2)
"""

from __future__ import annotations

import logging
import zlib
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from src.config import CONFIG as _cfg

log = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Module CONFIG
# ---------------------------------------------------------------------------

CONFIG: dict = {
    "SAMPLE_BLOCK_SIZE": _cfg.sample_block_size,  # rows per seeded block
    "WORKERS":           _cfg.workers,            # thread-pool size (1 = sequential)
    "BATCH_ELEMENTS":    _cfg.batch_elements,     # rows x terms per numpy batch
}


# ---------------------------------------------------------------------------
# Streams
# ---------------------------------------------------------------------------

def stream_tag(stream: str) -> int:
    """Stable 32-bit tag of a stream name (CRC32 of its UTF-8 bytes)."""
    return zlib.crc32(stream.encode("utf-8"))


def block_generator(seed: int, stream: str, block: int) -> np.random.Generator:
    """PCG64 generator for block ``block`` of ``stream`` under master ``seed``."""
    if seed < 0:
        raise ValueError(f"seed must be >= 0 (got {seed}).")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(stream_tag(stream), block))
    return np.random.Generator(np.random.PCG64(ss))


def _block_bounds(count: int, block_size: int) -> list[tuple[int, int]]:
    """Half-open row ranges [start, stop) of each block covering ``count`` rows."""
    return [
        (start, min(start + block_size, count))
        for start in range(0, count, block_size)
    ]


def uniform_block(seed: int, stream: str, block: int, rows: int, dims: int) -> np.ndarray:
    """``rows`` x ``dims`` uniform draws in [0, 1) for one block."""
    return block_generator(seed, stream, block).random((rows, dims))


# ---------------------------------------------------------------------------
# Batching
# ---------------------------------------------------------------------------

def row_batch(terms: int) -> int:
    """Rows per numpy batch so that rows * terms stays within BATCH_ELEMENTS."""
    return max(1, CONFIG["BATCH_ELEMENTS"] // max(1, terms))


def map_batched(fn: Callable[[np.ndarray], np.ndarray], rows: np.ndarray, terms: int) -> np.ndarray:
    """Apply ``fn`` to row slices of ``rows`` sized by :func:`row_batch`.

    ``fn`` maps an (r, dims) array to an (r,) array; results are concatenated.
    """
    step = row_batch(terms)
    if len(rows) <= step:
        return np.asarray(fn(rows))
    parts = [np.asarray(fn(rows[i:i + step])) for i in range(0, len(rows), step)]
    return np.concatenate(parts)


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def map_blocks(
    fn: Callable[[np.ndarray], np.ndarray],
    seed: int,
    stream: str,
    count: int,
    dims: int,
    workers: int | None = None,
) -> np.ndarray:
    """Draw ``count`` rows of ``dims`` uniforms block by block and map them.

    Args:
        fn:      Maps a (rows, dims) uniform array to a (rows,) result array.
        seed:    Master seed (>= 0).
        stream:  Stream name; distinct names give independent draws.
        count:   Total rows (>= 1).
        dims:    Uniform coordinates per row.
        workers: Thread-pool size; defaults to CONFIG["WORKERS"].

    Returns:
        Concatenated results of length ``count``, in block order.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1 (got {count}).")
    block_size = CONFIG["SAMPLE_BLOCK_SIZE"]
    bounds = _block_bounds(count, block_size)
    n_workers = CONFIG["WORKERS"] if workers is None else workers

    def _run(indexed: tuple[int, tuple[int, int]]) -> np.ndarray:
        b, (start, stop) = indexed
        return np.asarray(fn(uniform_block(seed, stream, b, stop - start, dims)))

    log.debug(
        "sampling stream",
        extra={"stream": stream, "seed": seed, "count": count, "blocks": len(bounds)},
    )

    if n_workers <= 1 or len(bounds) == 1:
        parts = [_run(item) for item in enumerate(bounds)]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            parts = list(pool.map(_run, enumerate(bounds)))
    out = np.concatenate(parts)
    if log.isEnabledFor(logging.DEBUG):
        log.debug(
            "stream mapped",
            extra={"stream": stream, "rows": out.shape[0],
                   "nonfinite": int(np.count_nonzero(~np.isfinite(out)))},
        )
    return out
