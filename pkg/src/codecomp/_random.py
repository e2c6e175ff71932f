"""Reproducible Gaussian sampling split into fixed chunks.

The sample index space ``0 .. total-1`` is cut into chunks of ``CHUNK``
samples.  Chunk ``c`` draws from a Philox generator keyed by ``(seed, c)``,
so its samples do not depend on how many workers evaluate the chunks or in
what order.
"""

from __future__ import annotations

import secrets
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np

CHUNK = 1 << 16
_MASK64 = (1 << 64) - 1

T = TypeVar("T")


def fresh_seed() -> int:
    return secrets.randbits(63)


def chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    if seed < 0:
        raise ValueError("seed must be non-negative")
    key = np.array([seed & _MASK64, chunk & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def box_muller(gen: np.random.Generator, shape) -> np.ndarray:
    """Standard normals from pairs of uniforms."""
    size = int(np.prod(shape))
    half = (size + 1) // 2
    u1 = 1.0 - gen.random(half)  # (0, 1]
    u2 = gen.random(half)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:size]
    return z.reshape(shape)


def chunk_sizes(total: int, chunk: int = CHUNK) -> list[int]:
    full, rest = divmod(total, chunk)
    return [chunk] * full + ([rest] if rest else [])


def map_chunks(
    fn: Callable[[np.random.Generator, int], T],
    seed: int,
    total: int,
    workers: int = 1,
    chunk: int = CHUNK,
) -> list[T]:
    """Evaluate ``fn(generator, count)`` for every chunk, in chunk order."""
    sizes = chunk_sizes(total, chunk)

    def run(c: int) -> T:
        return fn(chunk_generator(seed, c), sizes[c])

    if workers <= 1 or len(sizes) <= 1:
        return [run(c) for c in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, range(len(sizes))))
