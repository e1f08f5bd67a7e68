# SPDX-License-Identifier: MIT

"""Which share pixels each image may overwrite, and which blocks it may shrink.

Both decisions use one sliding-window rule: index ``i`` (a non-first pixel for
embedding, a block for shrinking) belongs to image ``ID`` iff
``(ID - i) mod n`` lies in ``[0, r - 2]``. Every index therefore lands in exactly
``r - 1`` images and is kept intact in the other ``n - r + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class EmbedMap:
    """Ascending EP indices image ``share_id`` may overwrite.

    EP indices number the non-first pixels of all blocks in raster block order.
    """

    share_id: int
    indices: np.ndarray

    def __len__(self) -> int:
        return int(self.indices.size)


def _check(share_id: int, r: int, n: int) -> None:
    if not 2 <= r <= n:
        raise ParameterError(f"need 2 <= r <= n, got r={r}, n={n}")
    if not 0 <= share_id < n:
        raise ParameterError(f"share identity must lie in [0, {n}), got {share_id}")


def embeddable(share_id: int, i: int, r: int, n: int) -> bool:
    _check(share_id, r, n)
    return (share_id - i) % n <= r - 2


def _window_mask(share_id: int, count: int, r: int, n: int) -> np.ndarray:
    return (share_id - np.arange(count, dtype=np.int64)) % n <= r - 2


def embed_indices(share_id: int, block_count: int, side: int, r: int, n: int) -> EmbedMap:
    _check(share_id, r, n)
    total = block_count * (side * side - 1)
    return EmbedMap(share_id, np.flatnonzero(_window_mask(share_id, total, r, n)))


def walk_embed_indices(
    share_id: int, block_count: int, side: int, r: int, n: int
) -> Iterator[int]:
    """Enumerates embeddable indices window by window instead of testing each index.

    Windows of ``r - 1`` consecutive indices start at ``ID - r + 2 + k·n``; the
    first one may begin below zero and is clipped.
    """
    _check(share_id, r, n)
    total = block_count * (side * side - 1)
    start = share_id - r + 2
    while start < total:
        for i in range(max(start, 0), min(start + r - 1, total)):
            yield i
        start += n


def retention_flags(share_id: int, block_count: int, r: int, n: int) -> np.ndarray:
    """``fp(i, ID)`` for every block: True where only the first pixel is retained."""
    _check(share_id, r, n)
    return _window_mask(share_id, block_count, r, n)


def count_fp(share_id: int, block_count: int, r: int, n: int) -> int:
    _check(share_id, r, n)
    cycles, rest = divmod(block_count, n)
    tail = sum(1 for i in range(rest) if (share_id - i) % n <= r - 2)
    return cycles * (r - 1) + tail


def count_wb(share_id: int, block_count: int, r: int, n: int) -> int:
    return block_count - count_fp(share_id, block_count, r, n)


def capacity_balance(block_count: int, side: int, r: int, n: int) -> int:
    """Largest difference in embeddable pixel counts between any two images."""
    counts = [len(embed_indices(k, block_count, side, r, n)) for k in range(n)]
    return max(counts) - min(counts)


def ep_to_pixel(indices: np.ndarray, side: int, width: int) -> np.ndarray:
    """Flat raster positions of EP indices in an image of ``width`` columns."""
    indices = np.asarray(indices, dtype=np.int64)
    per_block = side * side - 1
    block, j = np.divmod(indices, per_block)
    j = j + 1
    per_row = width // side
    row = (block // per_row) * side + j // side
    col = (block % per_row) * side + j % side
    return row * width + col
