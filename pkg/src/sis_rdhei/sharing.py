# SPDX-License-Identifier: MIT

"""Block-based (r, n) Shamir sharing of images and recovery through block correlation.

Every pixel of a block is shared with the same random coefficients and the same
evaluation points, so each share pixel is the plain pixel XOR a per-(block, share)
mask. Recovering the first pixel of a block from ``r`` shares also yields the
coefficients, after which any single share of another pixel decrypts it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, List, Sequence, Tuple

import numpy as np
from loguru import logger

from . import gf256
from .errors import CorruptionError, DimensionError, ParameterError, RecoveryError
from .imagecore import GrayImage, check_block_size, from_blocks, to_blocks
from .keys import EncryptionKey, derive_x_table, sample_a_batch
from .models import ShareKind

MIN_BLOCKS = 4


@dataclass(frozen=True)
class SchemeParams:
    """Block side ``block`` (S) and threshold parameters ``r`` of ``n``."""

    block: int
    r: int
    n: int

    def __post_init__(self) -> None:
        if not 2 <= self.block <= 255:
            raise ParameterError(f"block side S must lie in [2, 255], got {self.block}")
        if not 2 <= self.r <= self.n <= 255:
            raise ParameterError(f"need 2 <= r <= n <= 255, got r={self.r}, n={self.n}")

    @property
    def bs(self) -> int:
        """Pixels per block (BS)."""
        return self.block * self.block

    def block_count(self, height: int, width: int) -> int:
        """BN for an ``height``×``width`` image; at least four blocks are required."""
        count = check_block_size(height, width, self.block)
        if count < MIN_BLOCKS:
            raise DimensionError(
                f"{height}x{width} image has {count} blocks of side {self.block}, "
                f"at least {MIN_BLOCKS} are required"
            )
        return count


@dataclass(frozen=True)
class ShareImage:
    share_id: int
    image: GrayImage
    kind: ShareKind = ShareKind.full


def share_block(block: Sequence[int], a: Sequence[int], xs: Sequence[int]) -> List[List[int]]:
    """Shares one block: ``out[k][j] = eval_poly((block[j], *a), xs[k])``."""
    if len(set(xs)) != len(xs) or 0 in xs:
        raise ParameterError(f"evaluation points must be distinct and nonzero: {list(xs)}")
    return [[gf256.eval_poly([p, *a], x) for p in block] for x in xs]


def recover_block(
    first_pixel_shares: Sequence[Tuple[int, int]],
    other_pixel_shares: Sequence[Tuple[int, int]],
    r: int,
) -> List[int]:
    """Recovers one block from ``r`` (or more) first-pixel shares and one share per other pixel.

    Arguments:
        first_pixel_shares: ``(x, y)`` pairs for the block's first pixel; at least ``r``.
        other_pixel_shares: One ``(x, y)`` pair for each remaining pixel, in raster order.
        r: Threshold.

    Returns:
        The plain block, first pixel first.

    Raises:
        ParameterError: Fewer than ``r`` first-pixel shares or invalid points.
        CorruptionError: Extra first-pixel shares disagree with the first ``r``.
    """
    if len(first_pixel_shares) < r:
        raise ParameterError(
            f"need at least r={r} first-pixel shares, got {len(first_pixel_shares)}"
        )
    coeffs = gf256.recover_coeffs(first_pixel_shares[:r], r)
    for x, y in first_pixel_shares[r:]:
        if gf256.eval_poly(coeffs, x) != y:
            raise CorruptionError(f"first-pixel share at x={x} disagrees with the other shares")
    mask_poly = [0, *coeffs[1:]]
    return [coeffs[0]] + [y ^ gf256.eval_poly(mask_poly, x) for x, y in other_pixel_shares]


def block_masks(a: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Per-block masks ``a(0)x ⊕ … ⊕ a(r-2)x^(r-1)``.

    ``a`` holds ``(B, r-1)`` coefficients and ``xs`` the ``(B, k)`` evaluation points.
    """
    a = np.asarray(a, dtype=np.uint8)
    poly = np.concatenate([np.zeros((a.shape[0], 1), dtype=np.uint8), a], axis=1)
    return gf256.eval_poly_batch(poly, xs)


def recover_blocks(
    first_xs: np.ndarray,
    first_ys: np.ndarray,
    other_xs: np.ndarray,
    other_ys: np.ndarray,
    r: int,
) -> np.ndarray:
    """Vectorised :func:`recover_block` over ``B`` blocks.

    Arguments:
        first_xs, first_ys: ``(B, k)`` first-pixel share points, ``k >= r``.
        other_xs, other_ys: ``(B, BS-1)`` one share per remaining pixel.
        r: Threshold.

    Returns:
        ``(B, BS)`` plain blocks.
    """
    first_xs = np.asarray(first_xs, dtype=np.uint8)
    first_ys = np.asarray(first_ys, dtype=np.uint8)
    if first_xs.shape[1] < r:
        raise ParameterError(f"need at least r={r} first-pixel shares, got {first_xs.shape[1]}")
    coeffs = gf256.recover_coeffs_batch(first_xs[:, :r], first_ys[:, :r])
    if first_xs.shape[1] > r:
        check = gf256.eval_poly_batch(coeffs, first_xs[:, r:])
        bad = np.flatnonzero(np.any(check != first_ys[:, r:], axis=1))
        if bad.size:
            raise CorruptionError(
                f"first-pixel shares disagree in {bad.size} block(s), first at block {int(bad[0])}"
            )
    plain_rest = np.asarray(other_ys, dtype=np.uint8) ^ block_masks(coeffs[:, 1:], other_xs)
    return np.concatenate([coeffs[:, :1], plain_rest], axis=1)


def share_image(
    img: GrayImage, params: SchemeParams, key: EncryptionKey, rng: Any
) -> List[ShareImage]:
    """Encrypts ``img`` into ``n`` full-size share images.

    Block ``i`` uses fresh coefficients from ``rng`` and the points
    ``derive_x(key, i, n)``; share ``k`` of block ``i`` lands at block ``i`` of share image ``k``.
    """
    bn = params.block_count(img.height, img.width)
    blocks = to_blocks(img.pixels, params.block)
    a = sample_a_batch(rng, params.r, bn)
    xs = derive_x_table(key, bn, params.n)
    masks = block_masks(a, xs)
    logger.debug("shared {} blocks of side {} into {} images", bn, params.block, params.n)
    return [
        ShareImage(
            k,
            GrayImage(
                from_blocks(blocks ^ masks[:, k : k + 1], img.height, img.width, params.block)
            ),
        )
        for k in range(params.n)
    ]


def check_share_ids(ids: Sequence[int], r: int, n: int) -> None:
    """Validates that ``ids`` are at least ``r`` distinct identities below ``n``."""
    if len(ids) < r:
        raise RecoveryError(f"need at least r={r} shares, got {len(ids)}")
    if len(set(ids)) != len(ids):
        raise RecoveryError(f"duplicate share identities: {sorted(ids)}")
    if any(not 0 <= i < n for i in ids):
        raise RecoveryError(f"share identities must lie in [0, {n}): {sorted(ids)}")


def recover_image(
    shares: Sequence[ShareImage], params: SchemeParams, key: EncryptionKey
) -> GrayImage:
    """Recovers the original image from ``r`` or more untouched full-size shares."""
    check_share_ids([s.share_id for s in shares], params.r, params.n)
    shapes = {s.image.pixels.shape for s in shares}
    if len(shapes) != 1 or any(s.kind != ShareKind.full for s in shares):
        raise RecoveryError(f"shares must be full-size images of one shape, got {shapes}")
    height, width = shapes.pop()
    bn = params.block_count(height, width)
    xs = derive_x_table(key, bn, params.n)
    ids = [s.share_id for s in shares]
    share_blocks = [to_blocks(s.image.pixels, params.block) for s in shares]
    first_ys = np.stack([b[:, 0] for b in share_blocks], axis=1)
    rest = share_blocks[0][:, 1:]
    rest_xs = np.broadcast_to(xs[:, ids[0] : ids[0] + 1], rest.shape)
    plain = recover_blocks(xs[:, ids], first_ys, rest_xs, rest, params.r)
    return GrayImage(from_blocks(plain, height, width, params.block))
