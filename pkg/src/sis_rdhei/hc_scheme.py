# SPDX-License-Identifier: MIT

"""High-capacity scheme: embedding space allocated directly inside full-size shares.

Owner:
    Shares the image, then writes S, r, n and ID into the first pixels of blocks
    0..3 of each share after moving those four first-pixel shares into the first
    four embeddable pixels of the same share.

Data hider:
    Reads the parameters, rebuilds the embeddable set and writes a 32-bit
    big-endian length followed by the enciphered payload, block by block and
    bit plane by bit plane (LSB plane first).

Receiver:
    Extracts from a single share with K_D, or recovers the image from any r shares
    with K_E, taking every non-first pixel from a share where it was not embeddable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, List, Sequence, Tuple

import numpy as np
from loguru import logger

from .bitstream import BitCursor
from .errors import (
    CapacityError,
    DimensionError,
    ExtractionError,
    ParameterError,
    RecoveryError,
)
from .imagecore import GrayImage, block_view, from_blocks, to_blocks
from .keys import DataHidingKey, EncryptionKey, derive_x_table, payload_cipher
from .sharing import SchemeParams, check_share_ids, recover_blocks, share_image
from .space_alloc import EmbedMap, embed_indices, ep_to_pixel

HEADER_PIXELS = 4
LENGTH_BITS = 32


def _first_pixel_flat(blocks: Sequence[int], side: int, width: int) -> np.ndarray:
    views = (block_view(i, side, width) for i in blocks)
    return np.array([view.first_pixel(width) for view in views], dtype=np.int64)


@dataclass(frozen=True)
class HcShareFile:
    """A full-size share carrying its parameters in the first pixels of blocks 0..3."""

    image: GrayImage
    params: SchemeParams
    share_id: int

    @classmethod
    def parse(cls, img: GrayImage) -> "HcShareFile":
        """Reads S, r, n and ID from the share's pixels.

        Raises:
            ExtractionError: The in-band parameters are invalid for this image.
        """
        pixels = img.pixels
        side = int(pixels[0, 0])
        try:
            if side < 2 or img.height % side or img.width % side:
                raise DimensionError(f"block side {side} does not tile {img.height}x{img.width}")
            header = pixels.ravel()[_first_pixel_flat([1, 2, 3], side, img.width)]
            r, n, share_id = (int(v) for v in header)
            params = SchemeParams(side, r, n)
            params.block_count(img.height, img.width)
        except (ParameterError, IndexError) as exc:
            raise ExtractionError(f"malformed share header: {exc}") from exc
        if not 0 <= share_id < n:
            raise ExtractionError(f"share identity {share_id} out of range for n={n}")
        return cls(img, params, share_id)

    @property
    def block_count(self) -> int:
        return self.params.block_count(self.image.height, self.image.width)

    def embed_map(self) -> EmbedMap:
        p = self.params
        return embed_indices(self.share_id, self.block_count, p.block, p.r, p.n)

    def header_positions(self) -> np.ndarray:
        """Flat positions holding the four relocated first-pixel shares."""
        indices = self.embed_map().indices[:HEADER_PIXELS]
        return ep_to_pixel(indices, self.params.block, self.image.width)

    def cursor(self) -> BitCursor:
        """Bit cursor over the payload area (embeddable pixels after the four relocated ones)."""
        indices = self.embed_map().indices[HEADER_PIXELS:]
        positions = ep_to_pixel(indices, self.params.block, self.image.width)
        groups = indices // (self.params.bs - 1)
        return BitCursor.plane_major(self.image.pixels.ravel(), positions, groups)


@dataclass(frozen=True)
class HcCapacity:
    """Closed-form rate plus per-image gross (all embeddable pixels) and net payload bits."""

    er_bpp: float
    gross_bits: Tuple[int, ...]
    net_bits: Tuple[int, ...]


def embedding_rate(params: SchemeParams) -> float:
    """(BS−1)(r−1)·8 / (BS·n) bits per original pixel."""
    return (params.bs - 1) * (params.r - 1) * 8 / (params.bs * params.n)


def hc_capacity(params: SchemeParams, height: int, width: int) -> HcCapacity:
    bn = params.block_count(height, width)
    pixels = [len(embed_indices(k, bn, params.block, params.r, params.n)) for k in range(params.n)]
    return HcCapacity(
        embedding_rate(params),
        tuple(8 * c for c in pixels),
        tuple(max(0, 8 * (c - HEADER_PIXELS) - LENGTH_BITS) for c in pixels),
    )


def hc_encrypt(
    img: GrayImage, params: SchemeParams, key: EncryptionKey, rng: Any
) -> List[HcShareFile]:
    """Shares ``img`` and stores the parameters in-band in every share.

    Raises:
        ParameterError: Some share has fewer than four embeddable pixels.
    """
    bn = params.block_count(img.height, img.width)
    for k in range(params.n):
        if len(embed_indices(k, bn, params.block, params.r, params.n)) < HEADER_PIXELS:
            raise ParameterError(
                f"share {k} has fewer than {HEADER_PIXELS} embeddable pixels for {params}"
            )
    firsts = _first_pixel_flat(range(HEADER_PIXELS), params.block, img.width)
    files = []
    for share in share_image(img, params, key, rng):
        flat = share.image.pixels.ravel().copy()
        emap = embed_indices(share.share_id, bn, params.block, params.r, params.n)
        relocated = ep_to_pixel(emap.indices[:HEADER_PIXELS], params.block, img.width)
        flat[relocated] = flat[firsts]
        flat[firsts] = (params.block, params.r, params.n, share.share_id)
        files.append(HcShareFile(GrayImage(flat.reshape(img.pixels.shape)), params, share.share_id))
    logger.info(
        "encrypted {}x{} image into {} high-capacity shares", img.height, img.width, params.n
    )
    return files


def hc_embed(share: HcShareFile, payload: bytes, key: DataHidingKey) -> HcShareFile:
    """Hides ``payload`` (length-prefixed, enciphered with K_D) in ``share``.

    Raises:
        CapacityError: The framed payload exceeds the share's payload area.
    """
    cursor = share.cursor()
    needed = LENGTH_BITS + 8 * len(payload)
    if needed > cursor.capacity:
        raise CapacityError(
            f"payload needs {needed} bits, share {share.share_id} offers {cursor.capacity}"
        )
    cursor.write_uint(len(payload), LENGTH_BITS)
    cursor.write_bytes(payload_cipher(key, payload))
    logger.debug("embedded {} bytes into share {}", len(payload), share.share_id)
    marked = GrayImage(cursor.pixels.reshape(share.image.pixels.shape))
    return HcShareFile(marked, share.params, share.share_id)


def hc_extract(marked: HcShareFile, key: DataHidingKey) -> bytes:
    """Reads the hidden payload back from one marked share."""
    cursor = marked.cursor()
    if cursor.capacity < LENGTH_BITS:
        raise ExtractionError("share too small to hold a length header")
    length = cursor.read_uint(LENGTH_BITS)
    if 8 * length > cursor.remaining:
        raise ExtractionError(
            f"length header claims {length} bytes, only {cursor.remaining // 8} available"
        )
    return payload_cipher(key, cursor.read_bytes(length))


def _check_consistent(shares: Sequence[HcShareFile]) -> SchemeParams:
    params = {s.params for s in shares}
    shapes = {s.image.pixels.shape for s in shares}
    if len(params) != 1 or len(shapes) != 1:
        raise RecoveryError(f"shares disagree on parameters {params} or shape {shapes}")
    found = params.pop()
    check_share_ids([s.share_id for s in shares], found.r, found.n)
    return found


def hc_recover(shares: Sequence[HcShareFile], key: EncryptionKey) -> GrayImage:
    """Recovers the original image from ``r`` or more (marked or unmarked) shares.

    Raises:
        RecoveryError: Too few shares, duplicate identities or mismatched parameters.
        CorruptionError: Extra first-pixel shares disagree.
    """
    if not shares:
        raise RecoveryError("no shares given")
    params = _check_consistent(shares)
    height, width = shares[0].image.pixels.shape
    bn = params.block_count(height, width)
    ids = np.array([s.share_id for s in shares], dtype=np.int64)
    firsts = _first_pixel_flat(range(HEADER_PIXELS), params.block, width)

    blocks = []
    for share in shares:
        flat = share.image.pixels.ravel().copy()
        flat[firsts] = flat[share.header_positions()]
        blocks.append(to_blocks(flat.reshape(height, width), params.block))

    xs = derive_x_table(key, bn, params.n)
    first_ys = np.stack([b[:, 0] for b in blocks], axis=1)

    per_block = params.bs - 1
    ep = np.arange(bn * per_block, dtype=np.int64)
    retained = (ids[:, None] - ep[None, :]) % params.n > params.r - 2
    source = np.argmax(retained, axis=0)
    rest = np.stack([b[:, 1:].ravel() for b in blocks], axis=0)
    other_ys = rest[source, ep].reshape(bn, per_block)
    block_of = ep // per_block
    other_xs = xs[block_of, ids[source]].reshape(bn, per_block)

    plain = recover_blocks(xs[:, ids], first_ys, other_xs, other_ys, params.r)
    logger.info("recovered {}x{} image from shares {}", height, width, ids.tolist())
    return GrayImage(from_blocks(plain, height, width, params.block))
