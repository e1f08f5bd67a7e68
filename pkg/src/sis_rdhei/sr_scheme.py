# SPDX-License-Identifier: MIT

"""Size-reduced scheme: shares shrink to their retained blocks and pixels.

Each share is laid out block by block (raster order inside each block) as
``[whole blocks | first pixels | random filler]``, packed into the smallest square
of whole blocks that holds them, and ends with an 8-pixel trailer in the last row:
S, r, n, ID and the original height and width as 16-bit big-endian values.

A data hider predicts the whole blocks with MED, codes the errors, and reuses the
freed pixels plus the filler, MSB first, for ``[SI | CB | length | payload]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import isqrt
from typing import Any, List, Sequence, Tuple

import numpy as np
from loguru import logger

from .bitstream import BitCursor
from .codec import (
    ac_decode,
    ac_encode,
    errors_batch,
    reconstruct_batch,
    si_pack,
    si_size,
    si_unpack,
)
from .errors import (
    CapacityError,
    CodecError,
    CorruptionError,
    ExtractionError,
    ParameterError,
    RecoveryError,
    VacatingError,
)
from .imagecore import GrayImage, block_order, from_blocks, to_blocks
from .keys import DataHidingKey, EncryptionKey, derive_x_table, payload_cipher
from .models import ShareKind
from .sharing import SchemeParams, check_share_ids, recover_blocks, share_image
from .space_alloc import count_fp, retention_flags

TRAILER_PIXELS = 8
LENGTH_BITS = 32
MAX_DIMENSION = 0xFFFF


@dataclass(frozen=True)
class SrLayout:
    """Geometry of one reduced share."""

    params: SchemeParams
    height: int
    width: int
    share_id: int
    block_count: int
    fp: int
    wb: int
    rows: int
    cols: int

    @property
    def tp(self) -> int:
        """Pixels carrying share data (first pixels plus whole blocks)."""
        return self.fp + self.params.bs * self.wb

    @property
    def filler(self) -> int:
        return self.rows * self.cols - self.tp - TRAILER_PIXELS

    @cached_property
    def order(self) -> np.ndarray:
        """Stream position -> flat pixel position."""
        return block_order(self.rows, self.cols, self.params.block)

    def trailer_positions(self) -> np.ndarray:
        start = (self.rows - 1) * self.cols + self.cols - TRAILER_PIXELS
        return np.arange(start, start + TRAILER_PIXELS, dtype=np.int64)

    def trailer_values(self) -> Tuple[int, ...]:
        p = self.params
        return (
            p.block,
            p.r,
            p.n,
            self.share_id,
            self.height >> 8,
            self.height & 0xFF,
            self.width >> 8,
            self.width & 0xFF,
        )

    def trailer_stream(self) -> np.ndarray:
        """Stream indices of the trailer pixels, without building :attr:`order`."""
        side = self.params.block
        row = self.rows - 1
        cols = np.arange(self.cols - TRAILER_PIXELS, self.cols, dtype=np.int64)
        block = (row // side) * (self.cols // side) + cols // side
        return block * self.params.bs + (row % side) * side + cols % side

    def embeddable_positions(self) -> np.ndarray:
        """Flat positions of the embeddable stream: freed whole-block pixels, then filler."""
        bs = self.params.bs
        freed = (np.arange(self.wb, dtype=np.int64)[:, None] * bs + np.arange(1, bs)).ravel()
        filler = np.setdiff1d(
            np.arange(self.tp, self.rows * self.cols, dtype=np.int64), self.trailer_stream()
        )
        return self.order[np.concatenate([freed, filler])]


def sr_layout(params: SchemeParams, height: int, width: int, share_id: int) -> SrLayout:
    """Computes the reduced share geometry for image ``share_id``.

    The side is the smallest multiple of S whose square holds TP pixels (and at
    least 8 columns); rows grow by one block row while the trailer would overlap data.
    """
    if not 0 <= share_id < params.n:
        raise ParameterError(f"share identity must lie in [0, {params.n}), got {share_id}")
    if height > MAX_DIMENSION or width > MAX_DIMENSION:
        raise ParameterError(f"{height}x{width} exceeds the 16-bit trailer fields")
    bn = params.block_count(height, width)
    fp = count_fp(share_id, bn, params.r, params.n)
    wb = bn - fp
    tp = fp + params.bs * wb
    needed = -(-tp // params.bs)
    side_blocks = max(isqrt(needed - 1) + 1, -(-TRAILER_PIXELS // params.block))
    side = side_blocks * params.block
    layout = SrLayout(params, height, width, share_id, bn, fp, wb, side, side)
    while layout.trailer_stream().min() < tp:
        rows = layout.rows + params.block
        layout = SrLayout(params, height, width, share_id, bn, fp, wb, rows, side)
    return layout


@dataclass(frozen=True)
class SrShareFile:
    """A reduced share image together with the geometry its trailer describes."""

    image: GrayImage
    layout: SrLayout

    @property
    def share_id(self) -> int:
        return self.layout.share_id

    @property
    def params(self) -> SchemeParams:
        return self.layout.params

    @property
    def kind(self) -> ShareKind:
        return ShareKind.reduced

    @classmethod
    def parse(cls, img: GrayImage) -> "SrShareFile":
        """Reads the trailer and checks it against the image geometry.

        Raises:
            ExtractionError: Trailer missing, invalid or inconsistent with the image size.
        """
        if img.width < TRAILER_PIXELS:
            raise ExtractionError(f"{img.height}x{img.width} image cannot hold a trailer")
        t = [int(v) for v in img.pixels[-1, -TRAILER_PIXELS:]]
        height, width = (t[4] << 8) | t[5], (t[6] << 8) | t[7]
        try:
            layout = sr_layout(SchemeParams(t[0], t[1], t[2]), height, width, t[3])
        except ParameterError as exc:
            raise ExtractionError(f"malformed trailer {t}: {exc}") from exc
        if (layout.rows, layout.cols) != img.pixels.shape:
            raise ExtractionError(
                f"trailer describes a {layout.rows}x{layout.cols} share, file is "
                f"{img.height}x{img.width}"
            )
        return cls(img, layout)

    def stream(self) -> np.ndarray:
        """Pixels in stream (block) order."""
        return self.image.pixels.ravel()[self.layout.order]

    def whole_blocks(self) -> np.ndarray:
        lay = self.layout
        return self.stream()[: lay.wb * lay.params.bs].reshape(lay.wb, lay.params.bs)

    def first_pixels(self) -> np.ndarray:
        lay = self.layout
        return self.stream()[lay.wb * lay.params.bs : lay.tp]

    def cursor(self) -> BitCursor:
        return BitCursor.msb_first(self.image.pixels.ravel(), self.layout.embeddable_positions())


def sr_encrypt(
    img: GrayImage, params: SchemeParams, key: EncryptionKey, rng: Any
) -> List[SrShareFile]:
    """Shares ``img`` and shrinks every share to its retained blocks and first pixels."""
    files = []
    for share in share_image(img, params, key, rng):
        layout = sr_layout(params, img.height, img.width, share.share_id)
        blocks = to_blocks(share.image.pixels, params.block)
        flags = retention_flags(share.share_id, layout.block_count, params.r, params.n)
        stream = np.empty(layout.rows * layout.cols, dtype=np.uint8)
        stream[: layout.wb * params.bs] = blocks[~flags].ravel()
        stream[layout.wb * params.bs : layout.tp] = blocks[flags, 0]
        stream[layout.tp :] = rng.integers(0, 256, size=stream.size - layout.tp, dtype=np.uint8)
        flat = np.empty_like(stream)
        flat[layout.order] = stream
        flat[layout.trailer_positions()] = layout.trailer_values()
        logger.debug(
            "share {}: {} whole blocks, {} first pixels -> {}x{}",
            share.share_id,
            layout.wb,
            layout.fp,
            layout.rows,
            layout.cols,
        )
        files.append(SrShareFile(GrayImage(flat.reshape(layout.rows, layout.cols)), layout))
    logger.info(
        "encrypted {}x{} image into {} size-reduced shares", img.height, img.width, params.n
    )
    return files


def _error_symbols(share: SrShareFile) -> np.ndarray:
    lay = share.layout
    side = lay.params.block
    errors = errors_batch(share.whole_blocks().reshape(lay.wb, side, side))
    return errors.reshape(lay.wb, lay.params.bs)[:, 1:].ravel()


def _vacate(share: SrShareFile) -> Tuple[BitCursor, np.ndarray, np.ndarray]:
    """Codes the whole-block prediction errors; returns the cursor, packed SI and CB."""
    lay = share.layout
    cb, si = ac_encode(_error_symbols(share))
    cursor = share.cursor()
    overhead = si_size(lay.rows, lay.cols) + si.cb_len
    if overhead > cursor.capacity:
        raise VacatingError(
            f"share {lay.share_id}: SI and code need {overhead} bits, "
            f"only {cursor.capacity} embeddable"
        )
    return cursor, si_pack(si, lay.rows, lay.cols), cb


def sr_capacity(share: SrShareFile, marked: bool = False) -> int:
    """Payload bits left after SI, CB and the length header (negative if vacating fails).

    Unmarked shares are measured by coding their whole blocks. Marked shares no
    longer hold those blocks, so the code length is read from the hider's SI.

    Raises:
        ExtractionError: ``marked`` is set but the share carries no readable SI.
    """
    lay = share.layout
    if marked:
        cursor, si, _ = _read_code(share)
        cb_len = si.cb_len
    else:
        cursor = share.cursor()
        cb_len = ac_encode(_error_symbols(share))[0].size
    return cursor.capacity - si_size(lay.rows, lay.cols) - cb_len - LENGTH_BITS


def sr_embed(share: SrShareFile, payload: bytes, key: DataHidingKey) -> SrShareFile:
    """Vacates room in ``share`` and hides the length-prefixed, enciphered payload.

    Raises:
        VacatingError: The coded errors do not fit into the embeddable stream.
        CapacityError: The payload does not fit after the coded errors.
    """
    cursor, si_bits, cb = _vacate(share)
    needed = si_bits.size + cb.size + LENGTH_BITS + 8 * len(payload)
    if needed > cursor.capacity:
        raise CapacityError(
            f"share {share.share_id}: payload needs {needed} bits, {cursor.capacity} available"
        )
    cursor.write(si_bits)
    cursor.write(cb)
    cursor.write_uint(len(payload), LENGTH_BITS)
    cursor.write_bytes(payload_cipher(key, payload))
    logger.debug(
        "share {}: SI {} bits, CB {} bits, payload {} bytes",
        share.share_id,
        si_bits.size,
        cb.size,
        len(payload),
    )
    marked = GrayImage(cursor.pixels.reshape(share.image.pixels.shape))
    return SrShareFile(marked, share.layout)


def _read_code(share: SrShareFile) -> Tuple[BitCursor, Any, np.ndarray]:
    lay = share.layout
    cursor = share.cursor()
    si = si_unpack(cursor.read(si_size(lay.rows, lay.cols)), lay.rows, lay.cols)
    expected = lay.wb * (lay.params.bs - 1)
    if si.total != expected:
        raise ExtractionError(f"SI counts sum to {si.total}, expected {expected}")
    if si.cb_len > cursor.remaining:
        raise ExtractionError(
            f"SI code length {si.cb_len} exceeds the {cursor.remaining} bits left"
        )
    return cursor, si, cursor.read(si.cb_len)


def sr_extract(marked: SrShareFile, key: DataHidingKey) -> bytes:
    """Reads the hidden payload from one marked reduced share."""
    cursor, _, _ = _read_code(marked)
    if cursor.remaining < LENGTH_BITS:
        raise ExtractionError("no room left for a length header")
    length = cursor.read_uint(LENGTH_BITS)
    if 8 * length > cursor.remaining:
        raise ExtractionError(
            f"length header claims {length} bytes, only {cursor.remaining // 8} available"
        )
    return payload_cipher(key, cursor.read_bytes(length))


def _restore_blocks(share: SrShareFile, marked: bool) -> np.ndarray:
    lay = share.layout
    blocks = share.whole_blocks()
    if not marked or lay.wb == 0:
        return blocks
    try:
        _, si, cb = _read_code(share)
        errors = ac_decode(cb, si)
    except (CodecError, ExtractionError) as exc:
        raise CorruptionError(
            f"share {lay.share_id}: cannot decode prediction errors: {exc}"
        ) from exc
    side = lay.params.block
    full = np.zeros((lay.wb, lay.params.bs), dtype=np.int16)
    full[:, 1:] = errors.reshape(lay.wb, lay.params.bs - 1)
    restored = reconstruct_batch(blocks[:, 0], full.reshape(lay.wb, side, side))
    return restored.reshape(lay.wb, lay.params.bs)


def sr_recover(
    shares: Sequence[SrShareFile], key: EncryptionKey, marked: bool = True
) -> GrayImage:
    """Recovers the original image from ``r`` or more reduced shares.

    Arguments:
        shares: Reduced shares with distinct identities.
        key: K_E.
        marked: Whether the shares went through :func:`sr_embed`; unmarked shares
            still hold their whole blocks verbatim.

    Raises:
        RecoveryError: Too few shares, duplicates, or trailers that disagree.
        CorruptionError: A share's coded errors cannot be restored.
    """
    if not shares:
        raise RecoveryError("no shares given")
    geometry = {(s.params, s.layout.height, s.layout.width) for s in shares}
    if len(geometry) != 1:
        raise RecoveryError(f"share trailers disagree: {geometry}")
    params, height, width = geometry.pop()
    ids = np.array([s.share_id for s in shares], dtype=np.int64)
    check_share_ids(ids.tolist(), params.r, params.n)
    bn = params.block_count(height, width)

    firsts, fulls, flags = [], [], []
    for share in shares:
        blocks = _restore_blocks(share, marked)
        fp = share.first_pixels()
        flag = retention_flags(share.share_id, bn, params.r, params.n)
        if fp.size != int(flag.sum()) or blocks.shape[0] != int((~flag).sum()):
            raise CorruptionError(f"share {share.share_id}: first-pixel or block array exhausted")
        first = np.empty(bn, dtype=np.uint8)
        first[flag] = fp
        first[~flag] = blocks[:, 0]
        full = np.zeros((bn, params.bs), dtype=np.uint8)
        full[~flag] = blocks
        firsts.append(first)
        fulls.append(full)
        flags.append(flag)

    xs = derive_x_table(key, bn, params.n)
    source = np.argmax(~np.stack(flags), axis=0)
    index = np.arange(bn)
    other_ys = np.stack(fulls)[source, index, 1:]
    other_xs = np.broadcast_to(xs[index, ids[source]][:, None], other_ys.shape)
    plain = recover_blocks(xs[:, ids], np.stack(firsts, axis=1), other_xs, other_ys, params.r)
    logger.info("recovered {}x{} image from reduced shares {}", height, width, ids.tolist())
    return GrayImage(from_blocks(plain, height, width, params.block))


def sr_expansion(params: SchemeParams, height: int, width: int) -> float:
    """Total reduced-share pixels over original pixels."""
    layouts = [sr_layout(params, height, width, k) for k in range(params.n)]
    total = sum(lay.rows * lay.cols for lay in layouts)
    return total / (height * width)
