# SPDX-License-Identifier: MIT

"""MED prediction inside blocks, static arithmetic coding of prediction errors, and the SI format.

Error symbols range over ``[-255, 255]`` and are offset by 255 to index a 511-entry
frequency table. The coder is a 32-bit integer arithmetic coder: it emits the
leading bits low and high agree on, defers straddling (underflow) bits until the
next decided bit, and terminates with a single ``1`` bit; the decoder reads zeros
past the end of its input.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from loguru import logger

from .bitstream import bits_to_uint, uint_to_bits
from .errors import CodecError, CorruptionError
from .utils import ceil_log2

ALPHABET = 511
OFFSET = 255

STATE_BITS = 32
_FULL = 1 << STATE_BITS
_MASK = _FULL - 1
_HALF = _FULL >> 1
_QUARTER = _HALF >> 1
MAX_TOTAL = _QUARTER


# MED --------------------------------------------------------------------------


def med(a: int, b: int, c: int) -> int:
    if c <= min(a, b):
        return max(a, b)
    if c >= max(a, b):
        return min(a, b)
    return a + b - c


def med_predict(block: np.ndarray, j: int, k: int) -> int:
    """Predicts pixel ``(j, k)`` (row, column) of ``block`` from its causal neighbours.

    The first row predicts from the left neighbour and the first column from the
    one above; ``(0, 0)`` is never predicted.
    """
    if j == 0 and k == 0:
        raise ValueError("the first pixel of a block has no MED prediction")
    p = np.asarray(block, dtype=np.int64)
    if j == 0:
        return int(p[0, k - 1])
    if k == 0:
        return int(p[j - 1, 0])
    return med(int(p[j - 1, k]), int(p[j, k - 1]), int(p[j - 1, k - 1]))


def _med_array(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    return np.where(c <= lo, hi, np.where(c >= hi, lo, a + b - c))


def errors_batch(blocks: np.ndarray) -> np.ndarray:
    """Prediction errors of ``(B, S, S)`` blocks; entry ``(0, 0)`` is the 0 sentinel."""
    p = np.asarray(blocks, dtype=np.int16)
    pred = np.zeros_like(p)
    pred[:, 0, 1:] = p[:, 0, :-1]
    pred[:, 1:, 0] = p[:, :-1, 0]
    pred[:, 1:, 1:] = _med_array(p[:, :-1, 1:], p[:, 1:, :-1], p[:, :-1, :-1])
    errors = p - pred
    errors[:, 0, 0] = 0
    return errors


def reconstruct_batch(first: np.ndarray, errors: np.ndarray) -> np.ndarray:
    """Inverse of :func:`errors_batch` given each block's first pixel.

    Raises:
        CorruptionError: A reconstructed pixel falls outside [0, 255].
    """
    errors = np.asarray(errors, dtype=np.int16)
    count, side, _ = errors.shape
    p = np.zeros((count, side, side), dtype=np.int16)
    p[:, 0, 0] = np.asarray(first, dtype=np.int16)
    for j in range(side):
        for k in range(side):
            if j == 0 and k == 0:
                continue
            if j == 0:
                pred = p[:, 0, k - 1]
            elif k == 0:
                pred = p[:, j - 1, 0]
            else:
                pred = _med_array(p[:, j - 1, k], p[:, j, k - 1], p[:, j - 1, k - 1])
            p[:, j, k] = pred + errors[:, j, k]
    if p.min(initial=0) < 0 or p.max(initial=0) > 255:
        raise CorruptionError("prediction errors reconstruct pixels outside [0, 255]")
    return p.astype(np.uint8)


def block_errors(block: np.ndarray) -> np.ndarray:
    return errors_batch(np.asarray(block)[None])[0]


def block_reconstruct(first_pixel: int, errors: np.ndarray) -> np.ndarray:
    return reconstruct_batch(np.array([first_pixel]), np.asarray(errors)[None])[0]


# Side information ---------------------------------------------------------------


@dataclass(frozen=True)
class SideInfo:
    """Code length in bits and the 511 symbol counts (symbol ``s`` at index ``s + 255``)."""

    cb_len: int
    counts: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.counts) != ALPHABET:
            raise CodecError(f"side information needs {ALPHABET} counts, got {len(self.counts)}")

    @property
    def total(self) -> int:
        return sum(self.counts)


def si_widths(height: int, width: int) -> Tuple[int, int]:
    """Field widths (code length, per-count) for an ``height``×``width`` share."""
    pixels = height * width
    return ceil_log2(8 * pixels), ceil_log2(pixels)


def si_size(height: int, width: int) -> int:
    len_width, count_width = si_widths(height, width)
    return len_width + ALPHABET * count_width


def si_pack(si: SideInfo, height: int, width: int) -> np.ndarray:
    len_width, count_width = si_widths(height, width)
    counts = np.asarray(si.counts, dtype=np.int64)
    if si.cb_len >= 1 << len_width or counts.max(initial=0) >= 1 << count_width:
        raise CodecError(
            f"side information does not fit {len_width}/{count_width}-bit fields "
            f"(cb_len={si.cb_len}, max count={int(counts.max(initial=0))})"
        )
    shifts = np.arange(count_width - 1, -1, -1, dtype=np.int64)
    count_bits = ((counts[:, None] >> shifts) & 1).astype(np.uint8).ravel()
    return np.concatenate([uint_to_bits(si.cb_len, len_width), count_bits])


def si_unpack(bits: np.ndarray, height: int, width: int) -> SideInfo:
    len_width, count_width = si_widths(height, width)
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size < len_width + ALPHABET * count_width:
        raise CodecError(f"side information truncated: {bits.size} bits")
    cb_len = bits_to_uint(bits[:len_width])
    grid = bits[len_width : len_width + ALPHABET * count_width].reshape(ALPHABET, count_width)
    weights = 1 << np.arange(count_width - 1, -1, -1, dtype=np.int64)
    counts = tuple(int(v) for v in grid.astype(np.int64) @ weights)
    return SideInfo(cb_len, counts)


# Arithmetic coding ------------------------------------------------------------


def _cumulative(counts: Sequence[int]) -> List[int]:
    cum = [0]
    for c in counts:
        cum.append(cum[-1] + c)
    return cum


class ArithmeticEncoder:
    def __init__(self) -> None:
        self.low = 0
        self.high = _MASK
        self._pending = 0
        self._chunks: List[str] = []

    def encode(self, cum_low: int, cum_high: int, total: int) -> None:
        span = self.high - self.low + 1
        self.high = self.low + span * cum_high // total - 1
        self.low = self.low + span * cum_low // total
        while True:
            shared = STATE_BITS - (self.low ^ self.high).bit_length()
            if shared:
                self._emit(self.low >> (STATE_BITS - shared), shared)
                self.low = (self.low << shared) & _MASK
                self.high = ((self.high << shared) & _MASK) | ((1 << shared) - 1)
            elif self.low >= _QUARTER and self.high < _HALF + _QUARTER:
                self._pending += 1
                self.low = (self.low - _QUARTER) << 1
                self.high = ((self.high - _QUARTER) << 1) | 1
            else:
                return

    def _emit(self, top: int, width: int) -> None:
        bits = format(top, f"0{width}b")
        if self._pending:
            bits = bits[0] + ("0" if bits[0] == "1" else "1") * self._pending + bits[1:]
            self._pending = 0
        self._chunks.append(bits)

    def finish(self) -> str:
        # low < 1/2 <= high here, so "1" followed by zeros lies inside the interval
        self._chunks.append("1")
        return "".join(self._chunks)


class ArithmeticDecoder:
    def __init__(self, bits: str) -> None:
        self._bits = bits
        self._pos = 0
        self.low = 0
        self.high = _MASK
        self.code = self._take(STATE_BITS)

    def _take(self, count: int) -> int:
        chunk = self._bits[self._pos : self._pos + count]
        self._pos += count
        return int(chunk.ljust(count, "0"), 2)

    def decode(self, cum: List[int], total: int) -> int:
        span = self.high - self.low + 1
        value = ((self.code - self.low + 1) * total - 1) // span
        index = bisect_right(cum, value) - 1
        if not 0 <= index < len(cum) - 1 or cum[index + 1] <= value:
            raise CodecError("arithmetic decoder left the coding interval")
        self.high = self.low + span * cum[index + 1] // total - 1
        self.low = self.low + span * cum[index] // total
        while True:
            shared = STATE_BITS - (self.low ^ self.high).bit_length()
            if shared:
                self.low = (self.low << shared) & _MASK
                self.high = ((self.high << shared) & _MASK) | ((1 << shared) - 1)
                self.code = ((self.code << shared) & _MASK) | self._take(shared)
            elif self.low >= _QUARTER and self.high < _HALF + _QUARTER:
                self.low = (self.low - _QUARTER) << 1
                self.high = ((self.high - _QUARTER) << 1) | 1
                self.code = ((self.code - _QUARTER) << 1) | self._take(1)
            else:
                return index


def _bits_from_text(text: str) -> np.ndarray:
    return np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0")


def ac_encode(symbols: Sequence[int]) -> Tuple[np.ndarray, SideInfo]:
    """Codes ``symbols`` in ``[-255, 255]`` with the static model of their own counts."""
    shifted = np.asarray(symbols, dtype=np.int64) + OFFSET
    if shifted.size and (shifted.min() < 0 or shifted.max() >= ALPHABET):
        raise CodecError("error symbols must lie in [-255, 255]")
    counts = np.bincount(shifted, minlength=ALPHABET)
    total = int(shifted.size)
    if total == 0:
        return np.zeros(0, dtype=np.uint8), SideInfo(0, (0,) * ALPHABET)
    if total > MAX_TOTAL:
        raise CodecError(f"{total} symbols exceed the coder's frequency limit {MAX_TOTAL}")
    cum = _cumulative(counts.tolist())
    encoder = ArithmeticEncoder()
    for s in shifted.tolist():
        encoder.encode(cum[s], cum[s + 1], total)
    bits = _bits_from_text(encoder.finish())
    logger.debug("coded {} symbols into {} bits", total, bits.size)
    return bits, SideInfo(int(bits.size), tuple(int(c) for c in counts))


def ac_decode(bits: np.ndarray, si: SideInfo) -> np.ndarray:
    """Decodes ``si.total`` symbols from the first ``si.cb_len`` bits of ``bits``.

    Raises:
        CodecError: Too few bits, or decoded symbols contradict the SI counts.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size < si.cb_len:
        raise CodecError(f"code stream truncated: {bits.size} of {si.cb_len} bits")
    total = si.total
    if total == 0:
        if si.cb_len:
            raise CodecError("non-empty code stream for zero symbols")
        return np.zeros(0, dtype=np.int16)
    if total > MAX_TOTAL:
        raise CodecError(f"{total} symbols exceed the coder's frequency limit {MAX_TOTAL}")
    cum = _cumulative(si.counts)
    decoder = ArithmeticDecoder((bits[: si.cb_len] + ord("0")).tobytes().decode("ascii"))
    decoded = np.fromiter(
        (decoder.decode(cum, total) for _ in range(total)), dtype=np.int64, count=total
    )
    if not np.array_equal(np.bincount(decoded, minlength=ALPHABET), np.asarray(si.counts)):
        raise CodecError("decoded symbols do not match the side-information counts")
    return (decoded - OFFSET).astype(np.int16)
