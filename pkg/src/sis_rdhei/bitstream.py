# SPDX-License-Identifier: MIT

"""Bit helpers and :class:`BitCursor`, an ordered bit view over chosen pixels.

Bits are ``uint8`` numpy arrays holding 0/1. Multi-bit fields are big-endian.
"""

from __future__ import annotations

import numpy as np

from .errors import CapacityError, ExtractionError


def uint_to_bits(value: int, width: int) -> np.ndarray:
    if value < 0 or value >= 1 << width:
        raise ValueError(f"{value} does not fit into {width} bits")
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((value >> shifts) & 1).astype(np.uint8)


def bits_to_uint(bits: np.ndarray) -> int:
    value = 0
    for bit in np.asarray(bits, dtype=np.uint8).tolist():
        value = (value << 1) | bit
    return value


def bytes_to_bits(data: bytes) -> np.ndarray:
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))


def bits_to_bytes(bits: np.ndarray) -> bytes:
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size % 8:
        raise ValueError(f"bit count {bits.size} is not a whole number of bytes")
    return np.packbits(bits).tobytes()


class BitCursor:
    """Sequential reader/writer over an ordered list of (pixel, bit-plane) slots.

    The cursor owns a flat copy of the pixels; ``pixels`` returns the current state.

    Arguments:
        pixels: Flat ``uint8`` pixel array (copied).
        slot_pixel: Flat pixel position of each slot, in stream order.
        slot_bit: Bit plane (0 = LSB) of each slot.
    """

    def __init__(self, pixels: np.ndarray, slot_pixel: np.ndarray, slot_bit: np.ndarray):
        self._pixels = np.array(pixels, dtype=np.uint8).ravel()
        self._slot_pixel = np.asarray(slot_pixel, dtype=np.int64)
        self._slot_bit = np.asarray(slot_bit, dtype=np.uint8)
        self.position = 0

    @classmethod
    def plane_major(
        cls, pixels: np.ndarray, positions: np.ndarray, groups: np.ndarray
    ) -> "BitCursor":
        """Within each group, all LSBs first, then the next plane, up to the MSB.

        Arguments:
            pixels: Flat pixel array.
            positions: Flat pixel positions in stream order.
            groups: Non-decreasing group label of each position (e.g. block index).
        """
        positions = np.asarray(positions, dtype=np.int64)
        groups = np.asarray(groups, dtype=np.int64)
        if positions.size == 0:
            return cls(pixels, positions, np.zeros(0, dtype=np.uint8))
        _, starts, counts = np.unique(groups, return_index=True, return_counts=True)
        owner = np.repeat(np.arange(starts.size), counts)
        rank = np.arange(positions.size) - starts[owner]
        planes = np.arange(8, dtype=np.int64)[None, :]
        slots = 8 * starts[owner][:, None] + planes * counts[owner][:, None] + rank[:, None]
        slot_pixel = np.empty(8 * positions.size, dtype=np.int64)
        slot_bit = np.empty(8 * positions.size, dtype=np.uint8)
        slot_pixel[slots.ravel()] = np.repeat(positions, 8)
        slot_bit[slots.ravel()] = np.tile(np.arange(8, dtype=np.uint8), positions.size)
        return cls(pixels, slot_pixel, slot_bit)

    @classmethod
    def msb_first(cls, pixels: np.ndarray, positions: np.ndarray) -> "BitCursor":
        """Pixel after pixel, each from its MSB down to its LSB."""
        positions = np.asarray(positions, dtype=np.int64)
        slot_pixel = np.repeat(positions, 8)
        slot_bit = np.tile(np.arange(7, -1, -1, dtype=np.uint8), positions.size)
        return cls(pixels, slot_pixel, slot_bit)

    @property
    def capacity(self) -> int:
        return int(self._slot_pixel.size)

    @property
    def remaining(self) -> int:
        return self.capacity - self.position

    @property
    def pixels(self) -> np.ndarray:
        return self._pixels.copy()

    def _span(self, count: int, error: type) -> slice:
        if count < 0 or count > self.remaining:
            raise error(f"requested {count} bits, only {self.remaining} of {self.capacity} left")
        span = slice(self.position, self.position + count)
        self.position += count
        return span

    def write(self, bits: np.ndarray) -> None:
        bits = np.asarray(bits, dtype=np.uint8)
        span = self._span(bits.size, CapacityError)
        where = self._slot_pixel[span]
        plane = self._slot_bit[span]
        for p in np.unique(plane).tolist():
            sel = plane == p
            px = where[sel]
            cleared = self._pixels[px] & np.uint8(0xFF ^ (1 << p))
            self._pixels[px] = cleared | (bits[sel] << np.uint8(p))

    def read(self, count: int) -> np.ndarray:
        span = self._span(count, ExtractionError)
        return (self._pixels[self._slot_pixel[span]] >> self._slot_bit[span]) & 1

    def skip(self, count: int) -> None:
        self._span(count, ExtractionError)

    def write_uint(self, value: int, width: int) -> None:
        self.write(uint_to_bits(value, width))

    def read_uint(self, width: int) -> int:
        return bits_to_uint(self.read(width))

    def write_bytes(self, data: bytes) -> None:
        self.write(bytes_to_bits(data))

    def read_bytes(self, count: int) -> bytes:
        return bits_to_bytes(self.read(8 * count))
