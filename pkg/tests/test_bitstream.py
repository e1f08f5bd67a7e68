"""Tests for bit helpers and the pixel bit cursor."""

import numpy as np
import pytest

from src.sis_rdhei.bitstream import (
    BitCursor,
    bits_to_bytes,
    bits_to_uint,
    bytes_to_bits,
    uint_to_bits,
)
from src.sis_rdhei.errors import CapacityError, ExtractionError


def test_uint_bits_are_big_endian():
    """Test unsigned integers are written MSB first."""
    assert uint_to_bits(6, 4).tolist() == [0, 1, 1, 0]
    assert bits_to_uint(np.array([1, 0, 1, 1])) == 11
    with pytest.raises(ValueError):
        uint_to_bits(16, 4)


def test_bytes_bits_helpers():
    """Test byte conversion and whole-byte checks."""
    assert bytes_to_bits(b"\x81").tolist() == [1, 0, 0, 0, 0, 0, 0, 1]
    assert bits_to_bytes(bytes_to_bits(b"ab")) == b"ab"
    with pytest.raises(ValueError):
        bits_to_bytes(np.ones(3, dtype=np.uint8))


def test_plane_major_worked_example():
    """Test hiding 0001 in share (28, 25, 26, 27) at its embeddable pixels gives (24, 26)."""
    pixels = np.array([28, 25, 26, 27], dtype=np.uint8)
    cursor = BitCursor.plane_major(pixels, np.array([1, 3]), np.array([0, 0]))
    cursor.write(np.array([0, 0, 0, 1], dtype=np.uint8))
    assert cursor.pixels.tolist() == [28, 24, 26, 26]
    assert cursor.remaining == 12


def test_plane_major_orders_planes_within_groups():
    """Test all LSBs of a group come before its next plane, groups in sequence."""
    pixels = np.zeros(4, dtype=np.uint8)
    cursor = BitCursor.plane_major(pixels, np.array([0, 1, 2, 3]), np.array([0, 0, 1, 1]))
    cursor.write(np.array([1, 1, 1, 0]))
    assert cursor.pixels.tolist() == [3, 1, 0, 0]
    cursor.skip(12)
    cursor.write(np.array([1, 0, 0, 1]))
    assert cursor.pixels.tolist() == [3, 1, 1, 2]


def test_msb_first_order():
    """Test pixels are filled one after another from their MSB."""
    cursor = BitCursor.msb_first(np.zeros(3, dtype=np.uint8), np.array([2, 0]))
    cursor.write_uint(0xA5, 8)
    cursor.write_uint(1, 2)
    assert cursor.pixels.tolist() == [64, 0, 0xA5]


def test_cursor_round_trip(rng):
    """Test values written through a fresh cursor read back from the result."""
    pixels = rng.integers(0, 256, size=64, dtype=np.uint8)
    positions = rng.permutation(64)[:40]
    writer = BitCursor.msb_first(pixels, positions)
    writer.write_uint(12345, 32)
    writer.write_bytes(b"xyz")
    reader = BitCursor.msb_first(writer.pixels, positions)
    assert reader.read_uint(32) == 12345
    assert reader.read_bytes(3) == b"xyz"
    untouched = np.setdiff1d(np.arange(64), positions)
    assert np.array_equal(writer.pixels[untouched], pixels[untouched])


def test_cursor_limits():
    """Test writing past the end is a capacity error and reading past it an extraction error."""
    cursor = BitCursor.msb_first(np.zeros(1, dtype=np.uint8), np.array([0]))
    assert cursor.capacity == 8
    with pytest.raises(CapacityError):
        cursor.write(np.ones(9, dtype=np.uint8))
    cursor.write(np.ones(8, dtype=np.uint8))
    with pytest.raises(ExtractionError):
        cursor.read(1)
    empty = BitCursor.plane_major(np.zeros(2, dtype=np.uint8), np.array([]), np.array([]))
    assert empty.capacity == 0
