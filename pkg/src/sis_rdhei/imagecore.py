# SPDX-License-Identifier: MIT

"""Grayscale images, raster-order block partitioning and binary PGM I/O."""

from __future__ import annotations

import re
from dataclasses import dataclass
from io import BytesIO
from pathlib import Path
from typing import List, Union

import numpy as np
from loguru import logger
from PIL import Image

from .errors import DimensionError, PgmFormatError
from .utils import atomic_write_bytes


@dataclass(frozen=True)
class GrayImage:
    """An 8-bit grayscale image of ``height`` (M) rows by ``width`` (N) columns."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.pixels)
        if arr.ndim != 2:
            raise DimensionError(f"image must be two-dimensional, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise DimensionError("pixel values must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        arr = np.array(arr, dtype=np.uint8, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )

    def __hash__(self) -> int:
        return hash((self.pixels.shape, self.pixels.tobytes()))


@dataclass(frozen=True)
class BlockView:
    """Location of block ``index`` (raster order) of side ``side``."""

    index: int
    row: int
    col: int
    side: int

    def pixels(self, img: GrayImage) -> np.ndarray:
        return img.pixels[self.row : self.row + self.side, self.col : self.col + self.side]

    def first_pixel(self, width: int) -> int:
        """Flat raster position of the block's top-left pixel."""
        return self.row * width + self.col


def block_view(index: int, side: int, width: int) -> BlockView:
    per_row = width // side
    return BlockView(index, (index // per_row) * side, (index % per_row) * side, side)


def check_block_size(height: int, width: int, side: int) -> int:
    """Validates that ``side`` tiles an ``height``×``width`` image and returns BN."""
    if side < 2:
        raise DimensionError(f"block side must be at least 2, got {side}")
    if height % side or width % side:
        raise DimensionError(
            f"{height}x{width} image is not divisible into {side}x{side} blocks"
        )
    return (height // side) * (width // side)


def partition(img: GrayImage, side: int) -> List[BlockView]:
    """Splits ``img`` into non-overlapping ``side``×``side`` blocks in raster order."""
    count = check_block_size(img.height, img.width, side)
    return [block_view(i, side, img.width) for i in range(count)]


def to_blocks(pixels: np.ndarray, side: int) -> np.ndarray:
    """Reshapes an M×N array into ``(BN, side*side)`` rows, blocks in raster order.

    Pixels inside each row are in raster order within the block.
    """
    height, width = pixels.shape
    check_block_size(height, width, side)
    return (
        pixels.reshape(height // side, side, width // side, side)
        .swapaxes(1, 2)
        .reshape(-1, side * side)
    )


def from_blocks(blocks: np.ndarray, height: int, width: int, side: int) -> np.ndarray:
    """Inverse of :func:`to_blocks`."""
    check_block_size(height, width, side)
    return (
        np.asarray(blocks)
        .reshape(height // side, width // side, side, side)
        .swapaxes(1, 2)
        .reshape(height, width)
    )


def block_order(height: int, width: int, side: int) -> np.ndarray:
    """Flat raster index of every pixel, listed block by block.

    ``block_order(...)[b * side**2 + j]`` is the flat position of pixel ``j`` of
    block ``b``.
    """
    return to_blocks(np.arange(height * width, dtype=np.int64).reshape(height, width), side).ravel()


# PGM (P5) -------------------------------------------------------------------


def _header_maxval(data: bytes, offset: int) -> bytes:
    tokens = re.sub(rb"#[^\n]*", b" ", data[:offset]).split()
    return tokens[-1] if tokens else b""


def read_pgm(data: bytes) -> GrayImage:
    """Parses a binary PGM (P5, maxval 255); header comments are accepted."""
    if data[:2] != b"P5":
        raise PgmFormatError(f"unsupported magic number {data[:2]!r}, expected b'P5'")
    try:
        with Image.open(BytesIO(data)) as im:
            if im.format != "PPM" or im.mode != "L":
                raise PgmFormatError(f"expected an 8-bit graymap, got {im.format} {im.mode}")
            if 0 in im.size:
                raise PgmFormatError(f"invalid PGM dimensions {im.size[0]}x{im.size[1]}")
            maxval = _header_maxval(data, im.tile[0][2])
            if maxval != b"255":
                raise PgmFormatError(f"only maxval 255 is supported, got {maxval!r}")
            im.load()
            pixels = np.asarray(im, dtype=np.uint8)
    except PgmFormatError:
        raise
    except (OSError, ValueError, SyntaxError) as exc:
        raise PgmFormatError(f"cannot read PGM: {exc}") from exc
    logger.trace("read {}x{} graymap", pixels.shape[0], pixels.shape[1])
    return GrayImage(pixels)


def write_pgm(img: GrayImage) -> bytes:
    """Serialises ``img`` with the canonical header ``P5\\n<N> <M>\\n255\\n``."""
    buf = BytesIO()
    Image.fromarray(np.ascontiguousarray(img.pixels)).save(buf, format="PPM")
    return buf.getvalue()


def load_pgm(path: Union[str, Path]) -> GrayImage:
    return read_pgm(Path(path).read_bytes())


def save_pgm(path: Union[str, Path], img: GrayImage) -> Path:
    return atomic_write_bytes(path, write_pgm(img))
