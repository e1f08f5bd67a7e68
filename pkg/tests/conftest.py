"""Shared fixtures: keys, seeded randomness and deterministic test images."""

import numpy as np
import pytest

from src.sis_rdhei.imagecore import GrayImage
from src.sis_rdhei.keys import DataHidingKey, EncryptionKey

# Evaluation points that reproduce the three-share worked example: block
# (125, 120, 123, 122) with coefficients (181, 154) shares to 28 / 112 / 150.
WORKED_BLOCK = (125, 120, 123, 122)
WORKED_A = (181, 154)
WORKED_XS = (21, 208, 221)


def textured_image(seed: int, kind: int, size: int = 512) -> GrayImage:
    """Smooth structure plus mild noise, standing in for natural test images."""
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)
    if kind == 0:
        base = 50 + 0.2 * x + 0.15 * y
    elif kind == 1:
        base = 128 + 60 * np.sin(x / 23) * np.cos(y / 31)
    else:
        blob = np.exp(-((x - 0.6 * size) ** 2 + (y - 0.4 * size) ** 2) / (2 * (0.18 * size) ** 2))
        base = 90 + 90 * blob + 25 * np.sin((x + y) / 40)
    noisy = base + rng.normal(0, 4, size=base.shape)
    return GrayImage(np.clip(np.rint(noisy), 0, 255).astype(np.uint8))


def tiled_image(seed: int, size: int = 64, tile: int = 8) -> GrayImage:
    """Random gray levels, constant over ``tile``×``tile`` squares."""
    rng = np.random.default_rng(seed)
    levels = rng.integers(0, 256, size=(size // tile, size // tile), dtype=np.uint8)
    return GrayImage(np.kron(levels, np.ones((tile, tile), dtype=np.uint8)))


@pytest.fixture
def enc_key():
    """A fixed encryption key."""
    return EncryptionKey(bytes(range(32)))


@pytest.fixture
def hide_key():
    """A fixed data hiding key."""
    return DataHidingKey(bytes(range(100, 132)))


@pytest.fixture
def rng():
    """A seeded numpy generator."""
    return np.random.default_rng(20240521)


@pytest.fixture(scope="session")
def textured_images():
    """Three 512×512 textured images."""
    return [textured_image(seed, kind) for seed, kind in ((1, 0), (2, 1), (3, 2))]


@pytest.fixture(scope="session")
def small_textured():
    """A 64×64 textured image."""
    return textured_image(7, 1, size=64)


@pytest.fixture(scope="session")
def tiled_images():
    """Five random 64×64 tiled images."""
    return [tiled_image(seed) for seed in range(5)]


@pytest.fixture(scope="session")
def medium_textured():
    """A 128×128 textured image."""
    return textured_image(11, 1, size=128)
