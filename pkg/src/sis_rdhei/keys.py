# SPDX-License-Identifier: MIT

"""Key material: per-block evaluation points, coefficient randomness, payload cipher.

Both keys are raw 32-byte AES-256 keys. The evaluation points of block ``i`` are
rejection-sampled from the AES-256-CTR keystream of ``K_E`` whose initial counter
block is ``i`` (8 bytes, big-endian) followed by eight zero bytes, so every block
reads its own, non-overlapping part of the keystream. Payloads are XORed with the
``K_D`` keystream started at the counter block ``ff``×8 ‖ ``00``×8.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass
from pathlib import Path
from typing import Any, List, Optional, Type, TypeVar, Union

import numpy as np
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from .errors import ParameterError
from .utils import atomic_write_bytes

KEY_BYTES = 32
MAX_POINTS = 255

_PAYLOAD_NONCE = b"\xff" * 8 + bytes(8)

K = TypeVar("K", bound="_RawKey")


@dataclass(frozen=True)
class _RawKey:
    material: bytes

    def __post_init__(self) -> None:
        if not isinstance(self.material, (bytes, bytearray)) or len(self.material) != KEY_BYTES:
            raise ParameterError(
                f"{type(self).__name__} must be exactly {KEY_BYTES} bytes, "
                f"got {len(self.material) if hasattr(self.material, '__len__') else '?'}"
            )
        object.__setattr__(self, "material", bytes(self.material))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(<{KEY_BYTES} bytes>)"

    @classmethod
    def generate(cls: Type[K]) -> K:
        return cls(secrets.token_bytes(KEY_BYTES))

    @classmethod
    def from_file(cls: Type[K], path: Union[str, Path]) -> K:
        return cls(Path(path).read_bytes())

    def to_file(self, path: Union[str, Path]) -> Path:
        return atomic_write_bytes(path, self.material)


class EncryptionKey(_RawKey):
    """K_E: determines the per-block evaluation points."""


class DataHidingKey(_RawKey):
    """K_D: enciphers the hidden payload."""


def keystream(key: bytes, counter_block: bytes, length: int) -> bytes:
    """AES-256-CTR keystream of ``length`` bytes starting at ``counter_block``."""
    encryptor = Cipher(algorithms.AES(key), modes.CTR(counter_block)).encryptor()
    return encryptor.update(bytes(length)) + encryptor.finalize()


def derive_x(key: EncryptionKey, block_index: int, n: int) -> List[int]:
    """Derives the ``n`` distinct nonzero evaluation points of block ``block_index``.

    Keystream bytes are consumed in order; zeros and repeats are skipped.

    Raises:
        ParameterError: ``n`` outside [1, 255] or a negative block index.
    """
    if not 1 <= n <= MAX_POINTS:
        raise ParameterError(f"n must lie in [1, {MAX_POINTS}], got {n}")
    if not 0 <= block_index < 2**64 - 1:
        raise ParameterError(f"block index out of range: {block_index}")

    encryptor = Cipher(
        algorithms.AES(key.material), modes.CTR(block_index.to_bytes(8, "big") + bytes(8))
    ).encryptor()
    stream = np.empty(0, dtype=np.uint8)
    chunk = max(32, 2 * n + 16)
    while True:
        more = np.frombuffer(encryptor.update(bytes(chunk)), dtype=np.uint8)
        stream = np.concatenate([stream, more])
        nonzero = stream[stream != 0]
        _, first_seen = np.unique(nonzero, return_index=True)
        if len(first_seen) >= n:
            return [int(v) for v in nonzero[np.sort(first_seen)[:n]]]
        chunk *= 2


def derive_x_table(key: EncryptionKey, block_count: int, n: int) -> np.ndarray:
    """Stacks :func:`derive_x` for blocks ``0 .. block_count-1`` into a ``(BN, n)`` array."""
    table = np.empty((block_count, n), dtype=np.uint8)
    for i in range(block_count):
        table[i] = derive_x(key, i, n)
    return table


class OsEntropy:
    """Random source backed by the operating system CSPRNG.

    Mirrors the ``integers`` method of :class:`numpy.random.Generator` for byte draws.
    """

    def integers(
        self, low: int, high: Optional[int] = None, size: Any = None, dtype: Any = np.int64
    ) -> Any:
        if high is None:
            low, high = 0, low
        if (low, high) != (0, 256):
            raise ParameterError("OsEntropy only draws uniform bytes in [0, 256)")
        shape = () if size is None else size
        count = int(np.prod(shape)) if shape != () else 1
        values = np.frombuffer(secrets.token_bytes(count), dtype=np.uint8).astype(dtype)
        return values.reshape(shape) if shape != () else values[0]


def sample_a(rng: Any, r: int) -> List[int]:
    """Draws the ``r - 1`` random coefficients of one block from ``rng``."""
    return [int(v) for v in sample_a_batch(rng, r, 1)[0]]


def sample_a_batch(rng: Any, r: int, block_count: int) -> np.ndarray:
    """Coefficients for ``block_count`` blocks as a ``(BN, r - 1)`` byte array."""
    if r < 2:
        raise ParameterError(f"threshold r must be at least 2, got {r}")
    draws = rng.integers(0, 256, size=(block_count, r - 1), dtype=np.uint8)
    return np.asarray(draws, dtype=np.uint8)


def payload_cipher(key: DataHidingKey, data: bytes) -> bytes:
    """XORs ``data`` with the K_D keystream; applying it twice restores ``data``."""
    if not data:
        return b""
    stream = keystream(key.material, _PAYLOAD_NONCE, len(data))
    return (
        np.frombuffer(data, dtype=np.uint8) ^ np.frombuffer(stream, dtype=np.uint8)
    ).tobytes()
