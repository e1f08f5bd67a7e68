# SPDX-License-Identifier: MIT

"""Small helpers used across the package."""


import os
import sys
import tempfile
from pathlib import Path
from typing import Union

from loguru import logger

LOG_FORMAT = "{time:HH:mm:ss} <{extra[command]}>: {level} - {message}"


def ceil_log2(value: int) -> int:
    """Number of bits needed to address ``value`` distinct states (⌈log₂ value⌉)."""
    if value < 1:
        raise ValueError(f"ceil_log2 needs a positive integer, got {value}")
    return (value - 1).bit_length()


def atomic_write_bytes(path: Union[str, Path], data: bytes) -> Path:
    """Writes ``data`` to ``path`` through a temporary file and a rename.

    Readers never observe a half-written file; the parent directory is created
    if needed.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    logger.debug("wrote {} bytes to {}", len(data), target)
    return target


def configure_logging(package: str, level: str = "INFO", fmt: str = LOG_FORMAT) -> None:
    """Routes the package's log records to stderr with the given level and format."""
    logger.remove()
    logger.configure(extra={"command": "-"})
    logger.add(sys.stderr, level=level.upper(), format=fmt)
    logger.enable(package)
