# SPDX-License-Identifier: MIT


"""Tests for the shared helpers."""

import pytest
from loguru import logger

from src.sis_rdhei.utils import atomic_write_bytes, ceil_log2, configure_logging


@pytest.mark.parametrize(
    "value,bits", [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (1024, 10), (1025, 11)]
)
def test_ceil_log2(value: int, bits: int):
    """Tests the number of bits needed for a count of states."""
    assert ceil_log2(value) == bits


def test_ceil_log2_rejects_zero():
    """Tests non-positive inputs raise."""
    with pytest.raises(ValueError):
        ceil_log2(0)


def test_atomic_write_bytes(tmp_path):
    """Tests files are replaced whole and parents are created."""
    target = tmp_path / "a" / "b" / "data.bin"
    assert atomic_write_bytes(target, b"first") == target
    atomic_write_bytes(target, b"second")
    assert target.read_bytes() == b"second"
    assert [p.name for p in target.parent.iterdir()] == ["data.bin"]


def test_configure_logging_routes_records(capsys):
    """Tests package records reach stderr with the command context."""
    configure_logging("src.sis_rdhei", "DEBUG")
    with logger.contextualize(command="encrypt"):
        logger.info("hello")
    logger.remove()
    assert "<encrypt>: INFO - hello" in capsys.readouterr().err
