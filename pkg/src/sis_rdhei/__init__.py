# SPDX-License-Identifier: MIT

"""Reversible data hiding over Shamir-shared encrypted images."""

from loguru import logger

__version__ = "0.1.0"

logger.disable(__name__)
