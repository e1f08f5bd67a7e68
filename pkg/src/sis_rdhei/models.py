# SPDX-License-Identifier: MIT

"""Enumerations shared by the schemes and the command-line front end."""


from enum import Enum


class Scheme(str, Enum):
    hc = "hc"  # High-capacity: embedding space allocated in full-size shares
    sr = "sr"  # Size-reduced: shrunken shares, room vacated by MED + coding


class ShareKind(str, Enum):
    full = "full"  # Same M×N as the original image
    reduced = "reduced"  # M′×N′ with the 8-pixel trailer
