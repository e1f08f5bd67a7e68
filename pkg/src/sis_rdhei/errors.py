# SPDX-License-Identifier: MIT

"""Exception hierarchy for the toolkit.

Every error raised on purpose by the library derives from :class:`RdheiError`;
the CLI maps the families below onto its exit codes.
"""


class RdheiError(Exception):
    """Base class for every library error."""


class FieldError(RdheiError, ZeroDivisionError):
    """Arithmetic outside the domain of GF(2^8), e.g. inverting zero."""


class ParameterError(RdheiError, ValueError):
    """Invalid scheme parameters, keys or arguments."""


class DimensionError(ParameterError):
    """Image dimensions incompatible with the block size."""


class PgmFormatError(RdheiError, ValueError):
    """Malformed, unsupported or truncated PGM data."""


class CapacityError(RdheiError):
    """Payload does not fit into the embeddable space."""


class VacatingError(CapacityError):
    """Side information and compressed errors do not fit into the share."""


class CodecError(RdheiError):
    """Arithmetic coding or side-information failure."""


class ExtractionError(RdheiError):
    """Marked share cannot be parsed or its embedded stream is malformed."""


class RecoveryError(RdheiError):
    """Share set cannot be combined into the original image."""


class CorruptionError(RecoveryError):
    """Shares are present but mutually inconsistent or damaged."""
