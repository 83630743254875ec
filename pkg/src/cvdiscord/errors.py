"""Exception types shared across the package."""


class CVDiscordError(Exception):
    """Base class for all errors raised by this package."""


class NonSymmetricError(CVDiscordError):
    """Covariance matrix is not symmetric within tolerance."""


class NonPositiveDiagonalError(CVDiscordError):
    """Covariance matrix has a non-positive diagonal entry."""


class NotLocallyReducibleError(CVDiscordError):
    """Matrix cannot be brought to standard form with local rotations alone."""


class ComplexEigenvalueError(CVDiscordError):
    """Symplectic eigenvalue discriminant is negative beyond tolerance."""


class EntropyDomainError(CVDiscordError):
    """Entropy argument below the vacuum floor of 1/2."""


class UnphysicalStateError(CVDiscordError):
    """State violates the minimum-uncertainty bound d_minus >= 1/2."""


class GridTooCoarseError(CVDiscordError):
    """Measurement grid boundary attained a minimum that is still descending."""


class EtaOutOfRangeError(CVDiscordError):
    """Transmission outside the interval [0, 1]."""


class OverlapOutOfRangeError(CVDiscordError):
    """Spatial mode overlap outside the interval [0, 1]."""


class UnknownPairError(CVDiscordError):
    """Requested subchannel pair is not present in the set."""


class AsymmetricSingleModeNoiseError(CVDiscordError):
    """Single-mode X/Y variances differ too much for symmetric-state extraction."""


class UnphysicalReconstructionError(CVDiscordError):
    """Reconstructed state violates physicality beyond statistical tolerance."""


class InsufficientScanRangeError(CVDiscordError):
    """Phase scan does not cover a full period."""
