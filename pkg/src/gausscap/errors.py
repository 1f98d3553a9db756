"""Typed exceptions for the gausscap package."""


class GausscapError(Exception):
    """Base class for every error raised by this package."""


class NonPositiveDefinite(GausscapError):
    """A matrix required to be positive definite has an eigenvalue <= 0."""


class NotHermitian(GausscapError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class NegativeArgument(GausscapError):
    """Entropy argument below the -1e-12 clamp window."""


class InvalidChannel(GausscapError):
    """Channel fails the quantum validity inequality Y - (i/2)Sigma >= 0."""


class DimensionMismatch(GausscapError):
    """Matrix/vector shapes are inconsistent with the declared mode counts."""


class NotBlockForm(GausscapError):
    """Signal transform is not the real representation of a complex matrix.

    Callers catching this should fall back to the general (non-decomposed)
    capacity formulas.
    """


class NonThermalNoise(GausscapError):
    """Noise matrix Y is not of the uniform thermal + additive form."""


class NegativeEntropyArgument(GausscapError):
    """A photon-number argument of g() came out negative (unphysical)."""


class UnphysicalOutput(GausscapError):
    """Output state has a symplectic eigenvalue below the vacuum floor 1/2."""


class NoFeasibleWaterlevel(GausscapError):
    """Water-filling constraint cannot be met (negative power budget)."""


class SingularNoise(GausscapError):
    """Measurement noise covariance is numerically singular."""


class ZeroNoiseClassical(GausscapError):
    """Classical Shannon capacity diverges at zero additive noise."""


class InsufficientEnvironment(GausscapError):
    """Ensemble parameters outside the truncated-unitary regime."""
