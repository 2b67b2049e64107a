"""Exception hierarchy shared by all modules."""


class SpectralDistError(Exception):
    """Base class for all library errors."""


class InvalidInterval(SpectralDistError):
    """Interval endpoints are not ordered a < b."""


class InvalidOrder(SpectralDistError):
    """Quadrature or derivative order out of range."""


class NonfiniteValue(SpectralDistError):
    """An integrand returned NaN or infinity at a sample point."""


class PoleOutside(SpectralDistError):
    """Principal-value pole does not lie inside the integration interval."""


class BadSequence(SpectralDistError):
    """Regularisation sequence is not strictly decreasing of one sign."""


class OriginOutside(SpectralDistError):
    """The origin is not interior to the test-function support."""


class UnsupportedOrder(SpectralDistError):
    """Distribution order exceeds the exact-derivative cap."""


class SingularShift(SpectralDistError):
    """Resolvent requested at a (numerical) eigenvalue."""


class EnclosureAmbiguous(SpectralDistError):
    """Contour straddles an eigenvalue cluster; projector not idempotent."""


class RadiusTooSmall(SpectralDistError):
    """Contour radius does not dominate the Gershgorin bound."""


class NotUnitary(SpectralDistError):
    """Matrix fails the unitarity check."""


class InvalidParams(SpectralDistError):
    """Model parameters violate their preconditions."""


class OnSlit(SpectralDistError):
    """Evaluation point lies on the essential spectrum."""


class SpectralPoint(SpectralDistError):
    """Resolvent requested at a spectral point (slit or zero of C)."""


class NoDiscreteSpectrum(SpectralDistError):
    """Residue data requested but the characteristic function has no zeros."""


class NotDoubleZero(SpectralDistError):
    """Jordan data requested outside the double-zero regime."""


class RegimeUnsupported(SpectralDistError):
    """The characteristic function falls in the undiscussed sign regime."""


class SupportViolation(SpectralDistError):
    """Test-function support is not contained where the operation requires."""


class ConfigError(SpectralDistError):
    """Scenario configuration failed to parse or validate."""


class MissingData(SpectralDistError):
    """Requested export needs data the report does not contain."""
