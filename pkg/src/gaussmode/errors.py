"""Exception hierarchy shared by all gaussmode modules."""


class GaussModeError(Exception):
    """Base class for every error raised by gaussmode."""


class DegenerateTransform(GaussModeError):
    """Delta vanishes with nonzero coupling; only a Jordan form exists."""


class UnstableSpectrum(GaussModeError):
    """Delta^2 < 0 or a normal-mode frequency squared is negative."""


class ThermalUndefined(GaussModeError):
    """A thermal state was requested outside the positive definite sector A."""


class NonPhysical(GaussModeError):
    """A covariance matrix violates the uncertainty relation."""


class OutOfSector(GaussModeError):
    """A closed form was evaluated at a point where it does not apply."""


class NoBoundary(GaussModeError):
    """No critical frequency is defined for the given signs of the constants."""


class NotEntangledAtZero(GaussModeError):
    """The vacuum is separable, so no limit temperature exists."""


class RootDiagnostic(GaussModeError):
    """The post hoc scan found entanglement above the computed limit temperature."""


class ConvergenceFailure(GaussModeError):
    """Two Fock cutoffs disagree beyond tolerance."""


class SpecInvalid(GaussModeError):
    """A sweep or grid specification is malformed."""
