"""Exception types raised across the package."""


class SpacsError(Exception):
    """Base class for every error raised by spacswm."""


class TruncationError(SpacsError):
    """The Fock truncation leaves too much probability mass in the tail."""


class DimensionMismatch(SpacsError, ValueError):
    pass


class OrthogonalPostselection(SpacsError):
    """Pre- and postselected qubit states are (numerically) orthogonal."""


class PostselectionFailed(SpacsError):
    """Postselection probability below the usable threshold."""


class StepTooLarge(SpacsError):
    """Finite-difference derivative failed its Richardson consistency check."""


class UnsupportedPhase(SpacsError, ValueError):
    """Quadrature closed forms require a real coherent amplitude."""


class DegenerateSignal(SpacsError):
    """The conventional pointer shift vanishes, so the SNR ratio is 0/0."""


class DivergentPhaseVariance(SpacsError):
    pass


class DegenerateInversion(SpacsError):
    pass


class FlatLikelihood(SpacsError):
    """Log-likelihood does not depend on the coupling over the search grid."""
