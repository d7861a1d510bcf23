"""Exception hierarchy shared across the solver modules."""


class XYZBetheError(Exception):
    """Base class for all package-specific errors."""


class NonConvergentNome(XYZBetheError):
    """Raised when a theta series is requested with |q| >= 1."""


class TruncationFailure(XYZBetheError):
    """Theta series hit the term cap before reaching the tolerance."""

    def __init__(self, achieved_bound):
        self.achieved_bound = achieved_bound
        super().__init__(
            f"series truncation failed; achieved bound {achieved_bound:.3e}"
        )


class DimensionTooLarge(XYZBetheError):
    """Chain length exceeds the dense-operator cap."""


class SingularInverse(XYZBetheError):
    """A matrix that must be inverted is numerically singular."""


class QRNonConvergence(XYZBetheError):
    """Eigensolver failed to converge."""


class DegeneracyUnresolved(XYZBetheError):
    """A degenerate eigenvalue cluster could not be split by probing."""


class PoleProximity(XYZBetheError):
    """An evaluation point sits too close to a theta-function zero."""


class MaxIters(XYZBetheError):
    """Newton iteration exceeded its iteration cap."""


class JacobianSingular(XYZBetheError):
    """Newton Jacobian is singular (near-degenerate root collision)."""


class DegenerateGamma(XYZBetheError):
    """sinh(gamma) = 0: trigonometric R-matrix is undefined."""


class FitFailure(XYZBetheError):
    """Asymptotic coefficient fit did not identify an integer exponent."""


class PathJumping(XYZBetheError):
    """Homotopy continuation lost the identity of the tracked solution."""
