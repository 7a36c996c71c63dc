"""Exception types raised by sketchqr."""


class SketchQRError(Exception):
    """Base class for library errors."""


class DimensionError(SketchQRError, ValueError):
    """Operand shapes are incompatible or outside an operation's domain."""


class SingularPreconditionerError(SketchQRError, ValueError):
    """A triangular factor used as a preconditioner has a zero diagonal entry."""


class ConvergenceError(SketchQRError, RuntimeError):
    """An iterative kernel did not converge within its sweep budget."""


class RankMismatchError(SketchQRError, ValueError):
    """A sketch lost rank on the subspace it was supposed to embed."""


class SpectrumError(SketchQRError, ValueError):
    """A spectrum description or generator argument is invalid."""
