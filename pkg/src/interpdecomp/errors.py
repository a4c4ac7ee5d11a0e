"""Exception types raised by the kernels, algorithms and loaders."""
import numpy as np


class InvalidArgumentError(ValueError):
    """Argument outside an operation's documented domain (shapes, ranks, steps)."""


class SingularMatrixError(np.linalg.LinAlgError):
    pass


class NotPositiveDefiniteError(np.linalg.LinAlgError):
    pass


class ConvergenceError(np.linalg.LinAlgError):
    pass


class MatrixMarketParseError(ValueError):
    def __init__(self, path, lineno, message):
        self.path = path
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: {message}")


class IdxFormatError(ValueError):
    pass
