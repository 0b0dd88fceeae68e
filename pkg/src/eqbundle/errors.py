"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class EqBundleError(Exception):
    """Base class for all package errors."""


class DimensionError(EqBundleError, ValueError):
    """Operands disagree on number of variables, chart dimension, or vector length."""


class AlgebraMismatch(EqBundleError, ValueError):
    """Lie-algebra-valued operands live in different algebras."""


class ChartMismatch(EqBundleError, ValueError):
    """Geometric operands live on different charts."""


class ConventionError(EqBundleError):
    """Bracket data is inconsistent with the declared homomorphism convention."""


class InvalidSampleError(EqBundleError, ValueError):
    """A frame is rank deficient at a declared sample point."""


class DivergenceError(EqBundleError, ArithmeticError):
    """Numeric integration produced non-finite values."""

    def __init__(self, message: str, last_valid_time: float):
        super().__init__(message)
        self.last_valid_time = last_valid_time


class DegenerateFrameError(EqBundleError, ArithmeticError):
    """A distribution frame lost rank along a numeric trajectory."""


class InvalidFlowError(EqBundleError, ValueError):
    """A supplied closed-form flow is not the flow of the supplied field."""


class UnsupportedError(EqBundleError):
    """The requested check is outside the supported class of inputs."""


class SceneError(EqBundleError, ValueError):
    """A scene document failed validation.

    ``problems`` is a list of ``(path, message)`` pairs where ``path`` is a
    JSON-pointer-like string into the document.
    """

    def __init__(self, problems: list[tuple[str, str]]):
        self.problems = list(problems)
        lines = [f"{path or '/'}: {msg}" for path, msg in self.problems]
        super().__init__("invalid scene:\n  " + "\n  ".join(lines))
