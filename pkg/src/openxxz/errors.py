"""Exception types raised across the package."""


class OpenXXZError(Exception):
    """Base class for all package errors."""


class DimensionError(OpenXXZError, ValueError):
    """Dense operator would exceed the configured dimension cap."""


class PoleError(OpenXXZError, ZeroDivisionError):
    """Evaluation hit (or came too close to) a pole."""


class BranchCutError(OpenXXZError, ValueError):
    """Inverse function evaluated on an ambiguous branch."""


class KernelWindowError(OpenXXZError, ValueError):
    """Kernel index outside its admissible window."""


class ConvergenceError(OpenXXZError, RuntimeError):
    """Iterative procedure failed to converge."""


class QuadratureError(ConvergenceError):
    """Quadrature failed to meet its tolerance or tail bound."""


class ConfigError(OpenXXZError, ValueError):
    """Invalid run configuration."""
