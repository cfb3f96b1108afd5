"""Exception types shared across the package."""


class TenskronError(Exception):
    """Base class for package errors."""


class ShapeError(TenskronError, ValueError):
    """Order or dimension mismatch between tensors and vectors."""


class TensorFormatError(TenskronError, ValueError):
    """Malformed tensor input (bad JSON, inconsistent generators, bad indices)."""


class SolverError(TenskronError, RuntimeError):
    """An iterative solver failed to converge."""
