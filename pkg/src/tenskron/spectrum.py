"""Eigenpair and spectrum containers shared by the closed-form and homotopy solvers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .tensor import SymTensor, contract, hadamard_power


@dataclass(frozen=True, eq=False)
class EigPair:
    value: complex
    vector: np.ndarray
    residual: float
    kind: str = "H"
    multiplicity: int = 1


@dataclass
class SpectrumSummary:
    """All H-eigenpairs found for a tensor, with count and determinant checks.

    ``found_count`` is the number of distinct eigenpairs; ``multiplicity`` of
    each pair is the number of roots (or converged paths) that landed on it.
    ``det_check`` holds ``(product of eigenvalues, hyperdeterminant)`` for
    2-dimensional order-3 tensors and is ``None`` otherwise.
    """

    eigenpairs: list[EigPair]
    expected_count: int
    det_check: Optional[tuple[complex, float]] = None
    method: str = ""
    diagnostics: dict = field(default_factory=dict)

    @property
    def found_count(self) -> int:
        return len(self.eigenpairs)

    @property
    def total_multiplicity(self) -> int:
        return sum(p.multiplicity for p in self.eigenpairs)

    @property
    def complete(self) -> bool:
        return self.found_count == self.expected_count

    @property
    def spectral_radius(self) -> float:
        return max((abs(p.value) for p in self.eigenpairs), default=0.0)

    @property
    def dominant(self) -> EigPair:
        """Eigenpair of largest ``|lambda|``; ties go to the larger real part."""
        return max(self.eigenpairs, key=lambda p: (round(abs(p.value), 12), p.value.real))

    def values(self) -> np.ndarray:
        """Eigenvalue multiset, each value repeated by its multiplicity."""
        return np.array([p.value for p in self.eigenpairs for _ in range(p.multiplicity)])

    def max_residual(self) -> float:
        return max((p.residual for p in self.eigenpairs), default=0.0)


def expected_count(order: int, dim: int) -> int:
    """Number of H-eigenvalues over C counted with multiplicity, ``n (m-1)^(n-1)``."""
    return dim * (order - 1) ** (dim - 1)


def canonical_vector(x) -> np.ndarray:
    """Scale to unit 2-norm with the largest-magnitude component real and positive."""
    x = np.asarray(x, dtype=complex)
    x = x / np.linalg.norm(x)
    k = int(np.argmax(np.round(np.abs(x), 12)))
    x = x * (abs(x[k]) / x[k])
    x[k] = abs(x[k])
    return x


def projective_distance(x, y) -> float:
    """Sine of the angle between the complex lines through ``x`` and ``y``.

    Computed as the norm of the part of unit ``x`` orthogonal to unit ``y``,
    which stays accurate for nearly collinear vectors.
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    x = x / np.linalg.norm(x)
    y = y / np.linalg.norm(y)
    return float(np.linalg.norm(x - y * np.vdot(y, x)))


def h_residual(A: SymTensor, value: complex, x) -> float:
    """``||A x^{m-1} - lambda x^{[m-1]}||`` at unit-norm ``x``."""
    x = np.asarray(x, dtype=complex)
    x = x / np.linalg.norm(x)
    return float(np.linalg.norm(contract(A, x) - value * hadamard_power(x, A.order - 1)))


def matches_multiset(found, expected, tol: float) -> bool:
    """Greedy one-to-one matching of two complex multisets within ``tol``."""
    found = list(np.asarray(found, dtype=complex))
    if len(found) != len(expected):
        return False
    for e in expected:
        dists = [abs(f - e) for f in found]
        k = int(np.argmin(dists))
        if dists[k] > tol:
            return False
        found.pop(k)
    return True
