"""Univariate complex polynomials and simultaneous root finding."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import SolverError

_TRIM = 1e-300


@dataclass(frozen=True, eq=False)
class CPoly:
    """Polynomial with complex coefficients in ascending degree order.

    Trailing coefficients with magnitude at or below 1e-300 are trimmed, so
    the last stored coefficient is the leading one.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        nz = np.nonzero(np.abs(c) > _TRIM)[0]
        c = c[: nz[-1] + 1] if nz.size else c[:1] * 0
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        return evaluate(self, z)

    def __repr__(self):
        return f"CPoly({self.coeffs.tolist()})"

    def monic(self) -> "CPoly":
        if self.degree < 0 or abs(self.coeffs[-1]) <= _TRIM:
            raise ValueError("zero polynomial cannot be normalized")
        return CPoly(self.coeffs / self.coeffs[-1])

    def derivative(self) -> "CPoly":
        if self.degree < 1:
            return CPoly([0.0])
        return CPoly(self.coeffs[1:] * np.arange(1, self.degree + 1))


def evaluate(p: CPoly, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in p.coeffs[::-1]:
        acc = acc * z + c
    return acc[()] if acc.ndim == 0 else acc


def product_of_roots(p: CPoly) -> complex:
    """Product of all roots from Vieta's formula, ``(-1)^n c_0 / c_n``."""
    if p.degree < 1:
        raise ValueError("product of roots needs degree >= 1")
    lead = p.coeffs[-1]
    if abs(lead) <= _TRIM:
        raise ValueError("zero leading coefficient")
    return complex((-1) ** p.degree * p.coeffs[0] / lead)


def all_roots(p: CPoly, max_iter: int = 500, tol: float = 1e-14, angle: float = 0.4) -> list[complex]:
    """All roots of ``p`` by Aberth-Ehrlich simultaneous iteration.

    Initial guesses sit on the Cauchy-bound circle, rotated by ``angle``
    radians. A root is done when its correction drops below
    ``tol * (1 + |z|)`` or when ``|p(z)|`` is within the rounding error of
    Horner's scheme (the only reachable stopping point for multiple roots).
    Multiple roots come back as clusters of nearby values.

    Raises
    ------
    SolverError
        If not every root has converged after ``max_iter`` sweeps.
    """
    n = p.degree
    if n < 1:
        raise ValueError("root finding needs degree >= 1")
    c = p.monic().coeffs
    if n == 1:
        return [complex(-c[0])]
    dc = c[1:] * np.arange(1, n + 1)
    absc = np.abs(c)
    radius = 1.0 + np.max(absc[:-1])
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + angle))
    eps = np.finfo(float).eps
    done = np.zeros(n, dtype=bool)

    for _ in range(max_iter):
        for i in range(n):
            if done[i]:
                continue
            zi = z[i]
            pv = dpv = 0j
            bound = 0.0
            azi = abs(zi)
            for k in range(n, -1, -1):
                pv = pv * zi + c[k]
                bound = bound * azi + absc[k]
                if k:
                    dpv = dpv * zi + dc[k - 1]
            if abs(pv) <= 4 * n * eps * bound:
                done[i] = True
                continue
            diff = zi - np.delete(z, i)
            ratio = pv / dpv if dpv != 0 else pv
            w = ratio / (1.0 - ratio * np.sum(1.0 / diff))
            z[i] = zi - w
            if abs(w) < tol * (1.0 + abs(z[i])):
                done[i] = True
        if done.all():
            return [complex(r) for r in z]
    raise SolverError(f"Aberth iteration did not converge in {max_iter} sweeps")
