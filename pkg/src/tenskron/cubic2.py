"""Closed-form H-spectrum of symmetric 2 x 2 x 2 tensors.

Such a tensor is a binary cubic with orbit values ``a = A(1,1,1)``,
``b = A(1,1,2)``, ``c = A(1,2,2)``, ``d = A(2,2,2)``. Its hyperdeterminant is
the discriminant form

    a^2 d^2 - 6 abcd + 4 a c^3 + 4 b^3 d - 3 b^2 c^2,

and the H-eigenvalues are the roots of the quartic ``Det(A - lambda I)``,
obtained by substituting ``a -> a - lambda`` and ``d -> d - lambda``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .exceptions import ShapeError, SolverError
from .poly import CPoly, all_roots, product_of_roots
from .spectrum import EigPair, SpectrumSummary, canonical_vector, h_residual
from .tensor import SymTensor, build_symmetric, contract, hadamard_power


@dataclass(frozen=True)
class BinaryCubic:
    a: float
    b: float
    c: float
    d: float

    @classmethod
    def from_tensor(cls, A: SymTensor) -> "BinaryCubic":
        if A.order != 3 or A.dim != 2:
            raise ShapeError(f"need a 2-dimensional order-3 tensor, got order={A.order}, dim={A.dim}")
        return cls(A[1, 1, 1], A[1, 1, 2], A[1, 2, 2], A[2, 2, 2])

    def to_tensor(self) -> SymTensor:
        return build_symmetric(
            3, 2, {(1, 1, 1): self.a, (1, 1, 2): self.b, (1, 2, 2): self.c, (2, 2, 2): self.d}
        )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)


def _as_cubic(t) -> BinaryCubic:
    return t if isinstance(t, BinaryCubic) else BinaryCubic.from_tensor(t)


def hyperdet(t) -> float:
    t = _as_cubic(t)
    a, b, c, d = t.as_tuple()
    return a * a * d * d - 6 * a * b * c * d + 4 * a * c**3 + 4 * b**3 * d - 3 * b * b * c * c


def char_poly(t) -> CPoly:
    """``Det(A - lambda I)`` expanded as a monic quartic in ``lambda``."""
    t = _as_cubic(t)
    _, b, c, _ = t.as_tuple()
    a_l = np.array([t.a, -1.0])  # a - lambda
    d_l = np.array([t.d, -1.0])  # d - lambda
    terms = [
        P.polymul(P.polymul(a_l, a_l), P.polymul(d_l, d_l)),
        -6 * b * c * P.polymul(a_l, d_l),
        4 * c**3 * a_l,
        4 * b**3 * d_l,
        np.array([-3 * b * b * c * c]),
    ]
    coeffs = np.zeros(5)
    for term in terms:
        coeffs[: len(term)] += term
    return CPoly(coeffs)


def _quadratic_roots(q2: complex, q1: complex, q0: complex) -> list[complex]:
    coeffs = [q2, q1, q0]
    if all(abs(q) == 0 for q in coeffs):
        return []
    return [complex(r) for r in np.roots(coeffs)]


def _candidate_vector(cub: BinaryCubic, A: SymTensor, lam: complex) -> tuple[np.ndarray, float]:
    a, b, c, d = cub.as_tuple()
    cands = []
    for r in _quadratic_roots(a - lam, 2 * b, c) + _quadratic_roots(b, 2 * c, d - lam):
        cands.append(np.array([r, 1.0]))
    for s in _quadratic_roots(c, 2 * b, a - lam) + _quadratic_roots(d - lam, 2 * c, b):
        cands.append(np.array([1.0, s]))
    cands += [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    best, best_res = cands[-1], np.inf
    for x in cands:
        if not np.all(np.isfinite(x)):
            continue
        res = h_residual(A, lam, x)
        if res < best_res:
            best, best_res = x, res
    return best, best_res


def recover_vector(t, lam: complex, tol: float = 1e-7) -> np.ndarray:
    """Unit H-eigenvector for the eigenvalue ``lam`` of a binary cubic.

    The two eigen-equations are binary quadratics,
    ``(a-l) x1^2 + 2b x1 x2 + c x2^2 = 0`` and ``b x1^2 + 2c x1 x2 + (d-l) x2^2 = 0``.
    Candidate directions come from the roots of either equation in the ratio
    ``x1/x2`` and in ``x2/x1`` (the latter covers ``x2 = 0``, and together they
    cover the case where one equation vanishes identically). The candidate with
    the smallest residual in both equations wins.

    Raises
    ------
    SolverError
        If no candidate has residual below ``tol``.
    """
    cub = _as_cubic(t)
    x, res = _candidate_vector(cub, cub.to_tensor(), complex(lam))
    if res > tol:
        raise SolverError(f"no eigenvector for lambda={lam} (best residual {res:.3g})")
    return canonical_vector(x)


def refine_pair(A: SymTensor, lam: complex, x, iters: int = 60) -> tuple[complex, np.ndarray, float]:
    """Newton refinement of an approximate H-eigenpair.

    Solves ``A x^{m-1} - lam x^{[m-1]} = 0`` together with ``<x0, x> = 1`` in
    the least-squares sense at every step, so it keeps making progress on the
    rank-deficient Jacobians of multiple eigenvalues. Returns the iterate with
    the smallest residual.
    """
    m, n = A.order, A.dim
    x0 = np.asarray(x, dtype=complex)
    x0 = x0 / np.linalg.norm(x0)
    z = np.append(x0, complex(lam))
    best = (complex(lam), x0, h_residual(A, lam, x0))
    for _ in range(iters):
        xv, lv = z[:n], z[n]
        M = A.entries
        for _ in range(m - 2):
            M = M @ xv
        J = np.zeros((n + 1, n + 1), dtype=complex)
        J[:n, :n] = (m - 1) * (M - lv * np.diag(xv ** (m - 2)))
        J[:n, n] = -(xv ** (m - 1))
        J[n, :n] = x0.conj()
        F = np.append(M @ xv - lv * xv ** (m - 1), np.vdot(x0, xv) - 1.0)
        step = np.linalg.lstsq(J, -F, rcond=None)[0]
        z = z + step
        if not np.all(np.isfinite(z)):
            break
        res = h_residual(A, z[n], z[:n])
        if res < best[2]:
            best = (complex(z[n]), z[:n].copy(), res)
        if res == 0.0 or np.linalg.norm(step) < 1e-15 * (1 + np.linalg.norm(z)):
            break
    return best[0], canonical_vector(best[1]), best[2]


def _merge_clusters(chi: CPoly, roots: list[complex], tol: float) -> list[complex]:
    """Collapse each cluster of ``k`` nearby roots onto one multiple root.

    The cluster mean is polished by Newton steps on the ``(k-1)``-th
    derivative, where the multiple root is simple.
    """
    roots = sorted(roots, key=lambda r: (r.real, r.imag))
    out: list[complex] = []
    group: list[complex] = []
    for r in roots + [None]:
        if r is not None and group and abs(r - group[0]) <= tol * max(1.0, abs(r)):
            group.append(r)
            continue
        if group:
            z = sum(group) / len(group)
            if len(group) > 1:
                f = chi
                for _ in range(len(group) - 1):
                    f = f.derivative()
                df = f.derivative()
                for _ in range(5):
                    slope = df(z)
                    if slope == 0:
                        break
                    z = z - f(z) / slope
            out += [complex(z)] * len(group)
        group = [r] if r is not None else []
    return out


def h_spectrum_2dim(t, cluster_tol: float = 1e-6) -> SpectrumSummary:
    """All four H-eigenpairs from the roots of the characteristic quartic.

    Roots closer than ``cluster_tol`` (relative to ``max(1, |root|)``) are
    taken as one multiple root and replaced by their mean, which is far more
    accurate than any single member. Each root is then paired with its
    recovered eigenvector. Pairs whose residual is not already at rounding
    level go through :func:`refine_pair`, and the eigenvalue is finally
    replaced by the least-squares fit ``<x^[2], A x^2> / <x^[2], x^[2]>`` when
    that lowers the residual.
    """
    cub = _as_cubic(t)
    A = cub.to_tensor()
    chi = char_poly(cub)
    pairs = []
    for root in _merge_clusters(chi, all_roots(chi), cluster_tol):
        x, res = _candidate_vector(cub, A, root)
        x = canonical_vector(x)
        if res > 1e-12:
            root2, x2, res2 = refine_pair(A, root, x)
            if res2 < res:
                root, x, res = root2, x2, res2
        if res > 1e-8:
            raise SolverError(f"eigenvector recovery failed for lambda={root} (residual {res:.3g})")
        x2 = hadamard_power(x, 2)
        fit = complex(np.vdot(x2, contract(A, x)) / np.vdot(x2, x2))
        fit_res = h_residual(A, fit, x)
        if fit_res < res:
            root, res = fit, fit_res
        pairs.append(EigPair(complex(root), x, res))
    pairs.sort(key=lambda p: (p.value.real, p.value.imag))
    return SpectrumSummary(
        eigenpairs=pairs,
        expected_count=4,
        det_check=(product_of_roots(chi), hyperdet(cub)),
        method="charpoly",
    )
