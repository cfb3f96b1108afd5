"""Real Z-eigenpairs by the shifted symmetric higher-order power method.

A Z-eigenpair satisfies ``A x^{m-1} = lambda x`` with ``||x|| = 1``. The
iteration ``x <- normalize(A x^{m-1} + alpha x)`` increases
``lambda(x) = x . A x^{m-1}`` monotonically for a large enough positive shift
``alpha``; with a negative shift the sign of the update is flipped and
``lambda`` decreases monotonically instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .exceptions import ShapeError, SolverError
from .tensor import SymTensor, kron, kron_vec

MONOTONE_SLACK = 1e-14


@dataclass(frozen=True, eq=False)
class ZEigPair:
    value: float
    vector: np.ndarray
    residual: float
    converged: bool
    iterations: int = 0
    shift: float = 0.0


def _apply(A: SymTensor, x: np.ndarray) -> np.ndarray:
    out = A.entries
    for _ in range(A.order - 1):
        out = out @ x
    return out


def z_residual(A: SymTensor, value: float, x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.linalg.norm(_apply(A, x) - value * x))


def default_shift(A: SymTensor) -> float:
    """Shift large enough to make the shifted objective convex on the sphere."""
    return 1.0 + A.order * float(np.max(np.abs(A.entries))) * A.dim ** (A.order - 1)


def sshopm_iterates(
    A: SymTensor, shift: float, start, adaptive: bool = False
) -> Iterator[tuple[float, np.ndarray, float]]:
    """Yield ``(lambda, x, residual)`` for each SS-HOPM iterate, starting with ``start``.

    With ``adaptive=True`` the shift magnitude starts at ``|shift|`` and is
    halved after every monotone step. A step that breaks monotonicity is
    discarded, the shift doubled, and halving stops for the rest of the run.
    """
    x = np.asarray(start, dtype=float)
    nrm = np.linalg.norm(x)
    if not nrm > 0:
        raise ValueError("start vector must be nonzero")
    x = x / nrm
    sign = 1.0 if shift >= 0 else -1.0
    alpha = abs(shift)
    cap = abs(shift)
    shrinking = adaptive
    ax = _apply(A, x)
    lam = float(x @ ax)
    yield lam, x, float(np.linalg.norm(ax - lam * x))
    while True:
        y = sign * (ax + sign * alpha * x)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            raise SolverError("SS-HOPM iterate vanished; increase the shift")
        x_new = y / ny
        ax_new = _apply(A, x_new)
        lam_new = float(x_new @ ax_new)
        if adaptive and sign * (lam_new - lam) < -MONOTONE_SLACK:
            if alpha >= cap:
                raise SolverError("SS-HOPM lost monotonicity at the maximal shift")
            alpha = min(2 * alpha if alpha > 0 else cap / 1024, cap)
            shrinking = False
            continue
        x, ax, lam = x_new, ax_new, lam_new
        yield lam, x, float(np.linalg.norm(ax - lam * x))
        if shrinking:
            alpha *= 0.5


def sshopm(
    A: SymTensor,
    shift: Optional[float] = None,
    start=None,
    max_iters: int = 20000,
    tol: float = 1e-13,
    residual_tol: float = 1e-11,
    adaptive: bool = False,
) -> ZEigPair:
    """Run SS-HOPM from ``start`` until ``lambda`` settles.

    Stops once successive ``lambda`` values differ by less than ``tol`` and
    the eigen-residual is below ``residual_tol``; ``converged`` is False if
    ``max_iters`` is reached first. ``shift=None`` uses :func:`default_shift`
    (maximizing).
    """
    if shift is None:
        shift = default_shift(A)
    if start is None:
        start = np.ones(A.dim)
    prev = None
    k = 0
    for k, (lam, x, res) in enumerate(sshopm_iterates(A, shift, start, adaptive)):
        if prev is not None and abs(lam - prev) < tol and res < residual_tol:
            return ZEigPair(lam, x, res, True, k, shift)
        if k >= max_iters:
            break
        prev = lam
    return ZEigPair(lam, x, res, False, k, shift)


def dominant_zeig(
    A: SymTensor, starts: int = 20, seed: int = 0, adaptive: bool = True, max_iters: int = 20000
) -> ZEigPair:
    """Largest-magnitude Z-eigenpair found from ``starts`` random unit starts.

    Each start is run with both shift signs. The winner is the converged pair
    with the largest ``|lambda|``, ties going to the earliest start.
    """
    if starts < 1:
        raise ValueError("need at least one start")
    rng = np.random.default_rng(seed)
    alpha = default_shift(A)
    best: Optional[ZEigPair] = None
    for _ in range(starts):
        x0 = rng.standard_normal(A.dim)
        for shift in (alpha, -alpha):
            pair = sshopm(A, shift, x0, max_iters=max_iters, adaptive=adaptive)
            if pair.converged and (best is None or abs(pair.value) > abs(best.value) + 1e-12):
                best = pair
    if best is None:
        raise SolverError("no SS-HOPM run converged")
    return best


@dataclass(frozen=True)
class KronZReport:
    value: float
    residual: float
    passed: bool


def verify_kron_zeig(
    A: SymTensor, B: SymTensor, u_pair: ZEigPair, v_pair: ZEigPair, tol: float = 1e-8
) -> KronZReport:
    """Check that ``(lambda_A lambda_B, v (x) u)`` is a Z-eigenpair of ``kron(B, A)``."""
    if A.order != B.order:
        raise ShapeError(f"order mismatch: {A.order} vs {B.order}")
    C = kron(B, A)
    w = kron_vec(v_pair.vector, u_pair.vector).real
    value = u_pair.value * v_pair.value
    res = z_residual(C, value, w)
    return KronZReport(value, res, bool(res < tol))
