"""All complex H-eigenpairs by polynomial homotopy continuation.

The target system in the unknowns ``z = (x, lambda)`` is

    F_i(z) = [A x^{m-1}]_i - lambda x_i^{m-1},   i = 1..n
    F_{n+1}(z) = <b, x> - 1

with random complex ``b`` fixing the scale of ``x``. It is reached from the
total-degree start system ``x_i^m - c_i``, ``lambda - c_{n+1}`` through

    H(z, t) = (1 - t) gamma G(z) + t F(z),

with a random unit-modulus ``gamma``. Of the ``m^n`` paths, the ones that
end at finite points give the ``n (m-1)^{n-1}`` eigenpairs; the rest diverge.

All paths of a homotopy are tracked together: every array carries a leading
batch axis and each path keeps its own ``t`` and step size.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import ShapeError
from .spectrum import (
    EigPair,
    SpectrumSummary,
    canonical_vector,
    expected_count,
    h_residual,
    projective_distance,
)
from .tensor import SymTensor

log = logging.getLogger(__name__)

MAX_EXPECTED_COUNT = 200

CONVERGED = "converged"
DIVERGED = "diverged"
STALLED = "stalled"


@dataclass(frozen=True)
class TrackerConfig:
    """Tunable tracker settings (all exposed on the command line)."""

    min_step: float = 1e-7
    max_step: float = 0.1
    initial_step: float = 0.01
    divergence_threshold: float = 1e8
    corrector_iters: int = 3
    corrector_tol: float = 1e-9
    contraction: float = 0.5
    endgame_t: float = 1.0 - 1e-6
    sharpen_tol: float = 1e-12
    accept_tol: float = 1e-10
    sharpen_iters: int = 60
    sharpen_jump: float = 0.1
    max_steps: int = 20000
    cluster_tol: float = 1e-6
    retries: int = 3


def _contract_batch(entries: np.ndarray, x: np.ndarray, times: int) -> np.ndarray:
    """Contract the trailing ``times`` modes of ``entries`` with each row of ``x``."""
    out = np.tensordot(x, entries, axes=([-1], [-1]))
    for _ in range(times - 1):
        out = np.einsum("p...k,pk->p...", out, x)
    return out


def _solve(J: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Batched ``J \\ r``; singular members fall back to least squares."""
    try:
        return np.linalg.solve(J, r[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.empty_like(r)
        for k in range(len(r)):
            try:
                out[k] = np.linalg.solve(J[k], r[k])
            except np.linalg.LinAlgError:
                out[k] = np.linalg.lstsq(J[k], r[k], rcond=None)[0]
        return out


@dataclass(frozen=True, eq=False)
class EigSystem:
    """H-eigen equations of ``tensor`` plus the affine chart ``<b, x> = 1``."""

    tensor: SymTensor
    normalization: np.ndarray

    @property
    def n(self) -> int:
        return self.tensor.dim

    @property
    def size(self) -> int:
        return self.tensor.dim + 1

    def residual(self, z: np.ndarray) -> np.ndarray:
        z = np.atleast_2d(z)
        m, n = self.tensor.order, self.n
        x, lam = z[:, :n], z[:, n]
        ax = _contract_batch(self.tensor.entries, x, m - 1)
        out = np.empty_like(z)
        out[:, :n] = ax - lam[:, None] * x ** (m - 1)
        out[:, n] = x @ self.normalization - 1.0
        return out

    def jacobian(self, z: np.ndarray) -> np.ndarray:
        z = np.atleast_2d(z)
        m, n = self.tensor.order, self.n
        x, lam = z[:, :n], z[:, n]
        J = np.zeros((len(z), n + 1, n + 1), dtype=complex)
        if m > 2:
            M = _contract_batch(self.tensor.entries, x, m - 2)
        else:
            M = np.broadcast_to(self.tensor.entries, (len(z), n, n))
        J[:, :n, :n] = (m - 1) * M
        idx = np.arange(n)
        J[:, idx, idx] -= (m - 1) * lam[:, None] * x ** (m - 2)
        J[:, :n, n] = -(x ** (m - 1))
        J[:, n, :n] = self.normalization
        return J


def build_system(A: SymTensor, seed: int) -> EigSystem:
    """Target system for ``A`` with a seeded random normalization.

    The normalization coefficients have magnitudes uniform on [0.5, 1.5] and
    uniform random phases.
    """
    rng = np.random.default_rng(seed)
    mag = rng.uniform(0.5, 1.5, A.dim)
    phase = rng.uniform(0, 2 * np.pi, A.dim)
    return EigSystem(A, mag * np.exp(1j * phase))


@dataclass(frozen=True, eq=False)
class TotalDegreeStart:
    """Start system ``x_i^m - c_i`` (i = 1..n), ``lambda - c_{n+1}``."""

    order: int
    constants: np.ndarray

    @property
    def n(self) -> int:
        return len(self.constants) - 1

    def residual(self, z: np.ndarray) -> np.ndarray:
        z = np.atleast_2d(z)
        out = np.empty_like(z)
        out[:, : self.n] = z[:, : self.n] ** self.order - self.constants[: self.n]
        out[:, self.n] = z[:, self.n] - self.constants[self.n]
        return out

    def jacobian(self, z: np.ndarray) -> np.ndarray:
        z = np.atleast_2d(z)
        n, m = self.n, self.order
        J = np.zeros((len(z), n + 1, n + 1), dtype=complex)
        idx = np.arange(n)
        J[:, idx, idx] = m * z[:, :n] ** (m - 1)
        J[:, n, n] = 1.0
        return J

    def solutions(self) -> np.ndarray:
        """All ``m^n`` start points, in lexicographic order of root indices."""
        n, m = self.n, self.order
        unit = np.exp(2j * np.pi * np.arange(m) / m)
        base = self.constants[:n] ** (1.0 / m)
        pts = []
        for ks in itertools.product(range(m), repeat=n):
            pts.append(np.append(base * unit[list(ks)], self.constants[n]))
        return np.array(pts)


@dataclass(frozen=True, eq=False)
class Homotopy:
    """``H(z, t) = (1 - t) gamma G(z) + t F(z)``."""

    target: object
    start: object
    gamma: complex

    def residual(self, z, t):
        t = np.asarray(t)[:, None]
        return (1 - t) * self.gamma * self.start.residual(z) + t * self.target.residual(z)

    def jacobian(self, z, t):
        t = np.asarray(t)[:, None, None]
        return (1 - t) * self.gamma * self.start.jacobian(z) + t * self.target.jacobian(z)

    def dt(self, z):
        return self.target.residual(z) - self.gamma * self.start.residual(z)

    def velocity(self, z, t):
        """Davidenko right-hand side ``dz/dt = -H_z^{-1} H_t``."""
        return _solve(self.jacobian(z, t), -self.dt(z))


def start_system(system: EigSystem, seed: int) -> tuple[Homotopy, np.ndarray]:
    """Total-degree homotopy for ``system`` and its ``m^n`` start points."""
    rng = np.random.default_rng([seed, 1])
    n = system.n
    phase = rng.uniform(0, 2 * np.pi, n + 1)
    mag = rng.uniform(0.5, 1.5, n + 1)
    G = TotalDegreeStart(system.tensor.order, mag * np.exp(1j * phase))
    gamma = np.exp(1j * rng.uniform(0, 2 * np.pi))
    return Homotopy(system, G, complex(gamma)), G.solutions()


@dataclass(frozen=True, eq=False)
class PathResult:
    endpoint: np.ndarray
    status: str
    steps: int
    final_residual: float
    t: float = 1.0


def _rk4(H: Homotopy, z, t, h):
    hc = h[:, None]
    k1 = H.velocity(z, t)
    k2 = H.velocity(z + 0.5 * hc * k1, t + 0.5 * h)
    k3 = H.velocity(z + 0.5 * hc * k2, t + 0.5 * h)
    k4 = H.velocity(z + hc * k3, t + h)
    return z + hc / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _correct(H: Homotopy, z, t, cfg: TrackerConfig):
    """Newton corrector at fixed ``t``; returns the corrected points and an ok mask."""
    ok = np.ones(len(z), dtype=bool)
    done = np.zeros(len(z), dtype=bool)
    prev = np.full(len(z), np.inf)
    for _ in range(cfg.corrector_iters):
        dz = _solve(H.jacobian(z, t), -H.residual(z, t))
        size = np.linalg.norm(dz, axis=1)
        bad = ~np.isfinite(size) | (size > cfg.contraction * prev)
        ok &= ~(bad & ~done)
        step = ok & ~done
        z = np.where(step[:, None], z + dz, z)
        done |= size < cfg.corrector_tol * (1 + np.linalg.norm(z, axis=1))
        prev = size
        if np.all(done | ~ok):
            break
    return z, ok & done


def _sharpen(F, z, cfg: TrackerConfig):
    """Plain Newton on the target; keeps the iterate with the smallest residual."""
    best = z.copy()
    best_res = np.linalg.norm(F.residual(z), axis=1)
    best_res[~np.isfinite(best_res)] = np.inf
    active = best_res > 0
    for _ in range(cfg.sharpen_iters):
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        zi = z[idx]
        with np.errstate(all="ignore"):
            dz = _solve(F.jacobian(zi), -F.residual(zi))
            zi = zi + dz
            res = np.linalg.norm(F.residual(zi), axis=1)
        res[~np.isfinite(res)] = np.inf
        z[idx] = zi
        better = res < best_res[idx]
        best[idx[better]] = zi[better]
        best_res[idx[better]] = res[better]
        small = np.linalg.norm(dz, axis=1) < 1e-15 * (1 + np.linalg.norm(zi, axis=1))
        active[idx[small | ~np.isfinite(res) | (res == 0)]] = False
    return best, best_res


def track_paths(H: Homotopy, starts: np.ndarray, cfg: TrackerConfig = TrackerConfig()) -> list[PathResult]:
    """Track every start point from ``t = 0`` to ``t = 1``.

    Each path takes RK4 predictor steps on the Davidenko equation followed by
    at most ``cfg.corrector_iters`` Newton corrections, each of which must
    shrink by ``cfg.contraction``. A rejected step halves the step size; three
    accepted steps in a row double it, within ``[min_step, max_step]``. Paths
    whose norm passes ``divergence_threshold`` are dropped as diverged, and
    step-size underflow marks a path stalled. At ``t = endgame_t`` the
    survivors are sharpened by plain Newton on the target system; a path counts
    as converged when the sharpened residual is below ``accept_tol`` and
    sharpening moved it by less than ``sharpen_jump * (1 + |z|)``. Paths that
    would move further are heading to infinity and are marked diverged.
    """
    z = np.array(starts, dtype=complex, ndmin=2)
    P = len(z)
    t = np.zeros(P)
    h = np.full(P, cfg.initial_step)
    streak = np.zeros(P, dtype=int)
    steps = np.zeros(P, dtype=int)
    status = np.array([""] * P, dtype=object)
    active = np.ones(P, dtype=bool)
    t_end = cfg.endgame_t

    while active.any():
        idx = np.nonzero(active)[0]
        zi, ti = z[idx], t[idx]
        hi = np.minimum(h[idx], t_end - ti)
        with np.errstate(all="ignore"):
            pred = _rk4(H, zi, ti, hi)
            finite = np.all(np.isfinite(pred), axis=1)
            pred[~finite] = zi[~finite]
            corr, ok = _correct(H, pred, ti + hi, cfg)
        ok &= finite & np.all(np.isfinite(corr), axis=1)
        steps[idx] += 1

        acc = idx[ok]
        z[acc] = corr[ok]
        t[acc] = np.where(t_end - (ti[ok] + hi[ok]) <= 0, t_end, ti[ok] + hi[ok])
        streak[acc] += 1
        grow = acc[streak[acc] >= 3]
        h[grow] = np.minimum(2 * h[grow], cfg.max_step)
        streak[grow] = 0

        rej = idx[~ok]
        h[rej] = 0.5 * hi[~ok]
        streak[rej] = 0

        norms = np.linalg.norm(z[idx], axis=1)
        div = idx[norms > cfg.divergence_threshold]
        status[div] = DIVERGED
        stall = idx[(h[idx] < cfg.min_step) | (steps[idx] >= cfg.max_steps)]
        status[stall[status[stall] == ""]] = STALLED
        finished = idx[t[idx] >= t_end]
        active[finished] = False
        active[div] = False
        active[stall] = False

    results: list[Optional[PathResult]] = [None] * P
    reached = np.nonzero(status == "")[0]
    if reached.size:
        sharp, res = _sharpen(H.target, z[reached].copy(), cfg)
        for k, i in enumerate(reached):
            end = z[i]
            jump = np.linalg.norm(sharp[k] - end)
            if jump > cfg.sharpen_jump * (1 + np.linalg.norm(sharp[k])):
                # Newton left the path's neighbourhood: the path was heading to infinity
                st = DIVERGED
                sharp[k], res[k] = end, np.linalg.norm(H.target.residual(end[None, :]))
            elif res[k] < cfg.accept_tol:
                st = CONVERGED
            else:
                st = STALLED
            results[i] = PathResult(sharp[k], st, int(steps[i]), float(res[k]), float(t[i]))
    for i in range(P):
        if results[i] is None:
            res = float(np.linalg.norm(H.residual(z[i : i + 1], t[i : i + 1])))
            results[i] = PathResult(z[i].copy(), str(status[i]), int(steps[i]), res, float(t[i]))
    return results


def track_path(H: Homotopy, start, cfg: TrackerConfig = TrackerConfig()) -> PathResult:
    return track_paths(H, np.asarray(start, dtype=complex)[None, :], cfg)[0]


def _cluster(A: SymTensor, endpoints: list[np.ndarray], tol: float) -> list[EigPair]:
    """Group converged endpoints by eigenvalue and projective eigenvector distance."""
    n = A.dim
    pts = sorted(endpoints, key=lambda z: (round(z[n].real, 9), round(z[n].imag, 9)))
    clusters: list[list[np.ndarray]] = []
    for z in pts:
        for group in clusters:
            rep = group[0]
            if abs(z[n] - rep[n]) < tol and projective_distance(z[:n], rep[:n]) < tol:
                group.append(z)
                break
        else:
            clusters.append([z])
    pairs = []
    for group in clusters:
        best = min(group, key=lambda z: h_residual(A, z[n], z[:n]))
        x = canonical_vector(best[:n])
        lam = complex(best[n])
        pairs.append(EigPair(lam, x, h_residual(A, lam, x), "H", len(group)))
    return pairs


def _merge(A: SymTensor, into: list[EigPair], new: list[EigPair], tol: float) -> list[EigPair]:
    out = list(into)
    for p in new:
        for k, q in enumerate(out):
            if abs(p.value - q.value) < tol and projective_distance(p.vector, q.vector) < tol:
                if p.multiplicity > q.multiplicity:
                    out[k] = EigPair(q.value, q.vector, q.residual, "H", p.multiplicity)
                break
        else:
            out.append(p)
    return out


def h_spectrum(A: SymTensor, seed: int = 0, cfg: TrackerConfig = TrackerConfig()) -> SpectrumSummary:
    """All H-eigenpairs of ``A`` by homotopy continuation.

    Endpoints are clustered with ``cfg.cluster_tol``; the cluster size is the
    eigenpair's multiplicity. If fewer than ``n (m-1)^{n-1}`` distinct pairs
    are found and the converged paths do not account for the full count, the
    solve is repeated with fresh seeds (up to ``cfg.retries`` times) and the
    results are merged. An incomplete spectrum is returned with
    ``complete == False`` rather than raised, since non-generic tensors have
    genuinely fewer distinct eigenpairs.
    """
    expected = expected_count(A.order, A.dim)
    if expected > MAX_EXPECTED_COUNT:
        raise ShapeError(f"{expected} eigenvalues expected; limit is {MAX_EXPECTED_COUNT}")
    pairs: list[EigPair] = []
    stats = {"attempts": 0, "paths": 0, CONVERGED: 0, DIVERGED: 0, STALLED: 0}
    for attempt in range(cfg.retries + 1):
        sub = seed if attempt == 0 else int(np.random.SeedSequence([seed, attempt]).generate_state(1)[0])
        system = build_system(A, sub)
        H, starts = start_system(system, sub)
        results = track_paths(H, starts, cfg)
        stats["attempts"] += 1
        stats["paths"] += len(results)
        for r in results:
            stats[r.status] += 1
        good = [r.endpoint for r in results if r.status == CONVERGED]
        pairs = _merge(A, pairs, _cluster(A, good, cfg.cluster_tol), cfg.cluster_tol)
        if len(pairs) >= expected or sum(p.multiplicity for p in pairs) >= expected:
            break
        log.info("attempt %d found %d of %d eigenpairs; retrying", attempt, len(pairs), expected)
    pairs.sort(key=lambda p: (round(p.value.real, 10), round(p.value.imag, 10)))
    det_check = None
    if A.order == 3 and A.dim == 2:
        from .cubic2 import hyperdet

        det_check = (complex(np.prod([p.value ** p.multiplicity for p in pairs])), hyperdet(A))
    return SpectrumSummary(
        eigenpairs=pairs,
        expected_count=expected,
        det_check=det_check,
        method="homotopy",
        diagnostics=stats,
    )
