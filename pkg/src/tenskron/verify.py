"""End-to-end reproduction of the published 2 x 2 x 2 counterexample."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fixtures as F
from .cubic2 import BinaryCubic, char_poly, h_spectrum_2dim, hyperdet
from .homotopy import TrackerConfig, h_spectrum
from .spectrum import matches_multiset, projective_distance
from .tensor import kron, reshape_singular_values
from .zeig import dominant_zeig, verify_kron_zeig


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def verify_paper(seed: int = 0, cfg: TrackerConfig = TrackerConfig(), corrupt: bool = False) -> list[Check]:
    """Run every check; ``corrupt=True`` perturbs A(2,2,2) as a negative control."""
    cub_a = BinaryCubic(F.CUBIC_A.a, F.CUBIC_A.b, F.CUBIC_A.c, 1.1) if corrupt else F.CUBIC_A
    cub_b = F.CUBIC_B
    A, B = cub_a.to_tensor(), cub_b.to_tensor()
    C = kron(B, A)
    checks: list[Check] = []

    def add(name, ok, detail):
        checks.append(Check(name, bool(ok), detail))

    err = max(abs(C[idx] - v) for idx, v in F.ENTRIES_C.items())
    add("kron entries of C", err <= 1e-15, f"max |C - printed| = {err:.2e} over 20 entries")

    for label, cub, coeffs in (("A", cub_a, F.CHARPOLY_A), ("B", cub_b, F.CHARPOLY_B)):
        got = char_poly(cub).coeffs
        err = float(np.max(np.abs(got - np.array(coeffs)))) if len(got) == 5 else np.inf
        add(f"charpoly {label}", err <= 1e-12, f"max coefficient error {err:.2e}")

    spectra = {}
    for label, cub, det, eigs in (
        ("A", cub_a, F.DET_A, F.EIGS_A),
        ("B", cub_b, F.DET_B, F.EIGS_B),
    ):
        T = cub.to_tensor()
        quartic = h_spectrum_2dim(cub)
        homot = h_spectrum(T, seed=seed, cfg=cfg)
        spectra[label] = quartic
        hd = hyperdet(cub)
        add(f"hyperdet {label}", abs(hd - det) <= 1e-12, f"{hd:.15g} vs {det:.15g}")
        for route, spec in (("quartic", quartic), ("homotopy", homot)):
            prod = complex(np.prod(spec.values()))
            add(
                f"det = prod(lambda) {label} [{route}]",
                abs(prod - det) <= 1e-8,
                f"product {prod.real:.12g}{prod.imag:+.1e}i",
            )
            add(
                f"eigenvalues {label} [{route}]",
                matches_multiset(spec.values(), eigs, 1e-9),
                ", ".join(_fmt(v) for v in spec.values()),
            )
        add(f"eigenvalue count {label}", homot.found_count == 4, f"{homot.found_count} distinct of 4")

    spec_c = h_spectrum(C, seed=seed, cfg=cfg)
    hit = min(spec_c.eigenpairs, key=lambda p: abs(abs(p.value) - F.RHO_C), default=None)
    if hit is None:
        add("eigenpair of C", False, "no eigenpairs found")
    else:
        dist = projective_distance(hit.vector, F.EIGVEC_C)
        add(
            "eigenpair of C",
            abs(abs(hit.value) - F.RHO_C) <= 1e-6 and dist < 1e-6,
            f"lambda = {_fmt(hit.value)}, projective distance {dist:.1e}",
        )
    add(
        "residuals of C",
        spec_c.max_residual() < 1e-8,
        f"max residual {spec_c.max_residual():.1e}, {spec_c.found_count} of {spec_c.expected_count} eigenpairs",
    )

    rho_a, rho_b, rho_c = spectra["A"].spectral_radius, spectra["B"].spectral_radius, spec_c.spectral_radius
    gap = rho_c - rho_a * rho_b
    add(
        "rho(C) > rho(A) rho(B)",
        gap > 1e-8,
        f"{rho_c:.12f} > {rho_a * rho_b:.12f}, gap {gap:.4e}",
    )

    top = spec_c.dominant if spec_c.eigenpairs else None
    if top is not None and np.max(np.abs(top.vector.imag)) < 1e-10:
        s = reshape_singular_values(top.vector.real, 2, 2)
        ok = all(abs(g - w) <= 5e-3 for g, w in zip(s, F.RESHAPE_SVALS))
        add("reshape singular values", ok, f"{s[0]:.4f}, {s[1]:.4f}")
    else:
        add("reshape singular values", False, "dominant eigenvector of C is not real")

    u = dominant_zeig(A, seed=seed)
    v = dominant_zeig(B, seed=seed)
    rep = verify_kron_zeig(A, B, u, v)
    add("Z-eigen kron factorization", rep.passed, f"residual {rep.residual:.1e}")
    w = dominant_zeig(C, seed=seed)
    diff = abs(abs(w.value) - abs(rep.value))
    add("dominant Z-eigenvalue of C", diff <= 1e-8, f"|{w.value:.12f}| vs |{rep.value:.12f}|")
    return checks


def _fmt(z: complex) -> str:
    z = complex(z)
    if abs(z.imag) < 1e-12:
        return f"{z.real:.12f}"
    return f"{z.real:.12f}{z.imag:+.12f}i"
