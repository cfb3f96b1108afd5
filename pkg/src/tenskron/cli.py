"""Command-line interface.

Exit codes: 0 success, 1 failed check, 2 unreadable input, 3 shape mismatch,
4 solver failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from .cubic2 import BinaryCubic, char_poly, h_spectrum_2dim, hyperdet
from .exceptions import ShapeError, SolverError, TensorFormatError
from .homotopy import TrackerConfig, h_spectrum
from .poly import all_roots, product_of_roots
from .search import CLASSES, run_search, write_csv, write_jsonl_record
from .spectrum import SpectrumSummary, matches_multiset
from .tensor import kron, load_tensor, save_tensor, tensor_to_dict
from .verify import _fmt, verify_paper
from .zeig import dominant_zeig

EXIT_OK, EXIT_CHECK, EXIT_PARSE, EXIT_SHAPE, EXIT_SOLVER = 0, 1, 2, 3, 4


def _cplx(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _tracker_config(args) -> TrackerConfig:
    return TrackerConfig(
        min_step=args.min_step,
        max_step=args.max_step,
        divergence_threshold=args.divergence,
        cluster_tol=args.cluster_tol,
        retries=args.retries,
    )


def _spectrum_json(spec: SpectrumSummary) -> dict:
    return {
        "method": spec.method,
        "eigenpairs": [
            {
                "value": _cplx(p.value),
                "vector": [_cplx(c) for c in p.vector],
                "residual": p.residual,
                "multiplicity": p.multiplicity,
            }
            for p in spec.eigenpairs
        ],
        "spectral_radius": spec.spectral_radius,
        "expected_count": spec.expected_count,
        "found_count": spec.found_count,
        "total_multiplicity": spec.total_multiplicity,
        "complete": spec.complete,
        "det_check": (
            {"product": _cplx(spec.det_check[0]), "hyperdet": spec.det_check[1]} if spec.det_check else None
        ),
        "diagnostics": spec.diagnostics,
    }


def _print_spectrum(spec: SpectrumSummary, digits: int) -> None:
    print(f"{'lambda':>36}  {'mult':>4}  {'residual':>9}  eigenvector")
    for p in spec.eigenpairs:
        z = p.value
        val = f"{z.real:.{digits}f}{z.imag:+.{digits}f}i"
        vec = " ".join(f"{c.real:+.6f}{c.imag:+.6f}i" for c in p.vector)
        print(f"{val:>36}  {p.multiplicity:>4}  {p.residual:9.1e}  [{vec}]")
    print(f"spectral radius rho_H = {spec.spectral_radius:.{digits}f}")
    flag = "" if spec.complete else "  (WARNING: fewer distinct eigenpairs than expected)"
    print(f"count: {spec.found_count} distinct / {spec.expected_count} expected, "
          f"multiplicity total {spec.total_multiplicity}{flag}")
    if spec.det_check:
        prod, hd = spec.det_check
        print(f"det check: prod(lambda) = {_fmt(prod)}, hyperdet = {hd:.{digits}f}")


def cmd_kron(args) -> int:
    B, A = load_tensor(args.left), load_tensor(args.right)
    C = kron(B, A)
    if args.output:
        save_tensor(C, args.output)
    else:
        print(json.dumps(tensor_to_dict(C), indent=1))
    return EXIT_OK


def cmd_heig(args) -> int:
    A = load_tensor(args.tensor)
    spec = h_spectrum(A, seed=args.seed, cfg=_tracker_config(args))
    oracle = h_spectrum_2dim(A) if (A.order == 3 and A.dim == 2) else None
    agree = matches_multiset(spec.values(), oracle.values(), args.tol) if oracle else None
    if args.format == "json":
        out = _spectrum_json(spec)
        if oracle:
            out["charpoly_route"] = _spectrum_json(oracle)
            out["routes_agree"] = agree
        print(json.dumps(out, indent=1))
    else:
        _print_spectrum(spec, args.digits)
        if oracle:
            print(f"homotopy vs characteristic polynomial: {'agree' if agree else 'DISAGREE'} (tol {args.tol:g})")
    if spec.total_multiplicity < spec.expected_count:
        print("solver lost paths after all retries", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def cmd_zeig(args) -> int:
    A = load_tensor(args.tensor)
    pair = dominant_zeig(A, starts=args.starts, seed=args.seed)
    if args.format == "json":
        print(json.dumps({
            "value": pair.value, "vector": pair.vector.tolist(),
            "residual": pair.residual, "converged": pair.converged, "iterations": pair.iterations,
        }, indent=1))
    else:
        print(f"lambda = {pair.value:.{args.digits}f}")
        print("x = [" + " ".join(f"{c:+.{args.digits}f}" for c in pair.vector) + "]")
        print(f"residual {pair.residual:.1e}, {pair.iterations} iterations")
    return EXIT_OK


def cmd_charpoly(args) -> int:
    A = load_tensor(args.tensor)
    cub = BinaryCubic.from_tensor(A)
    chi = char_poly(cub)
    roots = all_roots(chi)
    coeffs = chi.coeffs.real
    if args.format == "json":
        print(json.dumps({
            "coefficients": coeffs.tolist(),
            "roots": [_cplx(r) for r in roots],
            "hyperdet": hyperdet(cub),
            "product_of_roots": _cplx(product_of_roots(chi)),
        }, indent=1))
    else:
        terms = [f"({Fraction(c).limit_denominator(10**6)}) l^{k}" for k, c in enumerate(coeffs)]
        print("Det(A - l I) = " + " + ".join(terms))
        print("coefficients: " + ", ".join(f"{c:.{args.digits}g}" for c in coeffs))
        print("roots: " + ", ".join(_fmt(r) for r in roots))
        print(f"hyperdet = {hyperdet(cub):.{args.digits}g}")
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    t0 = time.perf_counter()
    checks = verify_paper(seed=args.seed, cfg=_tracker_config(args), corrupt=args.corrupt_fixture)
    elapsed = time.perf_counter() - t0
    failed = [c for c in checks if not c.passed]
    if args.format == "json":
        print(json.dumps({
            "checks": [c.__dict__ for c in checks],
            "passed": not failed,
            "seconds": elapsed,
        }, indent=1))
    else:
        width = max(len(c.name) for c in checks)
        for c in checks:
            print(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<{width}}  {c.detail}")
        print(f"{len(checks) - len(failed)}/{len(checks)} checks passed in {elapsed:.1f} s")
    if failed:
        print("failed: " + ", ".join(c.name for c in failed), file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def cmd_search(args) -> int:
    out = open(args.output, "w") if args.output else None
    try:
        def emit(rec):
            if out:
                write_jsonl_record(rec, out)
            elif args.format == "json":
                write_jsonl_record(rec, sys.stdout)

        records, summary = run_search(
            args.sample_class, args.samples, args.seed, _tracker_config(args),
            off_range=args.off_range, workers=args.workers, on_record=emit,
        )
        if out:
            out.write(json.dumps({"summary": summary}) + "\n")
    finally:
        if out:
            out.close()
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            write_csv(records, fh)
    if args.format == "json":
        if not args.output:
            print(json.dumps({"summary": summary}))
    else:
        print(f"class {args.sample_class}, {summary['samples']} samples, {summary['skipped']} skipped")
        print(f"counterexamples: {summary['counterexamples']} ({summary['frequency']:.1%})")
        if summary["max_gap_record"]:
            r = summary["max_gap_record"]
            print(f"max gap {summary['max_gap']:.6e} at sample {r['index']} (seed {r['seed']})")
            print(f"  A = {r['tensor_a']}\n  B = {r['tensor_b']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--tol", type=float, default=1e-7, help="agreement tolerance between routes")
    common.add_argument("--digits", type=int, default=12, help="printed digits")
    common.add_argument("--output", "-o", help="output path")
    tracker = common.add_argument_group("path tracker")
    defaults = TrackerConfig()
    tracker.add_argument("--min-step", type=float, default=defaults.min_step)
    tracker.add_argument("--max-step", type=float, default=defaults.max_step)
    tracker.add_argument("--divergence", type=float, default=defaults.divergence_threshold)
    tracker.add_argument("--cluster-tol", type=float, default=defaults.cluster_tol)
    tracker.add_argument("--retries", type=int, default=defaults.retries)

    p = argparse.ArgumentParser(prog="tenskron", description="H- and Z-eigenpairs of small symmetric tensors")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("kron", parents=[common], help="Kronecker product LEFT (x) RIGHT")
    s.add_argument("left")
    s.add_argument("right")
    s.set_defaults(func=cmd_kron)

    s = sub.add_parser("heig", parents=[common], help="all H-eigenpairs by homotopy continuation")
    s.add_argument("tensor")
    s.set_defaults(func=cmd_heig)

    s = sub.add_parser("zeig", parents=[common], help="dominant Z-eigenpair by SS-HOPM")
    s.add_argument("tensor")
    s.add_argument("--starts", type=int, default=20)
    s.set_defaults(func=cmd_zeig)

    s = sub.add_parser("charpoly", parents=[common], help="characteristic quartic of a 2x2x2 tensor")
    s.add_argument("tensor")
    s.set_defaults(func=cmd_charpoly)

    s = sub.add_parser("verify-paper", parents=[common], help="reproduce the 2x2x2 counterexample")
    s.add_argument("--corrupt-fixture", action="store_true", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_verify_paper)

    s = sub.add_parser("search", parents=[common], help="random counterexample search")
    s.add_argument("--class", dest="sample_class", choices=CLASSES, default="uniform")
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--off-range", type=float, default=0.1)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--csv", help="also write a CSV table")
    s.set_defaults(func=cmd_search)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TensorFormatError, OSError, ValueError) as exc:
        if isinstance(exc, ShapeError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_SHAPE
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
