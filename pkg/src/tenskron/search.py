"""Random search for pairs whose Kronecker product breaks H-eigenvalue multiplicativity.

For each sampled pair of 2 x 2 x 2 symmetric tensors ``A`` and ``B`` the
spectral radii of ``A`` and ``B`` come from the characteristic quartic and
that of ``C = kron(B, A)`` from homotopy continuation. A pair is a
counterexample when ``rho(C) - rho(A) rho(B)`` exceeds ``GAP_THRESHOLD``.

No sampling distribution is implied by the underlying claim, so three are
offered: ``uniform`` (orbit values on [-1, 1]), ``positive`` (on [0.05, 1])
and ``diagonal-dominant`` (diagonal on [0.5, 1], off-diagonal orbits on
``[-off_range, off_range]``).
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import partial
from typing import Callable, Iterable, Optional, TextIO

import numpy as np

from .cubic2 import BinaryCubic, h_spectrum_2dim
from .exceptions import SolverError
from .homotopy import TrackerConfig, h_spectrum
from .tensor import SymTensor, kron, reshape_singular_values

GAP_THRESHOLD = 1e-8
CLASSES = ("uniform", "positive", "diagonal-dominant")


@dataclass
class SearchRecord:
    index: int
    seed: int
    tensor_a: tuple[float, float, float, float]
    tensor_b: tuple[float, float, float, float]
    rho_a: float = float("nan")
    rho_b: float = float("nan")
    rho_c: float = float("nan")
    gap: float = float("nan")
    is_counterexample: bool = False
    reshape_svals: Optional[tuple[float, float]] = None
    skipped: bool = False
    error: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["tensor_a"] = list(self.tensor_a)
        d["tensor_b"] = list(self.tensor_b)
        d["reshape_svals"] = list(self.reshape_svals) if self.reshape_svals else None
        return d


def sample_pair(seed: int, cls: str = "uniform", off_range: float = 0.1) -> tuple[SymTensor, SymTensor]:
    if cls not in CLASSES:
        raise ValueError(f"unknown sampling class {cls!r}; choose from {CLASSES}")
    rng = np.random.default_rng(seed)
    cubics = []
    for _ in range(2):
        if cls == "uniform":
            vals = rng.uniform(-1.0, 1.0, 4)
        elif cls == "positive":
            vals = rng.uniform(0.05, 1.0, 4)
        else:
            diag = rng.uniform(0.5, 1.0, 2)
            off = rng.uniform(-off_range, off_range, 2) if off_range > 0 else np.zeros(2)
            vals = np.array([diag[0], off[0], off[1], diag[1]])
        cubics.append(BinaryCubic(*(float(v) for v in vals)))
    return cubics[0].to_tensor(), cubics[1].to_tensor()


def evaluate_pair(
    A: SymTensor, B: SymTensor, seed: int = 0, cfg: TrackerConfig = TrackerConfig(), index: int = 0
) -> SearchRecord:
    """Compare ``rho(kron(B, A))`` with ``rho(A) rho(B)`` for one pair.

    Solver failures produce a record with ``skipped=True`` instead of raising.
    """
    rec = SearchRecord(
        index, seed, BinaryCubic.from_tensor(A).as_tuple(), BinaryCubic.from_tensor(B).as_tuple()
    )
    try:
        rec.rho_a = h_spectrum_2dim(A).spectral_radius
        rec.rho_b = h_spectrum_2dim(B).spectral_radius
        spec_c = h_spectrum(kron(B, A), seed=seed, cfg=cfg)
    except SolverError as exc:
        rec.skipped, rec.error = True, str(exc)
        return rec
    if not spec_c.eigenpairs:
        rec.skipped, rec.error = True, "no eigenpairs found for the product"
        return rec
    rec.rho_c = spec_c.spectral_radius
    rec.gap = rec.rho_c - rec.rho_a * rec.rho_b
    rec.is_counterexample = bool(rec.gap > GAP_THRESHOLD)
    top = spec_c.dominant
    if np.max(np.abs(top.vector.imag)) < 1e-10:
        s = reshape_singular_values(top.vector.real, 2, 2)
        rec.reshape_svals = (s[0], s[1])
    return rec


def _evaluate_sample(item: tuple[int, int], cls: str, off_range: float, cfg: TrackerConfig) -> SearchRecord:
    index, seed = item
    A, B = sample_pair(seed, cls, off_range)
    return evaluate_pair(A, B, seed, cfg, index)


def sample_seeds(seed: int, samples: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(samples)]


def summarize(records: list[SearchRecord]) -> dict:
    done = [r for r in records if not r.skipped]
    hits = [r for r in done if r.is_counterexample]
    top = max(done, key=lambda r: r.gap, default=None)
    return {
        "samples": len(records),
        "evaluated": len(done),
        "skipped": len(records) - len(done),
        "counterexamples": len(hits),
        "frequency": len(hits) / len(done) if done else 0.0,
        "max_gap": top.gap if top else None,
        "max_gap_record": top.to_dict() if top else None,
    }


def run_search(
    cls: str = "uniform",
    samples: int = 200,
    seed: int = 0,
    cfg: TrackerConfig = TrackerConfig(),
    off_range: float = 0.1,
    workers: int = 1,
    on_record: Optional[Callable[[SearchRecord], None]] = None,
) -> tuple[list[SearchRecord], dict]:
    """Evaluate ``samples`` random pairs; returns the records and a summary.

    Records reach ``on_record`` in sample order as they complete, so long
    runs can be streamed and interrupted. ``workers > 1`` evaluates pairs in
    separate processes without changing the output.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    items = list(enumerate(sample_seeds(seed, samples)))
    fn = partial(_evaluate_sample, cls=cls, off_range=off_range, cfg=cfg)
    records: list[SearchRecord] = []
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            stream: Iterable[SearchRecord] = pool.map(fn, items)
            for rec in stream:
                records.append(rec)
                if on_record:
                    on_record(rec)
    else:
        for item in items:
            rec = fn(item)
            records.append(rec)
            if on_record:
                on_record(rec)
    return records, summarize(records)


CSV_COLUMNS = [
    "seed", "a_A", "b_A", "c_A", "d_A", "a_B", "b_B", "c_B", "d_B",
    "rhoA", "rhoB", "rhoC", "gap", "counterexample",
]  # fmt: skip


def write_jsonl_record(rec: SearchRecord, fh: TextIO) -> None:
    fh.write(json.dumps(rec.to_dict()) + "\n")
    fh.flush()


def write_csv(records: list[SearchRecord], fh: TextIO) -> None:
    w = csv.writer(fh)
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(
            [r.seed, *r.tensor_a, *r.tensor_b, r.rho_a, r.rho_b, r.rho_c, r.gap, int(r.is_counterexample)]
        )
