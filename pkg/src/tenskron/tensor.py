"""Dense symmetric tensors, contractions and the tensor Kronecker product.

Indices are 1-based wherever they cross the package boundary (generator
tuples, JSON files, printed output) and 0-based inside numpy arrays.

The Kronecker index convention is ``i = (i_B - 1) * n_A + i_A`` in every
mode for ``kron(B, A)``. It was inferred from the entry list of a published
worked example rather than from a textual definition, and is checked against
that list in the test suite.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .exceptions import ShapeError, SolverError, TensorFormatError

Generators = Union[Mapping[Sequence[int], float], Iterable[tuple[Sequence[int], float]]]


@dataclass(frozen=True, eq=False)
class SymTensor:
    """Real symmetric tensor of order ``m`` and dimension ``n``, stored densely.

    The array is made read-only on construction; symmetry is checked exactly.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.ndim < 2:
            raise ShapeError(f"tensor order must be >= 2, got {arr.ndim}")
        if len(set(arr.shape)) != 1 or arr.shape[0] < 1:
            raise ShapeError(f"tensor must be cubical, got shape {arr.shape}")
        for perm in itertools.permutations(range(arr.ndim)):
            if not np.array_equal(arr, np.transpose(arr, perm)):
                raise TensorFormatError("tensor entries are not symmetric")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def order(self) -> int:
        return self.entries.ndim

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, idx: Sequence[int]) -> float:
        """Entry at a 1-based index tuple."""
        return float(self.entries[tuple(i - 1 for i in idx)])

    def __eq__(self, other):
        if not isinstance(other, SymTensor):
            return NotImplemented
        return self.entries.shape == other.entries.shape and np.array_equal(
            self.entries, other.entries
        )

    def __hash__(self):
        return hash((self.entries.shape, self.entries.tobytes()))

    def __repr__(self):
        return f"SymTensor(order={self.order}, dim={self.dim})"

    def orbits(self) -> dict[tuple[int, ...], float]:
        """Nonzero entries keyed by their sorted (lexicographically smallest) 1-based index."""
        out = {}
        for idx in itertools.combinations_with_replacement(range(1, self.dim + 1), self.order):
            val = self[idx]
            if val != 0.0:
                out[idx] = val
        return out

    def is_diagonal(self) -> bool:
        diag = identity_tensor(self.order, self.dim).entries
        return not np.any(self.entries[diag == 0])


def build_symmetric(order: int, dim: int, generators: Generators = ()) -> SymTensor:
    """Fill a symmetric tensor from one value per symmetry orbit.

    ``generators`` maps 1-based index tuples to values (a dict or an iterable of
    pairs). Every permutation of each tuple receives its value; all other
    entries are zero. Two generators in the same orbit must agree.
    """
    if order < 2 or dim < 1:
        raise ShapeError(f"need order >= 2 and dim >= 1, got order={order}, dim={dim}")
    items = generators.items() if isinstance(generators, Mapping) else generators
    arr = np.zeros((dim,) * order)
    seen: dict[tuple[int, ...], float] = {}
    for idx, value in items:
        idx = tuple(int(i) for i in idx)
        if len(idx) != order:
            raise TensorFormatError(f"index {idx} has length {len(idx)}, expected {order}")
        if any(i < 1 or i > dim for i in idx):
            raise TensorFormatError(f"index {idx} out of range 1..{dim}")
        value = float(value)
        key = tuple(sorted(idx))
        if key in seen and seen[key] != value:
            raise TensorFormatError(
                f"conflicting values {seen[key]} and {value} for orbit of {key}"
            )
        seen[key] = value
        for perm in set(itertools.permutations(idx)):
            arr[tuple(i - 1 for i in perm)] = value
    return SymTensor(arr)


def identity_tensor(order: int, dim: int) -> SymTensor:
    """Diagonal tensor of ones; ``contract(I, x) == x ** (order - 1)``."""
    if order < 2 or dim < 1:
        raise ShapeError(f"need order >= 2 and dim >= 1, got order={order}, dim={dim}")
    arr = np.zeros((dim,) * order)
    for i in range(dim):
        arr[(i,) * order] = 1.0
    return SymTensor(arr)


def diagonal_tensor(order: int, diag: Sequence[float]) -> SymTensor:
    arr = np.zeros((len(diag),) * order)
    for i, d in enumerate(diag):
        arr[(i,) * order] = d
    return SymTensor(arr)


def contract(A: SymTensor, x) -> np.ndarray:
    """Return ``A x^{m-1}``: modes 2..m of ``A`` contracted against ``x``.

    Arithmetic is complex; the result is a complex vector of length ``A.dim``.
    """
    x = np.asarray(x, dtype=complex)
    if x.shape != (A.dim,):
        raise ShapeError(f"vector of shape {x.shape} does not match tensor dim {A.dim}")
    out = A.entries
    for _ in range(A.order - 1):
        out = out @ x
    return out


def hadamard_power(x, p: int) -> np.ndarray:
    """Componentwise ``p``-th power, ``x^{[p]}``."""
    if p < 1:
        raise ValueError(f"power must be >= 1, got {p}")
    return np.asarray(x, dtype=complex) ** p


def kron(B: SymTensor, A: SymTensor) -> SymTensor:
    """Tensor Kronecker product ``B (x) A`` (``B`` is the left, outer factor)."""
    if A.order != B.order:
        raise ShapeError(f"order mismatch: {B.order} vs {A.order}")
    m = A.order
    outer = np.multiply.outer(B.entries, A.entries)
    # interleave (b_1, a_1, b_2, a_2, ...) so each mode flattens to b * n_A + a
    axes = [ax for t in range(m) for ax in (t, m + t)]
    arr = np.transpose(outer, axes).reshape((B.dim * A.dim,) * m)
    return SymTensor(arr)


def kron_vec(v, u) -> np.ndarray:
    """Vector Kronecker product; component ``j * len(u) + i`` is ``v_j * u_i``."""
    return np.kron(np.asarray(v, dtype=complex), np.asarray(u, dtype=complex))


def reshape_singular_values(
    x, rows: int, cols: int, imag_tol: float = 1e-10, tol: float = 1e-14, max_sweeps: int = 60
) -> list[float]:
    """Singular values (descending) of ``x`` reshaped column-major to ``rows x cols``.

    Uses one-sided Jacobi rotations on the columns until every pair is
    orthogonal to within ``tol``.
    """
    x = np.asarray(x)
    if rows * cols != x.size:
        raise ShapeError(f"cannot reshape length {x.size} to {rows}x{cols}")
    if np.iscomplexobj(x):
        if np.max(np.abs(x.imag), initial=0.0) > imag_tol * max(1.0, np.max(np.abs(x))):
            raise ValueError("vector has non-negligible imaginary part")
        x = x.real
    M = np.asarray(x, dtype=float).reshape((rows, cols), order="F")
    if rows < cols:
        M = M.T
    return _jacobi_singular_values(M, tol, max_sweeps)


def _jacobi_singular_values(M: np.ndarray, tol: float, max_sweeps: int) -> list[float]:
    U = np.array(M, dtype=float)
    ncols = U.shape[1]
    for _ in range(max_sweeps):
        rotated = False
        for p in range(ncols - 1):
            for q in range(p + 1, ncols):
                alpha = U[:, p] @ U[:, p]
                beta = U[:, q] @ U[:, q]
                gamma = U[:, p] @ U[:, q]
                if gamma == 0.0 or abs(gamma) <= tol * math.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                up = U[:, p].copy()
                U[:, p] = c * up - s * U[:, q]
                U[:, q] = s * up + c * U[:, q]
        if not rotated:
            return sorted((float(np.linalg.norm(U[:, k])) for k in range(ncols)), reverse=True)
    raise SolverError(f"Jacobi SVD did not converge in {max_sweeps} sweeps")


# -- JSON tensor format -------------------------------------------------------


def tensor_to_dict(A: SymTensor) -> dict:
    return {
        "order": A.order,
        "dim": A.dim,
        "entries": [{"idx": list(idx), "value": val} for idx, val in A.orbits().items()],
    }


def tensor_from_dict(data) -> SymTensor:
    try:
        order = int(data["order"])
        dim = int(data["dim"])
        gens = [(tuple(e["idx"]), float(e["value"])) for e in data["entries"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise TensorFormatError(f"malformed tensor object: {exc}") from exc
    return build_symmetric(order, dim, gens)


def load_tensor(path: Union[str, Path]) -> SymTensor:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise TensorFormatError(f"{path}: invalid JSON: {exc}") from exc
    return tensor_from_dict(data)


def save_tensor(A: SymTensor, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(tensor_to_dict(A), indent=1) + "\n")
