"""The published 2 x 2 x 2 counterexample pair and its reported values."""

from __future__ import annotations

import numpy as np

from .cubic2 import BinaryCubic
from .tensor import SymTensor, kron

CUBIC_A = BinaryCubic(0.3, -0.3, 0.0, 1.0)
CUBIC_B = BinaryCubic(0.7, -0.2, -0.2, -0.8)

EIGS_A = (1.0, 0.812327806563 + 0.264915863899j, 0.812327806563 - 0.264915863899j, -0.024655613126)
EIGS_B = (
    -0.70932967445,
    0.771909217754 + 0.111810698762j,
    0.771909217754 - 0.111810698762j,
    -1.034488761057,
)

# ascending coefficients of Det(T - lambda I)
CHARPOLY_A = (-9 / 500, -84 / 125, 229 / 100, -13 / 5, 1.0)
CHARPOLY_B = (279 / 625, -9 / 125, -27 / 20, 1 / 5, 1.0)
DET_A = -9 / 500
DET_B = 279 / 625

# Reported as "H-eigenvalue 1.035240007957". Substituting the reported vector
# into the reported product tensor gives -1.035240007957; the printed figure is
# the magnitude, as with the spectral radius of B (|-1.034488761057|).
RHO_C = 1.035240007957
EIGVAL_C = -1.035240007957
EIGVEC_C = np.array([0.099076279319, 0.427548807059, -0.034228101784, 0.89789439552])
RESHAPE_SVALS = (0.995, 0.105)

# the 20 listed entries of C = B (x) A, 1-based sorted indices
ENTRIES_C = {
    (1, 1, 1): 0.21, (1, 1, 2): -0.21, (1, 1, 3): -0.06, (1, 1, 4): 0.06,
    (1, 2, 2): 0.0, (1, 2, 3): 0.06, (1, 2, 4): -0.0, (1, 3, 3): -0.06,
    (1, 3, 4): 0.06, (1, 4, 4): -0.0, (2, 2, 2): 0.7, (2, 2, 3): -0.0,
    (2, 2, 4): -0.2, (2, 3, 3): 0.06, (2, 3, 4): -0.0, (2, 4, 4): -0.2,
    (3, 3, 3): -0.24, (3, 3, 4): 0.24, (3, 4, 4): -0.0, (4, 4, 4): -0.8,
}  # fmt: skip


def tensor_a() -> SymTensor:
    return CUBIC_A.to_tensor()


def tensor_b() -> SymTensor:
    return CUBIC_B.to_tensor()


def tensor_c() -> SymTensor:
    return kron(tensor_b(), tensor_a())
