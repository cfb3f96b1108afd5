"""H- and Z-eigenpairs of small symmetric tensors and their Kronecker products."""

from .cubic2 import BinaryCubic, char_poly, h_spectrum_2dim, hyperdet, recover_vector
from .exceptions import ShapeError, SolverError, TensorFormatError
from .homotopy import TrackerConfig, h_spectrum
from .poly import CPoly, all_roots, evaluate, product_of_roots
from .spectrum import EigPair, SpectrumSummary
from .tensor import (
    SymTensor,
    build_symmetric,
    contract,
    hadamard_power,
    identity_tensor,
    kron,
    kron_vec,
    reshape_singular_values,
)
from .zeig import ZEigPair, dominant_zeig, sshopm, verify_kron_zeig

__version__ = "0.1.0"
