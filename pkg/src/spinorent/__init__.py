"""Intrinsic entanglement of Dirac spinors under the indefinite spinor metric."""

from .capability import (
    ClassificationTable,
    classify,
    entanglement_rate,
    local_form_check,
    pdot_analytic,
    pdot_density,
    pdot_fd,
)
from .clifford import GammaRepresentation, build_rep, chiral_projectors, verify_clifford
from .conformal import Generator, GeneratorLabel, all_generators, generator
from .errors import (
    EntangledGammaError,
    InvalidArgumentError,
    NotDecomposableError,
    NullSpinorError,
    RepresentationError,
    UnsupportedTPSError,
)
from .schmidt import SchmidtDecomposition, decompose, reconstruct, sample_decomposable

__version__ = "0.1.0"
