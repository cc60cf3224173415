"""Exact Chevalley-Eilenberg cohomology and spectral sequences of filtered complexes."""

from .ce import LieAlgebra, Representation, Subalgebra, ce_complex
from .cochain import CochainComplex, FilteredComplex, betti, cohomology
from .errors import (
    ContainmentError,
    DimensionError,
    InternalConsistencyError,
    LassError,
    PreconditionError,
    StructuralError,
    Verdict,
)
from .exactq import ExactMatrix, QuotientSpace, Subspace
from .spectral import SpectralSequence, engine

__version__ = "0.1.0"
