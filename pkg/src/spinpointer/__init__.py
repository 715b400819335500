"""Optimal entangled N-spin states for sending a direction in space."""

__version__ = "0.1.0"

from .core import (
    FidelityResult,
    HalfInt,
    ProblemSpec,
    SignalState,
    half_int_from_twice,
    hilbert_dimension,
    lowest_m,
    validate_spec,
)
from .errors import (
    BadN,
    DegenerateEigenvalue,
    EnvelopeBreach,
    NoConvergence,
    OutOfRange,
    ParityMismatch,
    SpinPointerError,
)
from .optimal_state import (
    CouplingMatrix,
    build_coupling_matrix,
    fidelity_sweep,
    largest_eigenpair,
    optimal_fidelity,
    parallel_spin_fidelity,
)
