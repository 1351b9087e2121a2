"""Divisors on the full flag threefold and their lagrangian sphere classes.

A divisor in the anticanonical-root linear system is a traceless 3x3 complex
matrix up to scale.  The package classifies divisors by the Jordan type of
the matrix (five strata), enumerates the sphere classes in the divisor
complement through the simple eigenvalues, certifies the relevant spheres
numerically, and exposes the eigenvalue cubic with its ramification locus,
on which the classes assemble into a moduli space.
"""

from .eigen import (
    DEFAULT_TOL,
    CharCubic,
    DegenerateError,
    Eigenvalue,
    EigenvalueSet,
    NotAnEigenvalueError,
    StratumReport,
    TracelessMatrix,
    ZeroDivisorError,
    char_cubic,
    classify_stratum,
    cubic_roots,
    discriminant,
    eigen_points,
    is_reducible,
    normalize_divisor_matrix,
)
from .ensembles import (
    ENSEMBLES,
    StratumFrequencyReport,
    ginibre_traceless,
    make_rng,
    sample_stratum_frequencies,
)
from .geometry import (
    SPHERES,
    AmbiguousSignError,
    EigenPointError,
    GZSphere,
    HomologyClass,
    InconclusiveError,
    clearance,
    divisor_residual,
    fiber_solve,
    holomorphic_pair_minimum,
    homology_class,
    lagrangian_residual,
    separating_function,
)
from .moduli import (
    ModuliPoint,
    NotOnCubicError,
    covering_fiber,
    cubic_residual,
    moduli_points,
    ramification_residual,
)
from .projective import FlagPoint, ProjectivePoint, canonical_coords, incidence_residual
from .verify import (
    REFERENCE_DIVISOR,
    REFERENCE_NORMALIZED,
    STRATUM_REPRESENTATIVES,
    CheckResult,
    run_acceptance,
)

__version__ = "0.1.0"
