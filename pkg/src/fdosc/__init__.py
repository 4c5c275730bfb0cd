"""Nonlinear coherent states and dynamics of f-deformed oscillator wells."""

from ._kernels import HAS_NUMBA, backend_name, timeseries_moments
from .dynamics import (
    AlphaScan,
    TimeSeries,
    default_time_grid,
    evolve,
    heisenberg_residual,
    ladder_expectation,
    level_energies,
    morse_ladder_closed_form,
    revival_period,
    revival_residual,
    scan_alpha,
    trajectory,
)
from .gridsolver import (
    GridSpec,
    fd_eigensystem,
    fd_matrix_element,
    fd_spectrum,
    oracle_potential,
)
from .models import (
    FINITE_MODELS,
    DomainError,
    Harmonic,
    Model,
    ModifiedPT,
    Morse,
    TrigPT,
    annihilation_matrix,
    commutator_eigenvalue,
    generic_energy,
    is_bounded,
    ladder_down_element,
    ladder_up_element,
    well_energy,
)
from .morse_ops import morse_p_matrix, morse_x_matrix
from .mpt_ops import (
    mpt_coeff_f,
    mpt_coeff_g,
    mpt_coeff_r,
    mpt_coeff_s,
    mpt_delta5_ratio,
    mpt_eigenfunction,
    mpt_eigenfunction_prime,
    mpt_matrix_element,
    mpt_p_element_fd,
    mpt_p_matrix,
    mpt_tables,
    mpt_x_matrix,
)
from .operators import (
    LEAK_TOL,
    NumericsError,
    QuadOperator,
    commutator_expectation,
    harmonic_p_matrix,
    harmonic_x_matrix,
    hermiticity_defect,
    moments,
    normalized_uncertainty,
    quadrature_pair,
)
from .states import (
    ConvergenceError,
    FockVector,
    aocs_residual,
    build_aocs,
    build_docs,
    build_state,
    docs_exponential_oracle,
    glauber_amplitudes,
    invert_alpha,
    mean_occupation,
    occupation_distribution,
    overlap,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
