"""Driven-dissipative cavity QED with a spin-3/2 qudit.

A compact toolbox for the photon-blockade breakdown regime of a driven,
damped cavity coupled to three identical qubits (equivalently one spin-3/2
qudit): exact dressed-ladder spectra, closed-form quasi-coherent branch
amplitudes with their existence map, quantum-jump trajectory unraveling,
small master-equation oracles, and telegraph-signal analysis.
"""

from .hilbert import (
    CompositeSpace,
    EmitterKind,
    EmitterSpace,
    FockSpace,
    StateVector,
    annihilation,
    basis_state,
    coherent_state,
    collective_lowering,
    collective_raising,
    creation,
    embed,
    expectation,
    number,
    single_qubit_lowering,
    symmetric_subspace_isometry,
    sz,
    vacuum_ground,
)
from .model import (
    JumpChannel,
    ModelParams,
    effective_hamiltonian,
    hamiltonian,
    jump_channels,
    suggested_fock_cutoff,
)
from .spectrum import (
    U_LABELS,
    LadderSpacing,
    ManifoldSpectrum,
    approximate_eigenvalue,
    closed_form_eigenvalues,
    ladder_spacing,
    numerical_block_eigenvalues,
    spectrum_rows,
)
from .branches import (
    BranchSolution,
    SolutionMap,
    all_branches,
    branch_solution,
    is_physical,
    onset_threshold,
    photon_number_quadratic,
    solution_map,
    zeta,
)
from .mcwf import (
    JumpEvent,
    StepSizeError,
    TrajectoryConfig,
    TrajectoryRecord,
    initial_state_vector,
    max_model_frequency,
    run_ensemble,
    run_trajectory,
    step,
    trajectory_rng,
    validate_step_size,
)
from .steady import (
    DegenerateSteadyStateError,
    SteadyStateResult,
    liouvillian,
    null_space_dimension,
    propagate,
    propagate_grid,
    steady_state,
    validate_density_matrix,
)
from .analysis import (
    BranchAssignment,
    HistogramSet,
    LinearResponse,
    NormalizedSeries,
    Segment,
    classify_and_dwell,
    empty_cavity_intensity,
    find_local_maxima,
    histogram,
    linear_response_reference,
    normalized_series,
    time_average,
)

__version__ = "0.1.0"
