"""Boundary laws, critical activities and extremality tests for the three-state
wand hard-core model on Cayley trees."""

from .critical import (
    count_solutions_on_I2,
    find_curve_intersections,
    find_phi_maximum,
    lambda_critical,
    numeric_fold_detection,
    phi_k3,
    psi_k3,
)
from .errors import (
    ContractViolation,
    DomainError,
    FoldDetectionError,
    MalformedInputError,
    SizeLimitError,
    SolverError,
    WandError,
)
from .extremality import (
    ExtremalityReport,
    TransitionKernel,
    analyze,
    kappa_of,
    kernel_from_law,
    kesten_stigum,
    msw_extremality,
    product_kernel,
    second_eigenvalue,
)
from .model import WAND, ConstraintGraph, FiniteTree, count_admissible, is_admissible, occupied_count
from .oracle import build_measure, consistency_residual, exact_marginal, root_law, sample_chain
from .recursion import (
    BoundaryPair,
    InvariantSet,
    PeriodicState,
    F_map,
    W_map,
    check_injectivity,
    classify_state,
    residual,
)
from .solvers import (
    ScalarMapSpec,
    SolutionRecord,
    closed_form_k2,
    h_scalar,
    solve_full_4d,
    solve_k3_parametrized,
    solve_on_I2,
    solve_ti_symmetric,
    solve_two_cycle,
)

__version__ = "0.1.0"
