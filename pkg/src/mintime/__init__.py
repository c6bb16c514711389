"""Minimum-time HJB solvers on 2D structured grids.

A semi-Lagrangian 3-point scheme drives four solution algorithms: fast
sweeping, two upwind-pruned sweeping variants (3/4 and 1/4 control balls),
and an active-list fast iterative method with re-activation statistics.  A
plain Jacobi fixed-point solver serves as the reference oracle.  Hot loops
run in a compiled extension when available, with a bit-identical pure-Python
fallback.
"""

from .engine import BACKENDS, have_compiled, resolve_backend, speed_table
from .grid import Grid2D, build_grid, nearest_node, position
from .local_update import (
    EPS_SPEED,
    SENTINEL,
    UpdateResult,
    foot_point,
    interpolate,
    sl_update,
    triangle_weights,
)
from .problems import (
    BUILTIN_IDS,
    Control,
    ProblemSpec,
    builtin,
    eval_dynamics,
    layer_params,
    load_problem_file,
    m_coeff,
    make_problem,
    sinusoid_C,
    unit_controls,
)
from .solvers import (
    MAX_SWEEPS,
    NEIGHBORS8,
    SWEEP_CYCLE,
    NonConvergenceError,
    SolverStats,
    SweepOrdering,
    ValueField,
    allowed_in_sweep,
    diff_fields,
    gauss_seidel_sweep,
    init_field,
    solve_fim,
    solve_fsm,
    solve_reference,
    solve_ufsm,
)

__version__ = "0.1.0"

__all__ = [
    "BACKENDS",
    "BUILTIN_IDS",
    "Control",
    "EPS_SPEED",
    "Grid2D",
    "MAX_SWEEPS",
    "NEIGHBORS8",
    "NonConvergenceError",
    "ProblemSpec",
    "SENTINEL",
    "SWEEP_CYCLE",
    "SolverStats",
    "SweepOrdering",
    "UpdateResult",
    "ValueField",
    "allowed_in_sweep",
    "build_grid",
    "builtin",
    "diff_fields",
    "eval_dynamics",
    "foot_point",
    "gauss_seidel_sweep",
    "have_compiled",
    "init_field",
    "interpolate",
    "layer_params",
    "load_problem_file",
    "m_coeff",
    "make_problem",
    "nearest_node",
    "position",
    "resolve_backend",
    "sinusoid_C",
    "sl_update",
    "solve_fim",
    "solve_fsm",
    "solve_reference",
    "solve_ufsm",
    "speed_table",
    "triangle_weights",
    "unit_controls",
]
