"""Non-asymptotic redundancy bounds and noise thresholds for quantum circuits
with classical inputs and outputs, under scale-dependent noise."""

__version__ = "0.1.0"

from .bound import (AccuracySpec, ErrorBound, RedundancyBound, capacity_cost,
                    error_lower_bound, objective, redundancy_lower_bound)
from .channels import ChannelKind, binary_entropy, holevo, holevo_deriv
from .closedform import (BRANCH_BOUNDARY, BRANCH_INTERIOR,
                         erasure_threshold_linear, erasure_threshold_power,
                         threshold_branch)
from .scaling import LawKind, ScalingLaw

from .optimize import (DescentResult, LineSearchResult, OptimizerConfig,  # noqa: E402
                       SolverError, ThresholdResult, empirical_lipschitz,
                       grid_oracle, line_search, lipschitz_constant, proj_gd,
                       threshold_bisection)

from .atlas import (SurfaceEntry, SurfaceResult, SweepGrid, default_axis,  # noqa: E402
                    surface_rows, sweep, validate_surface)
from .simulator import (MeasurementNoise, SimResult, SimSpec, exact_error,  # noqa: E402
                        hoeffding_bound, required_runs, simulate)

__all__ = [
    "__version__",
    "AccuracySpec", "ErrorBound", "RedundancyBound", "capacity_cost",
    "error_lower_bound", "objective", "redundancy_lower_bound",
    "ChannelKind", "binary_entropy", "holevo", "holevo_deriv",
    "BRANCH_BOUNDARY", "BRANCH_INTERIOR", "erasure_threshold_linear",
    "erasure_threshold_power", "threshold_branch",
    "LawKind", "ScalingLaw",
    "DescentResult", "LineSearchResult", "OptimizerConfig", "SolverError",
    "ThresholdResult", "empirical_lipschitz", "grid_oracle", "line_search",
    "lipschitz_constant", "proj_gd", "threshold_bisection",
    "SurfaceEntry", "SurfaceResult", "SweepGrid", "default_axis",
    "surface_rows", "sweep", "validate_surface",
    "MeasurementNoise", "SimResult", "SimSpec", "exact_error",
    "hoeffding_bound", "required_runs", "simulate",
]
