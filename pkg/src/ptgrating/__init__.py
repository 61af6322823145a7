"""Steady-state optical response and asymmetric diffraction of driven
four-level atomic lattices: density-matrix backends, susceptibility
sampling, Fraunhofer far fields, PT-symmetry analysis and a CLI."""

from .analysis import (
    GratingClass,
    PTMetrics,
    SweepRow,
    SweepTable,
    Thresholds,
    asymmetry_metric,
    classify_grating,
    evaluate_point,
    pt_metrics,
    re_im_ratio,
    sweep,
)
from .config import ConfigError, RunConfig, parse_phase, resolve_config
from .density_matrix import (
    AtomFieldParams,
    DensityMatrix,
    SteadyStateReport,
    evolve,
    rho41_analytic,
    rho41_analytic_batch,
    steady_rho41_batch,
    steady_state,
    validate_analytic,
)
from .diffraction import (
    FarFieldPattern,
    GratingConfig,
    OrderTable,
    TransmissionProfile,
    array_factor,
    far_field_1d,
    far_field_2d,
    order_intensities,
    parseval_residual,
    symmetric_sgrid,
    transmission,
)
from .errors import (
    DegenerateDenominator,
    DegenerateProfile,
    NonConvergent,
    Overflow,
    SimulationError,
    SingularSystem,
    StepUnstable,
)
from .susceptibility import (
    CouplingProfile,
    LatticeGeometry,
    SusceptibilityProfile,
    chi_normalized,
    coupling_at,
    sample_chi_1d,
    sample_chi_2d,
)

__version__ = "0.1.0"
