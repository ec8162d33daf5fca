"""Standing waves of the cubic focusing NLS on the tadpole graph."""

from .errors import (
    DomainError, NoSolution, NonNormalizable, PhaseUndefined, QuantizationViolation, TadpoleError,
)
from .elliptic import agm, complete_K, jacobi
from .graph import (
    Family, FamilyDescriptor, TadpoleGraph, TadpoleState, bc_residual, energy, inner,
    linear_eigenpair, mass, resonance_state,
)
from .families import (
    build_cn_pm_state, build_cn_state, build_state, build_xi0_state, build_xi1_state,
    solve_an, solve_b0, solve_b1, solve_kappa0_roots, solve_kappa1_roots, solve_kn,
    state_from_descriptor,
)
from .verify import (
    LinearizationOperator, OperatorKind, ResidualReport, apply_linearization,
    check_pitchfork_resonance, linearization_residual, stationary_residual,
)
from .scan import (
    DiagramConfig, ThresholdKind, ThresholdRecord, assemble_diagram,
    detect_dn_pair_thresholds, sweep_family,
)
from .magnetic import (
    FluxConfig, gauge_transform, magnetic_bc_residual, magnetic_energy,
    phase_quantization_report,
)

__version__ = "0.1.0"
