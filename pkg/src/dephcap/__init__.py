"""Capacities of bosonic channels under collective phase noise.

Closed-form assisted/unassisted capacities for thermal-loss channels, exact
optimal inputs for the multimode dephasing channel, capacity sandwiches for
their composition, Holevo rates of phase-modulated entangled encodings, and
a dense truncated-Fock simulator that cross-checks all of it.
"""

from .bounds import (
    BoundsReport,
    bounds_report,
    ea_lower_bound,
    ea_lower_bound_asym,
    ea_upper_bound,
    entropy_total_asym,
    entropy_total_exact,
    thermal_total_photon_dist,
)
from .dephasing_exact import (
    DephasingSolution,
    ea_capacity_pure_dephasing,
    hsw_capacity_pure_dephasing,
    optimal_total_distribution,
    solve_dephasing,
    solve_lambda,
)
from .errors import ContractViolation, SolverError, TailBoundError
from .phase_encoding import (
    GaussianTwoModeState,
    JointFockDiagonal,
    fock_diagonal,
    holevo_lb_with_dephasing,
    holevo_lb_with_dephasing_asym,
    holevo_phase_encoding,
    symplectic_eigenvalues,
    tmsv_through_loss,
)
from .photon_dist import PhotonDistribution
from .special_math import (
    hyp2f1_squared_mean_series,
    hyp2f1_squared_series,
    log_binomial,
    shannon_entropy,
    thermal_entropy_g,
)
from .thermal_loss import (
    CapacityReport,
    ThermalLossChannel,
    advantage_ratio,
    capacity_report,
    ea_capacity,
    hsw_capacity,
)

__all__ = [
    "BoundsReport",
    "CapacityReport",
    "ContractViolation",
    "DephasingSolution",
    "GaussianTwoModeState",
    "JointFockDiagonal",
    "PhotonDistribution",
    "SolverError",
    "TailBoundError",
    "ThermalLossChannel",
    "advantage_ratio",
    "bounds_report",
    "capacity_report",
    "ea_capacity",
    "ea_capacity_pure_dephasing",
    "ea_lower_bound",
    "ea_lower_bound_asym",
    "ea_upper_bound",
    "entropy_total_asym",
    "entropy_total_exact",
    "fock_diagonal",
    "holevo_lb_with_dephasing",
    "holevo_lb_with_dephasing_asym",
    "holevo_phase_encoding",
    "hsw_capacity",
    "hsw_capacity_pure_dephasing",
    "hyp2f1_squared_mean_series",
    "hyp2f1_squared_series",
    "log_binomial",
    "optimal_total_distribution",
    "shannon_entropy",
    "solve_dephasing",
    "solve_lambda",
    "symplectic_eigenvalues",
    "thermal_entropy_g",
    "thermal_total_photon_dist",
    "tmsv_through_loss",
]

__version__ = "0.1.0"
