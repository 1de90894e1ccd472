"""Rate-distortion lower bounds on geographic-routing overhead in mobile
ad hoc networks: location-update and beacon overheads, the resulting
transport-capacity deficit, and Monte Carlo validation oracles."""

from ._quadrature import QuadratureError
from .arrivals import ArrivalKind, ArrivalProcess, PointMassError
from .beacon import (
    BeaconBoundRequest,
    BeaconReport,
    beacon_overhead,
    beacon_rate,
    beacon_report,
    find_lstar,
    p_neighbor_1d,
    p_neighbor_2d,
)
from .capacity import (
    CapacityReport,
    LocationServiceDescriptor,
    NetworkConfig,
    ServiceKind,
    critical_n,
    per_session_deficit,
    raw_transport_capacity,
    residual_capacity,
)
from .displacement import ClosedForm, DisplacementDensity, sample_displacement
from .entropy import binary_entropy, clamp_nonneg, ternary_entropy
from .montecarlo import (
    McConfig,
    estimate_entropy,
    estimate_p_l,
    estimate_variance,
    run_validation_grid,
    substream,
)
from .update_bounds import (
    BoundReport,
    Dimension,
    KStarSearchError,
    LocationBoundRequest,
    PerSessionReport,
    k_star,
    per_session_bound,
    relaxed_update_bound,
    update_bound,
    update_bound_1d,
    update_bound_2d,
)

__version__ = "0.1.0"
