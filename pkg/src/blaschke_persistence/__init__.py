"""Persistence barcodes and interleaving distances of finite Blaschke products.

The analytic pipeline (critical points -> barcode) and the grid level-set
oracle are kept independent so each can verify the other.
"""

from .barcode import Bar, Barcode, betti_at, canonicalize, direct_sum, from_product, shift
from .blaschke import BlaschkeProduct, FilterTime, compose_mobius, evaluate, log_derivative, sup_norm_diff, t_of_theta, theta_of_t
from .critical import CriticalPoint, critical_numerator, critical_points, degree2_normal_form, find_roots
from .distance import (
    MatchingWitness,
    StabilityBound,
    bottleneck,
    bottleneck_matching,
    degree2_distance,
    delta_matching,
    interleaving_distance,
    moduli_distance,
    stability_bound,
    two_bar_distance,
    validate_witness,
)
from .errors import DomainError, NonConvergenceError, PoleError, PreconditionError, SingularityError
from .hyperbolic import MobiusTransform, hyperbolic_disk_contains, mobius_apply, mobius_invert, rho
from .levelset import (
    ComponentSnapshot,
    GridFiltration,
    HoffmanReport,
    MergeEvent,
    RoucheReport,
    build_grid,
    clamp_births,
    component_diameter,
    diameter_decay_scan,
    euler_characteristic,
    grid_barcode,
    hoffman_inclusions,
    read_grid,
    rouche_zero_count,
    sublevel_components,
    sweep,
    write_grid,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
