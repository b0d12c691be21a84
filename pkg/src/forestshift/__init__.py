"""Directed forests, their thickness order, and weighted shifts on them."""

from . import errors
from .errors import *  # noqa: F401,F403
from .forest import (
    Descendants,
    Forest,
    RayVertex,
    Tail,
    TreeHandle,
    canonical_form,
    direct_sum,
    is_isomorphic,
    validate_forest,
)
from .hyponormal import (
    CounterexampleReport,
    HypoVerdict,
    HypoWitness,
    classify,
    commutator,
    construct_counterexample,
    is_hyponormal,
    is_power_hyponormal,
    local_vs_oracle_check,
    oracle_verdict,
    psd_oracle,
)
from .order import (
    ThinningMask,
    apply_mask,
    enumerate_thinner,
    forest_power,
    is_thinner,
    leafless_support,
    power_preserves_thickness_check,
    strictly_thicker,
    thin_fork_check,
    thinner_via_children,
)
from .shift import (
    RayProfile,
    TruncationWindow,
    WeightSystem,
    apply_adjoint,
    apply_shift,
    bound_norm_sq,
    depth_window,
    is_proper,
    local_norm_sq,
    make_window,
    materialize,
    power_weights,
    prune_zero_weights,
    validate_weights,
)

__version__ = "0.1.0"

__all__ = errors.__all__ + [
    "Descendants",
    "Forest",
    "RayVertex",
    "Tail",
    "TreeHandle",
    "canonical_form",
    "direct_sum",
    "is_isomorphic",
    "validate_forest",
    "CounterexampleReport",
    "HypoVerdict",
    "HypoWitness",
    "classify",
    "commutator",
    "construct_counterexample",
    "is_hyponormal",
    "is_power_hyponormal",
    "local_vs_oracle_check",
    "oracle_verdict",
    "psd_oracle",
    "ThinningMask",
    "apply_mask",
    "enumerate_thinner",
    "forest_power",
    "is_thinner",
    "leafless_support",
    "power_preserves_thickness_check",
    "strictly_thicker",
    "thin_fork_check",
    "thinner_via_children",
    "RayProfile",
    "TruncationWindow",
    "WeightSystem",
    "apply_adjoint",
    "apply_shift",
    "bound_norm_sq",
    "depth_window",
    "is_proper",
    "local_norm_sq",
    "make_window",
    "materialize",
    "power_weights",
    "prune_zero_weights",
    "validate_weights",
]
