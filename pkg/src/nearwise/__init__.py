"""Sharp tail bounds for n events that are independent (n-1) at a time.

The package characterizes every probability measure under which each
subcollection of n-1 events out of n is mutually independent — a
one-parameter family around the product measure — and computes sharp upper
and lower bounds on P(at least k events occur) over that family.  A
brute-force oracle re-derives everything by dense enumeration at desk scale
(n <= 20), in float or exact rational arithmetic.

Typical use::

    from nearwise import from_raw, sharp_bounds

    profile = from_raw([0.1] * 8)
    report = sharp_bounds(profile, k=3)
    report.sharp_lower, report.exact_mutual, report.sharp_upper
"""

from .bounds import (
    BonferroniStatus,
    BoundReport,
    LllComparison,
    MakarovBounds,
    TailCdf,
    bonferroni_applicable,
    intersection_bounds,
    lll_comparison,
    makarov_bounds,
    poisson_binomial_cdf,
    probability_at_s,
    report_to_dict,
    sharp_bounds,
    tail_probabilities,
    tail_probability_dp,
    union_bounds,
)
from .marginals import (
    MarginalError,
    MarginalProfile,
    from_raw,
    load_profile,
    profile_to_dict,
)
from .measures import (
    AtomicMeasure,
    CapExceededError,
    FeasibilityError,
    SInterval,
    atom_product,
    build_measure,
    independence_order,
    invariant_m,
    invariant_p,
    joint_probability,
    mask_indices,
    measure_to_dict,
    original_subset,
    parity_construction,
    s_interval,
    subset_mask,
)
from .oracle import (
    DEFAULT_SEED,
    ProfileCheck,
    SharpnessScan,
    SuiteReport,
    VerificationReport,
    check_profile,
    enumerate_tail,
    kernel_residual,
    random_profiles,
    run_random_suite,
    scan_sharpness,
    verify_extremal_atoms,
    verify_kernel,
    verify_measure,
)

__version__ = "0.1.0"

__all__ = [
    "AtomicMeasure",
    "BonferroniStatus",
    "BoundReport",
    "CapExceededError",
    "DEFAULT_SEED",
    "FeasibilityError",
    "LllComparison",
    "MakarovBounds",
    "MarginalError",
    "MarginalProfile",
    "ProfileCheck",
    "SInterval",
    "SharpnessScan",
    "SuiteReport",
    "TailCdf",
    "VerificationReport",
    "atom_product",
    "bonferroni_applicable",
    "build_measure",
    "check_profile",
    "enumerate_tail",
    "from_raw",
    "independence_order",
    "intersection_bounds",
    "invariant_m",
    "invariant_p",
    "joint_probability",
    "kernel_residual",
    "lll_comparison",
    "load_profile",
    "makarov_bounds",
    "mask_indices",
    "measure_to_dict",
    "original_subset",
    "parity_construction",
    "poisson_binomial_cdf",
    "probability_at_s",
    "profile_to_dict",
    "random_profiles",
    "report_to_dict",
    "run_random_suite",
    "s_interval",
    "scan_sharpness",
    "sharp_bounds",
    "subset_mask",
    "tail_probabilities",
    "tail_probability_dp",
    "union_bounds",
    "verify_extremal_atoms",
    "verify_kernel",
    "verify_measure",
    "__version__",
]
