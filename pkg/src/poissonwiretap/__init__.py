"""Secrecy capacity and coding experiments for the degraded Poisson wiretap channel."""

from .capacity import (
    CapacityResult,
    RegionPoint,
    k_double_prime,
    k_gap,
    k_prime,
    mi_upper_bound,
    phi,
    rate_at_alpha,
    region_boundary,
    region_contains,
    secrecy_capacity,
    single_channel_capacity,
    solve_alpha_star,
    two_point_gap,
    xlogx,
)
from .channel import (
    ChannelParams,
    NotDegradedError,
    auxiliary_dark_rate,
    check_degraded,
    is_strictly_degraded,
    thinning_keep_prob,
)
from .experiment import (
    ErrorRate,
    ExperimentConfig,
    ExperimentReport,
    LeakageResult,
    equivocation,
    estimate_pe,
    exact_leakage,
    fano_leakage_bound,
    run_sweep,
    subcode_error,
)
from .gaussian import (
    GaussianParams,
    gaussian_cs_bounds_finite,
    gaussian_cs_infinite,
    n_tilde,
)
from .pointprocess import (
    ArrivalProcess,
    Waveform,
    count_in_intervals,
    degrade,
    sample_conditional_poisson,
    sample_homogeneous,
    superpose,
    thin,
)
from .wyner import (
    SubcodePartition,
    WynerCode,
    build_code,
    codeword_waveform,
    encode,
    ml_decode,
    pairwise_overlap_fraction,
    partition,
)

__version__ = "0.1.0"
