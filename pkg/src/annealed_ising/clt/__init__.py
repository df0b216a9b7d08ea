"""Total spin at criticality: G_N, exact laws and samples, limiting densities."""

from .checks import gn_limit_check, partition_exponent, partition_sweep, window_mgf_pair
from .enumerate import SpinLaw, empirical_law, enumerate_spin_law, tv_distance
from .gn import GnFunction, default_lambda, g_n, log_partition, mgf_ratio
from .limit import (
    LimitLaw,
    density_normalizer,
    limit_constant_C,
    limit_density_f,
    limit_mgf,
    window_coefficient,
    window_density,
)
from .sampling import exact_sample, s_scaled
