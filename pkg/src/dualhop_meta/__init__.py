"""Meta distribution of the downlink SIR in two-tier networks where devices
attach either directly to a macro base station or through a decode-and-forward
relay."""

from .errors import (
    DegenerateDistributionError,
    DomainError,
    QuadratureError,
    SimulationError,
)
from .meta import (
    BetaShape,
    MetaCurve,
    beta_ccdf,
    beta_shape,
    gil_pelaez_ccdf,
    meta_curve,
)
from .moments import (
    coverage_probability,
    csp_variance,
    is_divergent,
    mean_local_delay,
    moment_dual_hop,
    moment_first_hop,
    moment_tier,
    moment_total,
)
from .network import (
    NetworkConfig,
    TierParams,
    TierRatios,
    association_probability,
    default_config,
    load_config,
    ratios,
)
from .quadrature import QuadratureSettings
from .simulation import (
    Realization,
    SimulationStats,
    SimWindow,
    associate_device,
    csp_link,
    empirical_ccdf,
    run_simulation,
    run_threshold_sweep,
    sample_ppp,
)
from .special import hyp2f1_line, reg_inc_beta

__version__ = "0.1.0"
