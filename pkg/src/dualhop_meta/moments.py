"""Moments of the conditional success probability (CSP).

Every moment is a ratio built from ``hyp2f1_line``:

* per-tier (direct link or second hop) ``M_{b,k} = 1 / (c_k + F(b; alpha_k, theta_D))``
  where ``c_k`` is the competing-tier bias term,
* first hop ``M_{b,FH} = 1 / F(b; alpha_1, theta_2)``,
* dual hop ``M_{b,FH} M_{b,2}`` and total ``M_{b,FH} M_{b,2} + M_{b,1}``.

For real negative ``b`` the moment integral only converges while the real
denominator stays positive; otherwise the moment is infinite and ``math.inf``
is returned as the divergence marker.
"""

import math
import numbers

import numpy as np

from .errors import DomainError
from .network import bias_term
from .quadrature import DEFAULT_SETTINGS
from .special import hyp2f1_line, hyp2f1_line_many

__all__ = [
    "is_divergent",
    "moment_tier",
    "moment_first_hop",
    "moment_dual_hop",
    "moment_total",
    "moment_total_many",
    "coverage_probability",
    "csp_variance",
    "mean_local_delay",
]


def is_divergent(value):
    """True if ``value`` is the divergence marker returned by the moment functions."""
    return isinstance(value, float) and math.isinf(value)


def _order(b):
    if isinstance(b, numbers.Real) and not isinstance(b, bool):
        b = float(b)
    elif isinstance(b, numbers.Complex):
        b = complex(b)
    else:
        raise DomainError(f"moment order must be a number, got {b!r}")
    if not (math.isfinite(b.real) and math.isfinite(b.imag)):
        raise DomainError("moment order must be finite")
    return b


def _reciprocal(denominator, b):
    if isinstance(b, float):
        if b < 0 and denominator <= 0:
            return math.inf
        return 1.0 / denominator
    return 1.0 / denominator


def moment_tier(b, config, k, settings=DEFAULT_SETTINGS):
    """b-th CSP moment restricted to devices served by tier ``k``.

    Includes the association indicator, so ``moment_tier(0, config, k)`` is the
    association probability of tier ``k``.
    """
    b = _order(b)
    alpha_k = config.tier(k).path_loss_exponent
    denom = bias_term(config, k) + hyp2f1_line(b, alpha_k, config.theta_d, settings)
    return _reciprocal(denom, b)


def moment_first_hop(b, config, settings=DEFAULT_SETTINGS):
    """b-th moment of the MBS-to-relay link CSP."""
    b = _order(b)
    denom = hyp2f1_line(b, config.tier1.path_loss_exponent, config.theta_2, settings)
    return _reciprocal(denom, b)


def moment_dual_hop(b, config, settings=DEFAULT_SETTINGS):
    first = moment_first_hop(b, config, settings)
    second = moment_tier(b, config, 2, settings)
    if is_divergent(first) or is_divergent(second):
        return math.inf
    return first * second


def moment_total(b, config, settings=DEFAULT_SETTINGS):
    """b-th moment of the CSP of the typical device over both association cases."""
    dual = moment_dual_hop(b, config, settings)
    direct = moment_tier(b, config, 1, settings)
    if is_divergent(dual) or is_divergent(direct):
        return math.inf
    return dual + direct


def moment_total_many(bs, config, settings=DEFAULT_SETTINGS):
    """Vectorised ``moment_total`` for an array of complex (or positive) orders.

    Intended for the imaginary-order sweeps of the Gil-Pelaez inversion; no
    divergence detection is performed, so negative real orders are rejected.
    """
    b = np.asarray(bs)
    if not np.iscomplexobj(b) and np.any(b < 0):
        raise DomainError("negative real orders need moment_total for divergence checks")
    a1 = config.tier1.path_loss_exponent
    a2 = config.tier2.path_loss_exponent
    first = hyp2f1_line_many(b, a1, config.theta_2, settings)
    second = bias_term(config, 2) + hyp2f1_line_many(b, a2, config.theta_d, settings)
    direct = bias_term(config, 1) + hyp2f1_line_many(b, a1, config.theta_d, settings)
    return 1.0 / (first * second) + 1.0 / direct


def coverage_probability(config, settings=DEFAULT_SETTINGS):
    """Mean CSP, i.e. the standard success probability."""
    return moment_total(1.0, config, settings)


def csp_variance(config, settings=DEFAULT_SETTINGS):
    m1 = moment_total(1.0, config, settings)
    m2 = moment_total(2.0, config, settings)
    # Tiny negative values are rounding noise at theta -> 0.
    return max(0.0, m2 - m1 * m1)


def mean_local_delay(config, settings=DEFAULT_SETTINGS):
    """Expected number of transmission attempts, ``math.inf`` past the phase
    transition."""
    return moment_total(-1.0, config, settings)
