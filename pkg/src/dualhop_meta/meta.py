"""Meta distribution of the CSP: exact inversion and Beta approximation.

The exact curve inverts the imaginary moments ``M_{jt}`` with the Gil-Pelaez
formula

    P(CSP > x) = 1/2 + (1/pi) int_0^inf Im(exp(-j t log x) M_{jt}) / t dt,

and the approximation matches the first two moments to a Beta distribution.
"""

import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .errors import DegenerateDistributionError, DomainError, QuadratureError
from .moments import moment_total, moment_total_many
from .quadrature import QuadratureSettings, integrate
from .special import reg_inc_beta

__all__ = [
    "METHODS",
    "MetaCurve",
    "BetaShape",
    "gil_pelaez_ccdf",
    "beta_shape",
    "beta_ccdf",
    "meta_curve",
]

METHODS = ("gil-pelaez", "beta", "empirical")


@dataclass(frozen=True)
class MetaCurve:
    """Sampled reliability curve ``[(x, P(CSP > x)), ...]``.

    Points whose evaluation failed are listed in ``failures`` as
    ``(x, message)`` instead of being dropped silently.
    """

    points: Tuple[Tuple[float, float], ...]
    method: str
    failures: Tuple[Tuple[float, str], ...] = field(default=())

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        xs = [p[0] for p in self.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError("curve abscissae must be strictly increasing")

    @property
    def xs(self):
        return np.array([p[0] for p in self.points])

    @property
    def ccdf(self):
        return np.array([p[1] for p in self.points])


@dataclass(frozen=True)
class BetaShape:
    a: float
    beta_param: float

    @property
    def mean(self):
        return self.a / (self.a + self.beta_param)


# ---------------------------------------------------------------------------
# Gil-Pelaez inversion

# Inner tolerance for the imaginary moments; far below the outer target.
_MOMENT_SETTINGS = QuadratureSettings(abs_tol=1e-9, rel_tol=1e-8, max_subdivisions=20000)
_CHUNK = 256


def _check_x_open(x):
    x = float(x)
    if not 0.0 < x < 1.0:
        raise DomainError(f"reliability x must lie in (0, 1), got {x}")
    return x


def _gp_integrand(config, log_x):
    def f(t):
        out = np.empty(t.size)
        for start in range(0, t.size, _CHUNK):
            tt = t[start:start + _CHUNK]
            m = moment_total_many(1j * tt, config, _MOMENT_SETTINGS)
            out[start:start + _CHUNK] = np.imag(np.exp(-1j * tt * log_x) * m) / tt
        return out
    return f


def _panel_edges(lo, hi, width):
    n = max(1, int(math.ceil((hi - lo) / width)))
    return np.linspace(lo, hi, n + 1)


def gil_pelaez_ccdf(
    x,
    config,
    *,
    t_min=1e-6,
    t_start=200.0,
    octave_tol=1e-4,
    max_doublings=8,
    abs_tol=1e-3,
):
    """Exact meta distribution P(CSP > x) by Gil-Pelaez inversion.

    The outer integral runs over [t_min, T]; T starts at ``t_start`` and is
    doubled until the last octave [T/2, T] contributes less than
    ``octave_tol``. Panels are aligned with the half-periods pi/|log x| of the
    oscillating factor and refined adaptively.

    Raises
    ------
    QuadratureError
        If the estimated absolute error of the integral exceeds ``abs_tol`` or
        the truncation does not settle within ``max_doublings``. The partial
        P(CSP > x) estimate is attached.
    """
    x = _check_x_open(x)
    log_x = math.log(x)
    width = math.pi / abs(log_x)
    f = _gp_integrand(config, log_x)
    n_panels = int(math.ceil((t_start - t_min) / width))
    settings = QuadratureSettings(
        abs_tol=abs_tol / 20.0, rel_tol=1e-6, max_subdivisions=max(4000, 4 * n_panels)
    )

    def ccdf_of(total):
        return min(1.0, max(0.0, 0.5 + total / math.pi))

    def piece(lo, hi, partial):
        try:
            value, err = integrate(f, _panel_edges(lo, hi, width), settings)
        except QuadratureError as exc:
            raise QuadratureError(
                f"Gil-Pelaez integral failed on [{lo:g}, {hi:g}]: {exc}",
                estimate=ccdf_of(partial + float(exc.estimate[0])),
                error=float(exc.error.max()),
            ) from None
        return float(value[0]), float(err[0])

    total, error = piece(t_min, t_start, 0.0)
    upper = t_start
    octaves = []
    for _ in range(max_doublings):
        contrib, err = piece(upper, 2.0 * upper, total)
        total += contrib
        error += err
        upper *= 2.0
        octaves.append(contrib)
        if abs(contrib) < octave_tol:
            tail_error = abs(contrib)
            break
    else:
        # Power-law tails (x close to 1) shrink by a steady factor per octave;
        # sum the remaining geometric series instead of doubling forever.
        tail, tail_error = _geometric_tail(octaves)
        if tail is None:
            raise QuadratureError(
                f"Gil-Pelaez tail still contributes {abs(contrib):.2g} at T = {upper:g}",
                estimate=ccdf_of(total), error=abs(contrib),
            )
        total += tail
    # Error budget: quadrature error plus the truncated-tail estimate, in ccdf units.
    error = (error + tail_error) / math.pi
    if error > abs_tol:
        raise QuadratureError(
            f"Gil-Pelaez error estimate {error:.2g} exceeds {abs_tol:g}",
            estimate=ccdf_of(total), error=error,
        )
    return ccdf_of(total)


def _geometric_tail(octaves):
    """Extrapolated sum of the octaves beyond the last one, with an error bound.

    Returns ``(None, None)`` unless the last three octaves have one sign and
    shrink by similar ratios.
    """
    if len(octaves) < 3:
        return None, None
    c0, c1, c2 = octaves[-3:]
    if not (c0 * c1 > 0 and c1 * c2 > 0):
        return None, None
    r1, r2 = c1 / c0, c2 / c1
    if not (0 < r2 < 0.95 and abs(r2 - r1) < 0.1):
        return None, None
    tail = c2 * r2 / (1.0 - r2)
    # Sensitivity of the series sum to the spread of the observed ratios.
    spread = abs(c2) * (abs(r2 - r1) / (1.0 - r2) ** 2 + 0.1 * r2 / (1.0 - r2))
    return tail, spread


# ---------------------------------------------------------------------------
# Beta approximation

_DEGENERATE_MEAN = 1.0 - 1e-12
_DEGENERATE_VAR = 1e-14


def beta_shape_from_moments(m1, m2):
    """Beta shapes matching mean ``m1`` and second moment ``m2``."""
    var = m2 - m1 * m1
    if not (0.0 < m1 < _DEGENERATE_MEAN) or var <= _DEGENERATE_VAR:
        raise DegenerateDistributionError(
            f"moments (M1={m1!r}, M2={m2!r}) describe a point mass", mean=m1
        )
    beta = (m1 - m2) * (1.0 - m1) / var
    a = beta * m1 / (1.0 - m1)
    if not (a > 0 and beta > 0 and math.isfinite(a) and math.isfinite(beta)):
        raise DegenerateDistributionError(
            f"moments (M1={m1!r}, M2={m2!r}) admit no Beta fit", mean=m1
        )
    return BetaShape(a=a, beta_param=beta)


def beta_shape(config):
    """Moment-matched Beta shape of the total-network CSP."""
    return beta_shape_from_moments(moment_total(1.0, config), moment_total(2.0, config))


def _step_ccdf(x, mean):
    return 1.0 if x < mean else 0.0


def beta_ccdf(x, config, *, shape=None, degenerate="raise"):
    """Beta approximation of P(CSP > x).

    With ``degenerate="step"`` a point-mass moment pair falls back to the step
    function at the mean instead of raising DegenerateDistributionError.
    """
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if degenerate not in ("raise", "step"):
        raise ValueError("degenerate must be 'raise' or 'step'")
    if shape is None:
        try:
            shape = beta_shape(config)
        except DegenerateDistributionError as exc:
            if degenerate == "raise":
                raise
            return _step_ccdf(x, exc.mean)
    return 1.0 - reg_inc_beta(x, shape.a, shape.beta_param)


def meta_curve(config, xs, method="beta", **gp_options):
    """Evaluate the meta distribution on a sorted grid inside (0, 1).

    ``method`` is ``"gil-pelaez"`` or ``"beta"``; empirical curves come from
    :func:`dualhop_meta.simulation.empirical_ccdf`.
    """
    xs = [float(x) for x in xs]
    if any(not 0.0 < x < 1.0 for x in xs):
        raise DomainError("grid points must lie in (0, 1)")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise DomainError("grid must be strictly increasing")
    if method == "beta":
        try:
            shape = beta_shape(config)
        except DegenerateDistributionError as exc:
            points = tuple((x, _step_ccdf(x, exc.mean)) for x in xs)
            return MetaCurve(points=points, method="beta")
        evaluate = lambda x: beta_ccdf(x, config, shape=shape)  # noqa: E731
    elif method == "gil-pelaez":
        evaluate = lambda x: gil_pelaez_ccdf(x, config, **gp_options)  # noqa: E731
    else:
        raise DomainError(f"meta_curve supports 'beta' and 'gil-pelaez', got {method!r}")

    points, failures = [], []
    for x in xs:
        try:
            points.append((x, evaluate(x)))
        except (QuadratureError, ArithmeticError) as exc:
            failures.append((x, str(exc)))
    return MetaCurve(points=tuple(points), method=method, failures=tuple(failures))
