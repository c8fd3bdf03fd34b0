"""Special functions used by the moment formulas.

``hyp2f1_line`` evaluates the Gauss hypergeometric function on the one
parameter line that appears in every CSP moment,

    2F1(b, -2/alpha; 1 - 2/alpha; -theta)
        = 1 + int_1^inf (1 - (1 + theta u^(-alpha/2))^(-b)) du,

with ``b`` allowed to be complex. ``reg_inc_beta`` is the regularized
incomplete Beta function, evaluated by continued fraction.
"""

import math
import numbers

import numpy as np

from .errors import DomainError, QuadratureError
from .quadrature import DEFAULT_SETTINGS, integrate

__all__ = ["hyp2f1_line", "hyp2f1_line_many", "reg_inc_beta"]

# Initial partition of the mapped variable w in (0, 1].
_W_EDGES = np.array([0.0, 0.05, 0.15, 0.3, 0.5, 0.7, 0.85, 1.0])


def _check_line_args(alpha, theta):
    if not alpha > 2:
        raise DomainError(f"path-loss exponent must exceed 2, got {alpha}")
    if not theta >= 0 or not math.isfinite(theta):
        raise DomainError(f"threshold must be finite and non-negative, got {theta}")


def hyp2f1_line_many(bs, alpha, theta, settings=DEFAULT_SETTINGS):
    """Vectorised ``hyp2f1_line`` over an array of orders ``bs``.

    All orders share one adaptive partition of the integration domain, which
    makes long sweeps over imaginary orders cheap.

    Parameters
    ----------
    bs : array_like
        Orders (real or complex), any shape.
    alpha : float
        Path-loss exponent, > 2.
    theta : float
        SIR threshold (linear), >= 0.
    settings : QuadratureSettings

    Returns
    -------
    ndarray
        Same shape as ``bs``; real dtype if ``bs`` is real.
    """
    alpha = float(alpha)
    theta = float(theta)
    _check_line_args(alpha, theta)
    b = np.asarray(bs)
    if not np.all(np.isfinite(b)):
        raise DomainError("order b must be finite")
    if not np.iscomplexobj(b):
        b = b.astype(float)
    if b.size == 0 or theta == 0.0:
        return np.ones(b.shape, dtype=b.dtype)

    flat = b.ravel()
    half_alpha = 0.5 * alpha
    # After u = 1/s the integrand is (1 - (1 + theta s^(alpha/2))^(-b)) / s^2,
    # which behaves like b theta s^(alpha/2 - 2) near s = 0. The power map
    # s = w^m with m (alpha/2 - 1) >= 2 makes it vanish at w = 0 instead.
    m = max(3, math.ceil(4.0 / (alpha - 2.0)))

    def kernel(w):
        s = w ** m
        log_base = np.log1p(theta * s ** half_alpha)
        jac = m * w ** (m - 1) / (s * s)
        return -np.expm1(-log_base[:, None] * flat[None, :]) * jac[:, None]

    try:
        value, _ = integrate(kernel, _W_EDGES, settings)
    except QuadratureError as exc:
        raise QuadratureError(str(exc), estimate=1.0 + exc.estimate, error=exc.error) from None
    out = 1.0 + value
    out[flat == 0] = 1.0
    return out.reshape(b.shape)


def hyp2f1_line(b, alpha, theta, settings=DEFAULT_SETTINGS):
    """2F1(b, -2/alpha; 1 - 2/alpha; -theta) for real or complex ``b``.

    Returns a float for real ``b`` and a complex for complex ``b``.

    >>> round(hyp2f1_line(1, 4.0, 1.0), 6)
    1.785398
    >>> round(hyp2f1_line(-1, 4.0, 0.1), 12)
    0.9
    """
    is_complex = isinstance(b, (complex, np.complexfloating)) or (
        isinstance(b, np.ndarray) and np.iscomplexobj(b)
    )
    if not is_complex and not isinstance(b, numbers.Real):
        raise DomainError(f"order must be a number, got {b!r}")
    value = hyp2f1_line_many(np.array([b]), alpha, theta, settings)[0]
    return complex(value) if is_complex else float(value)


# ---------------------------------------------------------------------------
# regularized incomplete Beta


_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAX_ITER = 10000


def _beta_cf(x, a, b):
    """Modified Lentz evaluation of the incomplete Beta continued fraction."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(
        f"incomplete Beta continued fraction did not converge (a={a}, b={b}, x={x})"
    )


def reg_inc_beta(x, a, b):
    """Regularized incomplete Beta function I_x(a, b).

    Parameters
    ----------
    x : float in [0, 1]
    a, b : float > 0

    >>> reg_inc_beta(0.5, 1.0, 1.0)
    0.5
    """
    x, a, b = float(x), float(a), float(b)
    if not (a > 0 and b > 0) or not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"shape parameters must be positive and finite, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        value = front * _beta_cf(x, a, b) / a
    else:
        value = 1.0 - front * _beta_cf(1.0 - x, b, a) / b
    return min(1.0, max(0.0, value))
