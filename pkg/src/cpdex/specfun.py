r"""Special functions and quadrature used throughout the package.

The coefficient functions of the derivative expansion are built from
:math:`e^{-2\xi}` and the exponential integral :math:`E_1(2\xi)`; their
:math:`\xi`-moments are rational numbers, exposed here as exact
:class:`fractions.Fraction` values so that comparisons against closed forms
can be made without rounding.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np
from scipy import integrate

EULER_GAMMA = 0.57721566490153286061

# |x| at or below which the power series is used; continued fraction above
_SERIES_CUTOFF = 1.0
_SERIES_TERMS = 40
_CF_MAXITER = 500
_CF_TINY = 1e-300


class ConvergenceError(RuntimeError):
    """Raised when an iterative numerical procedure fails to converge.

    The best available estimate is attached as ``estimate`` (and, for
    quadratures, the error estimate as ``error``).
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for :func:`integrate_semiinfinite`."""

    rtol: float = 1e-10
    atol: float = 1e-14
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


def _e1_series(x):
    # E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    total = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(1, _SERIES_TERMS + 1):
        term = term * (-x) / k
        total = total + term / k
    return -EULER_GAMMA - np.log(x) - total


def _e1_contfrac(x):
    # modified Lentz on E1(x) = e^{-x} / (x+1- 1/(x+3- 4/(x+5- ...)))
    b = x + 1.0
    c = np.full_like(x, 1.0 / _CF_TINY)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, _CF_MAXITER + 1):
        an = -float(i * i)
        b = b + 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h = h * delta
        if np.all(np.abs(delta - 1.0) < 1e-15):
            return h * np.exp(-x)
    raise ConvergenceError("continued fraction for E1 did not converge", h * np.exp(-x))


def e1(x):
    r"""Exponential integral :math:`E_1(x) = \int_x^\infty e^{-t}/t\,dt`.

    Parameters
    ----------
    x : float or array_like
        Strictly positive argument(s).

    Returns
    -------
    float or numpy.ndarray
        :math:`E_1(x)`; underflows to 0 for very large ``x``.

    Raises
    ------
    ValueError
        If any argument is not strictly positive.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("e1 requires x > 0")
    flat = np.atleast_1d(arr).ravel()
    out = np.empty_like(flat)
    small = flat <= _SERIES_CUTOFF
    if np.any(small):
        out[small] = _e1_series(flat[small])
    big = ~small
    if np.any(big):
        xb = flat[big]
        res = np.zeros_like(xb)
        live = xb < 745.0  # e^{-x} underflows beyond this
        if np.any(live):
            res[live] = _e1_contfrac(xb[live])
        out[big] = res
    out = out.reshape(np.shape(arr))
    return float(out) if out.ndim == 0 else out


def neg_e1(x):
    r""":math:`\mathrm{Ei}(x) = -\int_x^\infty e^{-t}/t\,dt = -E_1(x)` for x > 0."""
    val = e1(x)
    return -val


def integrate_semiinfinite(f, spec=QuadratureSpec()):
    r"""Adaptive estimate of :math:`\int_0^\infty f(\xi)\,d\xi`.

    The range is split at :math:`\xi = 1`: adaptive Gauss-Kronrod on
    :math:`[0, 1]` copes with the :math:`\xi^2\ln\xi` behaviour at the origin,
    and the tail is handled by QUADPACK's infinite-interval mapping.

    Returns
    -------
    (value, error) : tuple of float

    Raises
    ------
    ConvergenceError
        If either piece fails to meet the tolerances within
        ``spec.max_subdivisions``; carries the best estimate.
    """
    total = 0.0
    err = 0.0
    failures = []
    for lo, hi in ((0.0, 1.0), (1.0, np.inf)):
        res = integrate.quad(
            f, lo, hi, epsabs=spec.atol, epsrel=spec.rtol,
            limit=spec.max_subdivisions, full_output=1,
        )
        val, e, info = res[0], res[1], res[2]
        total += val
        err += e
        if len(res) > 3:
            failures.append(res[3])
    if failures:
        raise ConvergenceError(
            "semi-infinite quadrature did not converge: " + "; ".join(failures), total, err
        )
    return total, err


def poly_exp_moment(n):
    r"""Exact :math:`\int_0^\infty \xi^n e^{-2\xi}\,d\xi = n!/2^{n+1}`."""
    if n < 0:
        raise ValueError("moment order must be non-negative")
    return Fraction(factorial(n), 2 ** (n + 1))


def poly_e1_moment(n):
    r"""Exact :math:`\int_0^\infty \xi^n E_1(2\xi)\,d\xi = n!/((n+1)\,2^{n+1})`."""
    if n < 0:
        raise ValueError("moment order must be non-negative")
    return Fraction(factorial(n), (n + 1) * 2 ** (n + 1))
