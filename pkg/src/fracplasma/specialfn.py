"""Special functions: gamma, Mittag-Leffler, Dawson, plasma response integral, J_{1/2}.

All functions take and return plain Python floats (complex for the response
integral) and hold no state, so they can be called from any thread.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

from .errors import ConvergenceError, DomainError, PoleError

SQRT_PI = math.sqrt(math.pi)

# Mittag-Leffler support: real argument, order in (0, 1].
ML_MAX_ABS_Z = 5.0
# Series is abandoned for the integral representation once the largest term
# exceeds the result by this factor (lost digits ~ log10 of the ratio).
ML_CANCELLATION_LIMIT = 1e2
# Above this order the integral's spectral peak is too sharp for double
# precision; the series loses at most ~log10(e**10) digits there instead.
ML_INTEGRAL_MAX_ORDER = 0.99

# Rybicki sampling step and sum length; sampling error ~ exp(-(pi / (2 h))**2).
_DAWSON_H = 0.25
_DAWSON_NMAX = 16
_DAWSON_SERIES_CUTOFF = 0.2
_DAWSON_COEFFS = tuple(math.exp(-(((2 * i + 1) * _DAWSON_H) ** 2)) for i in range(_DAWSON_NMAX))


@dataclass(frozen=True)
class SeriesControl:
    """Budget and stopping tolerances for power-series evaluation."""

    max_terms: int = 10_000
    abs_tol: float = 1e-300
    rel_tol: float = 1e-17

    def __post_init__(self):
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("series tolerances must be positive")


DEFAULT_SERIES = SeriesControl()


def gamma(x: float) -> float:
    """Euler gamma function; raises :class:`PoleError` at 0, -1, -2, ..."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"gamma has a pole at {x}")
    try:
        return math.gamma(x)
    except OverflowError as exc:
        raise DomainError(f"gamma({x}) overflows double precision") from exc


def _ml_log_term(alpha: float, log_abs_z: float, j: int) -> float:
    return j * log_abs_z - math.lgamma(alpha * j + 1.0)


def _ml_log_peak(alpha: float, abs_z: float) -> float:
    """Upper estimate of log max_j |z|**j / Gamma(alpha j + 1)."""
    if abs_z <= 1.0:
        return 0.0
    log_abs_z = math.log(abs_z)
    # continuous maximiser solves alpha * digamma(alpha j + 1) = log|z|
    j_star = max(abs_z ** (1.0 / alpha) / alpha, 1.0)
    lo = max(int(j_star) - 3, 0)
    return max(_ml_log_term(alpha, log_abs_z, j) for j in range(lo, int(j_star) + 4))


def _ml_series(alpha: float, z: float, ctrl: SeriesControl) -> tuple[float, float]:
    """Sum z**j / Gamma(alpha j + 1); returns (sum, largest |term|)."""
    if z == 0.0:
        return 1.0, 1.0
    abs_z = abs(z)
    log_abs_z = math.log(abs_z)
    negative = z < 0
    terms = [1.0]
    running = 1.0
    largest = 1.0
    for j in range(1, ctrl.max_terms):
        log_t = _ml_log_term(alpha, log_abs_z, j)
        if log_t > 709.0:
            raise DomainError(f"E_{alpha}({z}) overflows double precision")
        arg = alpha * j + 1.0
        direct = arg < 170.0 and j * log_abs_z < 700.0
        t = abs_z**j / math.gamma(arg) if direct else math.exp(log_t)
        largest = max(largest, t)
        if negative and j % 2:
            t = -t
        terms.append(t)
        running += t
        # terms decrease monotonically once Gamma outgrows |z|**j
        past_peak = alpha * j > 1.0 and abs(t) <= abs(terms[-2])
        if past_peak and abs(t) <= max(ctrl.abs_tol, ctrl.rel_tol * abs(running)):
            return math.fsum(terms), largest
    raise ConvergenceError(
        f"Mittag-Leffler series for alpha={alpha}, z={z} did not converge in {ctrl.max_terms} terms"
    )


def _ml_negative_integral(alpha: float, t: float) -> float:
    """E_alpha(-t) for 0 < alpha < 1, t > 0 from its completely monotone representation.

    Written in the variable u = s**alpha so the integrand is smooth at the origin.
    """
    c_a = math.cos(alpha * math.pi)

    def spectrum(u):
        return math.exp(-((u * t) ** (1.0 / alpha))) / (u * u + 2.0 * u * c_a + 1.0)

    # denominator dips to sin(alpha pi)**2 at u = -cos(alpha pi) when alpha > 1/2
    breaks = {1.0}
    if c_a < 0:
        width = math.sin(alpha * math.pi)
        breaks |= {-c_a, -c_a + width, max(-c_a - width, 0.5 * -c_a)}
    breaks = sorted(breaks)
    edges = [0.0, *breaks, 2.0 * breaks[-1] + 1.0]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += integrate.quad(spectrum, lo, hi, epsabs=0.0, epsrel=1e-13, limit=200)[0]
    total += integrate.quad(spectrum, edges[-1], math.inf, epsabs=0.0, epsrel=1e-13, limit=200)[0]
    return math.sin(alpha * math.pi) / (alpha * math.pi) * total


def mittag_leffler(alpha: float, z: float, ctrl: SeriesControl = DEFAULT_SERIES) -> float:
    r"""One-parameter Mittag-Leffler function :math:`E_\alpha(z)` on the real line.

    Supported domain is ``0 < alpha <= 1`` and ``|z| <= 5``.  The Taylor series
    is used unless it cancels badly (negative ``z``, small ``alpha``), where the
    integral representation of :math:`E_\alpha(-t)` takes over.  At
    ``alpha == 1`` negative arguments use ``E_1(z) = 1 / E_1(-z)``.
    """
    alpha = float(alpha)
    z = float(z)
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"Mittag-Leffler order must lie in (0, 1], got {alpha}")
    if not math.isfinite(z) or abs(z) > ML_MAX_ABS_Z:
        raise DomainError(f"Mittag-Leffler argument must satisfy |z| <= {ML_MAX_ABS_Z}, got {z}")

    if alpha == 1.0 and z < 0:
        value, _ = _ml_series(1.0, -z, ctrl)
        return 1.0 / value
    use_integral = z < 0 and alpha <= ML_INTEGRAL_MAX_ORDER
    if use_integral and _ml_log_peak(alpha, -z) > math.log(ML_CANCELLATION_LIMIT):
        # |E_alpha(-t)| <= 1, so a peak term this large means heavy cancellation
        return _ml_negative_integral(alpha, -z)

    value, largest = _ml_series(alpha, z, ctrl)
    if use_integral and largest > ML_CANCELLATION_LIMIT * abs(value):
        return _ml_negative_integral(alpha, -z)
    return value


def dawson(x: float) -> float:
    r"""Dawson integral :math:`D(x) = e^{-x^2}\int_0^x e^{t^2}\,dt`.

    Rybicki's exponentially convergent sampling sum, with the Maclaurin series
    near the origin where the sum loses relative accuracy.
    """
    x = float(x)
    ax = abs(x)
    if ax < _DAWSON_SERIES_CUTOFF:
        x2 = x * x
        term = x
        total = x
        n = 0
        while abs(term) > 1e-18 * abs(total):
            n += 1
            term *= -2.0 * x2 / (2 * n + 1)
            total += term
        return total

    n0 = 2 * round(0.5 * ax / _DAWSON_H)
    xp = ax - n0 * _DAWSON_H
    e1 = math.exp(2.0 * xp * _DAWSON_H)
    e2 = e1 * e1
    d1 = n0 + 1.0
    d2 = d1 - 2.0
    total = 0.0
    for c in _DAWSON_COEFFS:
        total += c * (e1 / d1 + 1.0 / (d2 * e1))
        d1 += 2.0
        d2 -= 2.0
        e1 *= e2
    return math.copysign(math.exp(-xp * xp) * total / SQRT_PI, x)


def plasma_response_integral(x: float) -> complex:
    r"""Landau-prescribed Maxwellian response integral.

    .. math::

        W(x) = \int_{-\infty}^{\infty} \frac{z e^{-z^2}}{z - x - i0}\,dz
             = \sqrt{\pi}\,(1 - 2 x D(x)) + i \pi x e^{-x^2}

    The principal value part is realised through the Dawson integral.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"response integral needs a finite argument, got {x}")
    real = SQRT_PI * (1.0 - 2.0 * x * dawson(x))
    imag = math.pi * x * math.exp(-x * x)
    return complex(real, imag)


def bessel_j_half(z: float) -> float:
    """Half-order Bessel function J_{1/2}(z) = sqrt(2 / (pi z)) sin z for z > 0."""
    z = float(z)
    if not z > 0:
        raise DomainError(f"bessel_j_half needs z > 0, got {z}")
    return math.sqrt(2.0 / (math.pi * z)) * math.sin(z)

