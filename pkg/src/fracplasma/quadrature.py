"""Semi-infinite oscillatory quadrature for sine transforms.

The range is cut at the zeros of sin(lambda r), each half-period is
integrated adaptively, and the sequence of partial sums is either
accelerated (Wynn epsilon) or closed by a caller-supplied analytic tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from scipy import integrate

from .errors import DomainError, MaxPeriodsError, QuadratureError, TailDivergenceError

ACCELERATIONS = ("none", "alternating-series")
POLE_POLICIES = ("error", "principal_value")
MAX_HALF_PERIODS_CAP = 1_000_000

# minimum half-periods before stopping
_MIN_HALF_PERIODS = 8
# consecutive estimate differences that must all fall below tolerance
_AGREE = 3
# window of partial sums fed to the epsilon table
_WYNN_WINDOW = 40
# magnitudes of half-period contributions are compared in blocks of this size
_DECAY_BLOCK = 16
_DECAY_CHECK_UNTIL = 256
_DECAY_RATIO = 0.995


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances, half-period budget, acceleration and pole policy."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_half_periods: int = 10_000
    acceleration: str = "alternating-series"
    pole_policy: str = "error"

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if not (math.isfinite(self.abs_tol) and math.isfinite(self.rel_tol)):
            raise DomainError("quadrature tolerances must be finite")
        if not (_MIN_HALF_PERIODS <= self.max_half_periods <= MAX_HALF_PERIODS_CAP):
            raise DomainError(
                f"max_half_periods must lie in [{_MIN_HALF_PERIODS}, {MAX_HALF_PERIODS_CAP}], "
                f"got {self.max_half_periods}"
            )
        if self.acceleration not in ACCELERATIONS:
            raise DomainError(f"acceleration must be one of {ACCELERATIONS}, got {self.acceleration!r}")
        if self.pole_policy not in POLE_POLICIES:
            raise DomainError(f"pole_policy must be one of {POLE_POLICIES}, got {self.pole_policy!r}")


DEFAULT_SPEC = QuadratureSpec()


class OscillatoryResult(NamedTuple):
    value: float
    error_estimate: float
    half_periods: int


def wynn_epsilon(sums) -> float:
    """Wynn epsilon extrapolation of a sequence; returns the deepest even-column entry."""
    prev = [0.0] * (len(sums) + 1)
    cur = list(sums)
    best = cur[-1]
    col = 0
    while len(cur) > 1:
        nxt = []
        for i in range(len(cur) - 1):
            diff = cur[i + 1] - cur[i]
            if diff == 0.0 or not math.isfinite(diff):
                # column degenerated: the sequence has already converged here
                return best
            nxt.append(prev[i + 1] + 1.0 / diff)
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0:
            best = cur[-1]
    return best


def quad_piece(f, lo, hi, abs_tol, rel_tol=1e-13, limit=200):
    """Adaptive Gauss-Kronrod on [lo, hi]; QuadratureError instead of a warning."""
    value, abserr, *info = integrate.quad(f, lo, hi, epsabs=abs_tol, epsrel=rel_tol, limit=limit, full_output=1)
    if len(info) > 1 and abserr > 1e3 * max(abs_tol, rel_tol * abs(value)):
        raise QuadratureError(f"quadrature on [{lo:.6g}, {hi:.6g}] failed: {info[1].splitlines()[0]}")
    return value, abserr


def half_period_sum(
    f: Callable[[float], float],
    r: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    lower: float = 0.0,
    tail: Callable[[float], float] | None = None,
) -> OscillatoryResult:
    """Integral of an integrand that oscillates like sin(lambda r), from ``lower`` to infinity.

    ``tail(L)``, when given, must return the integral from L to infinity for
    L on a zero of the sine, either bare or as ``(value, error)``; otherwise the partial sums are accelerated
    according to ``spec.acceleration``.
    """
    if not (r > 0 and math.isfinite(r)):
        raise DomainError(f"r must be finite and positive, got {r}")
    if not (lower >= 0 and math.isfinite(lower)):
        raise DomainError(f"lower limit must be finite and non-negative, got {lower}")
    half = math.pi / r
    first = math.floor(lower / half) + 1
    piece_tol = 1e-3 * min(spec.abs_tol, 1e-12)

    running = 0.0
    quad_err = 0.0
    tail_err = 0.0
    peak_size, peak_at = -1.0, 0
    magnitude = 0.0
    sums: list[float] = []
    sizes: list[float] = []
    estimates: list[float] = []
    lo = lower
    for n in range(spec.max_half_periods):
        hi = (first + n) * half
        piece, err = quad_piece(f, lo, hi, piece_tol)
        lo = hi
        running += piece
        quad_err += err
        magnitude += abs(piece)
        sums.append(running)
        sizes.append(abs(piece))

        if tail is not None:
            closing = tail(hi)
            closing, tail_err = closing if isinstance(closing, tuple) else (closing, 0.0)
            # asymptotic tails can blow up at small cut points; fall back to the raw sum
            estimates.append(running + closing if math.isfinite(closing) else running)
        elif spec.acceleration == "alternating-series" and len(sums) >= 3:
            estimates.append(wynn_epsilon(sums[-_WYNN_WINDOW:]))
        else:
            estimates.append(running)

        if not math.isfinite(estimates[-1]):
            raise QuadratureError(f"non-finite partial sum after {n + 1} half-periods")

        used = n + 1
        if used >= _MIN_HALF_PERIODS:
            est = estimates[-1]
            tol = max(spec.abs_tol, spec.rel_tol * abs(est))
            steps = [abs(estimates[-i] - estimates[-i - 1]) for i in range(1, _AGREE + 1)]
            # extrapolation also "sums" non-decaying series (Abel sense), so only stop
            # once the contributions have turned over; growing ones reach the block check
            decaying = sizes[-1] < 0.999 * max(sizes)
            if max(steps) <= tol and decaying:
                # accelerated estimates do not improve monotonically, so keep the largest step
                floor = 4.0 * math.ulp(1.0) * magnitude
                return OscillatoryResult(est, max(max(steps) + quad_err + tail_err, floor), used)

        if sizes[-1] > peak_size:
            peak_size, peak_at = sizes[-1], used
        # integrands may rise for a while before decaying, so count from the largest contribution
        since = used - peak_at
        if 4 * _DECAY_BLOCK <= since <= _DECAY_CHECK_UNTIL and since % _DECAY_BLOCK == 0:
            recent = sum(sizes[-_DECAY_BLOCK:])
            before = sum(sizes[-2 * _DECAY_BLOCK : -_DECAY_BLOCK])
            if recent >= _DECAY_RATIO * before:
                raise TailDivergenceError(
                    f"half-period contributions stopped decaying after {used} half-periods "
                    f"(block ratio {recent / before if before else math.inf:.3g})"
                )
    if sizes and sizes[-1] >= 0.999 * peak_size:
        raise TailDivergenceError(f"half-period contributions still growing after {used} half-periods")
    raise MaxPeriodsError(f"no convergence within {spec.max_half_periods} half-periods")


def oscillatory_sine_integral(
    g: Callable[[float], float],
    r: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    lower: float = 0.0,
    tail: Callable[[float], float] | None = None,
) -> tuple[float, float]:
    """Integral of g(lambda) sin(lambda r) over [lower, inf); returns (value, error_estimate)."""
    res = half_period_sum(lambda lam: g(lam) * math.sin(lam * r), r, spec, lower, tail)
    return res.value, res.error_estimate
