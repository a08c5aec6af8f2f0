"""Green functions and screened point-charge potentials for power-law symbols.

For a radial source the three-dimensional inverse Fourier transform of
1/P(|k|) reduces to a one-dimensional sine transform,

    G(r) = 1/(2 pi**2 r) * int_0^inf lambda sin(lambda r) / P(lambda) dlambda,

so a point charge Q gives Phi(r) = Q/(4 pi eps0 r) * C(r) with the
correction factor C(r) = (2/pi) int_0^inf lambda sin(lambda r)/P(lambda).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import optimize

from .errors import (
    CaseInvariantError,
    DomainError,
    FracPlasmaError,
    PoleError,
    SolvabilityError,
)
from .plasma import PlasmaParameters
from .quadrature import DEFAULT_SPEC, QuadratureSpec, half_period_sum, quad_piece
from .specialfn import bessel_j_half

CASES = (
    "coulomb",
    "debye",
    "small_x_two_term",
    "small_x_three_term",
    "large_x_two_term",
    "large_x_three_term",
)

# coefficients this small relative to the others are treated as cancelled
_MERGE_RTOL = 1e-14
# |P| below this fraction of its term sizes at a local minimum counts as a double root
_TOUCH_RTOL = 1e-9
# log-grid density and padding for the positive-root scan
_ROOT_SCAN_POINTS = 2000
_ROOT_SCAN_PAD = 1e3
# highest derivative order used by the asymptotic tail
_TAIL_ORDER = 12


@dataclass(frozen=True)
class PowerLawSymbol:
    """P(lambda) = a0 + sum_k a_k lambda**e_k.

    Terms with equal exponents are merged and exponent-0 terms move into
    ``a0``; ``terms`` ends up sorted by strictly increasing exponent.
    """

    a0: float = 0.0
    terms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        a0 = float(self.a0)
        a0_size = abs(a0)
        merged: dict[float, float] = {}
        # coefficients of different exponents carry different units, so a merged
        # coefficient is only compared with the terms it was merged from
        sizes: dict[float, float] = {}
        for coef, expo in self.terms:
            coef, expo = float(coef), float(expo)
            if not (math.isfinite(coef) and math.isfinite(expo)):
                raise DomainError(f"non-finite symbol term ({coef}, {expo})")
            if expo < 0:
                raise DomainError(f"symbol exponents must be >= 0, got {expo}")
            if expo == 0.0:
                a0 += coef
                a0_size += abs(coef)
            else:
                merged[expo] = merged.get(expo, 0.0) + coef
                sizes[expo] = sizes.get(expo, 0.0) + abs(coef)
        if not math.isfinite(a0):
            raise DomainError(f"non-finite symbol constant {a0}")
        if abs(a0) <= _MERGE_RTOL * a0_size:
            a0 = 0.0
        kept = tuple(
            (c, e) for e, c in sorted(merged.items()) if abs(c) > _MERGE_RTOL * sizes[e]
        )
        if not kept:
            raise DomainError("power-law symbol needs at least one lambda-dependent term")
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "terms", kept)

    @property
    def exponents(self) -> tuple:
        return tuple(e for _, e in self.terms)

    @property
    def leading(self) -> tuple:
        return self.terms[-1]

    def __call__(self, lam: float) -> float:
        return self.a0 + sum(c * lam**e for c, e in self.terms)

    def derivatives(self, lam: float, order: int) -> list[float]:
        """[P(lam), P'(lam), ..., P^(order)(lam)]."""
        out = []
        for k in range(order + 1):
            value = self.a0 if k == 0 else 0.0
            for c, e in self.terms:
                falling = math.prod(e - i for i in range(k))
                if falling != 0.0:
                    value += c * falling * lam ** (e - k)
            out.append(value)
        return out

    def positive_roots(self) -> list[float]:
        """Sign changes of P on (0, inf), refined with Brent's method."""
        pts = [(self.a0, 0.0)] if self.a0 != 0.0 else []
        pts += list(self.terms)
        scales = [
            (abs(ci / cj)) ** (1.0 / (ej - ei))
            for i, (ci, ei) in enumerate(pts)
            for cj, ej in pts[i + 1 :]
        ]
        if not scales:
            return []
        grid = np.geomspace(min(scales) / _ROOT_SCAN_PAD, max(scales) * _ROOT_SCAN_PAD, _ROOT_SCAN_POINTS)
        values = [self(v) for v in grid]
        roots = []
        for lo, hi, flo, fhi in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
            if flo == 0.0:
                roots.append(float(lo))
            elif flo * fhi < 0:
                roots.append(optimize.brentq(self, lo, hi, xtol=1e-15 * hi, rtol=4 * np.finfo(float).eps))
        # roots of even multiplicity touch zero without a sign change
        for i in range(1, len(grid) - 1):
            if abs(values[i]) <= abs(values[i - 1]) and abs(values[i]) <= abs(values[i + 1]):
                if values[i - 1] * values[i + 1] > 0 and values[i] * values[i - 1] > 0:
                    found = optimize.minimize_scalar(
                        lambda v: abs(self(v)), bounds=(grid[i - 1], grid[i + 1]), method="bounded",
                        options={"xatol": 1e-12 * grid[i]},
                    )
                    if abs(self(found.x)) <= _TOUCH_RTOL * self.size(found.x):
                        roots.append(float(found.x))
        return sorted(roots)

    def size(self, lam: float) -> float:
        """Sum of the magnitudes of the individual terms at lam."""
        return abs(self.a0) + sum(abs(c) * lam**e for c, e in self.terms)

    def nonpositive_somewhere(self) -> bool:
        """True if P <= 0 at some lambda > 0 (checked near 0, on the scan grid and at infinity)."""
        if self.positive_roots():
            return True
        c_lead, _ = self.leading
        c_low, _ = self.terms[0]
        at_zero = self.a0 if self.a0 != 0.0 else c_low
        return c_lead <= 0 or at_zero <= 0

    def check_solvable(self) -> None:
        """Exponent window in which the radial Green integral converges."""
        if not self.leading[1] > 1.0:
            raise SolvabilityError(f"largest exponent must exceed 1, got {self.leading[1]}")
        if self.a0 == 0.0 and not self.terms[0][1] < 3.0:
            raise SolvabilityError(f"without a constant term the smallest exponent must be < 3, got {self.terms[0][1]}")


def _ratio_derivatives(sym: PowerLawSymbol, lam: float, order: int) -> list[float]:
    """Derivatives of phi = lambda / P(lambda) up to ``order`` from the quotient recurrence."""
    p = sym.derivatives(lam, order)
    u = [1.0 / p[0]]
    for n in range(1, order + 1):
        u.append(-sum(math.comb(n, j) * p[j] * u[n - j] for j in range(1, n + 1)) / p[0])
    return [lam * u[0]] + [lam * u[n] + n * u[n - 1] for n in range(1, order + 1)]


def ratio_tail(sym: PowerLawSymbol, r: float, cut: float) -> tuple[float, float]:
    """Integral of lambda sin(lambda r)/P from ``cut`` (a zero of the sine) to infinity.

    Repeated integration by parts gives the asymptotic series
    cos(cut r) * sum_k (-1)**k phi^(2k)(cut) / r**(2k+1), summed until its
    terms start to grow.  Returns the sum and the size of the first term
    left out as its truncation error.
    """
    d = _ratio_derivatives(sym, cut, _TAIL_ORDER)
    total = 0.0
    last = math.inf
    for k in range(_TAIL_ORDER // 2 + 1):
        term = (-1) ** k * d[2 * k] / r ** (2 * k + 1)
        if abs(term) > abs(last):
            break
        total += term
        last = term
    else:
        term = last
    return math.cos(cut * r) * total, abs(term)


@dataclass(frozen=True)
class CorrectionFactor:
    value: float
    error_estimate: float
    half_periods_used: int
    pole_encountered: bool = False


@dataclass(frozen=True)
class PotentialResult:
    """Potential (volt) with its correction factor; ``error_estimate`` bounds ``value``."""

    value: float
    correction_factor: float
    error_estimate: float
    half_periods_used: int
    pole_encountered: bool = False
    error: str | None = None


def _principal_value_pieces(sym, r, spec, roots, f, tail):
    """PV integral of f = lambda sin(lambda r)/P with simple poles at ``roots``.

    Each pole gets a symmetric excision window where the 1/(lambda - root)
    part is subtracted on both sides, so only a bounded remainder is integrated.
    """
    piece_tol = 1e-3 * min(spec.abs_tol, 1e-12)
    half = math.pi / r
    total = 0.0
    err = 0.0
    lo = 0.0
    for i, root in enumerate(roots):
        slope = sym.derivatives(root, 1)[1]
        if abs(slope) <= 1e-12 * max(abs(c) * e * root ** (e - 1) for c, e in sym.terms):
            raise PoleError(f"symbol has a multiple root near {root:.6g}; no principal value")
        residue = root * math.sin(root * r) / slope
        gap = roots[i + 1] - root if i + 1 < len(roots) else math.inf
        width = min(0.5 * (root - lo), 0.5 * gap, half)

        # regular part below the window, cut at sine zeros to keep pieces short
        edges = [lo, *[k * half for k in range(math.floor(lo / half) + 1, math.ceil((root - width) / half))], root - width]
        for a, b in zip(edges[:-1], edges[1:]):
            if b > a:
                v, e = quad_piece(f, a, b, piece_tol)
                total += v
                err += e

        def folded(t, root=root, residue=residue):
            return (f(root + t) - residue / t) + (f(root - t) + residue / t)

        v, e = quad_piece(folded, 0.0, width, piece_tol, limit=400)
        total += v
        err += e
        lo = root + width
    rest = half_period_sum(f, r, spec, lower=lo, tail=tail)
    return total + rest.value, err + rest.error_estimate, rest.half_periods


def correction_factor(sym: PowerLawSymbol, r: float, spec: QuadratureSpec = DEFAULT_SPEC) -> CorrectionFactor:
    """C(r) = (2/pi) int_0^inf lambda sin(lambda r) / P(lambda) dlambda.

    A positive root of P is a pole of the integrand.  Under
    ``pole_policy='error'`` any root, or P <= 0 anywhere on (0, inf), raises
    :class:`PoleError`; under ``'principal_value'`` simple roots are passed in
    the principal-value sense and the result is flagged.
    """
    if not (r > 0 and math.isfinite(r)):
        raise DomainError(f"r must be finite and positive, got {r}")
    sym.check_solvable()

    def f(lam):
        return lam * math.sin(lam * r) / sym(lam)

    def tail(cut):
        return ratio_tail(sym, r, cut)

    roots = sym.positive_roots()
    if spec.pole_policy == "error":
        if roots:
            raise PoleError(f"symbol vanishes at lambda = {roots[0]:.17g}")
        if sym.nonpositive_somewhere():
            raise PoleError("symbol is non-positive on part of (0, inf)")
        res = half_period_sum(f, r, spec, tail=tail)
        value, err, used = res
    elif roots:
        value, err, used = _principal_value_pieces(sym, r, spec, roots, f, tail)
    else:
        value, err, used = half_period_sum(f, r, spec, tail=tail)
    scale = 2.0 / math.pi
    return CorrectionFactor(scale * value, scale * err, used, bool(roots))


def green_function_radial(sym: PowerLawSymbol, r: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """G(r) = r**-1/2 (2 pi)**-3/2 int_0^inf lambda**(3/2) J_1/2(lambda r) / P(lambda) dlambda."""
    return green_function_radial_detailed(sym, r, spec)[0]


def green_function_radial_detailed(sym, r, spec=DEFAULT_SPEC):
    """Green function with its error estimate and half-period count."""
    if not (r > 0 and math.isfinite(r)):
        raise DomainError(f"r must be finite and positive, got {r}")
    sym.check_solvable()
    roots = sym.positive_roots()
    if roots or sym.nonpositive_somewhere():
        if spec.pole_policy == "error":
            raise PoleError("symbol is non-positive on part of (0, inf)")
        # principal value goes through the sine form; the Bessel form is the same integrand
        cf = correction_factor(sym, r, spec)
        return cf.value / (4.0 * math.pi * r), cf.error_estimate / (4.0 * math.pi * r), cf.half_periods_used

    def f(lam):
        return lam**1.5 * bessel_j_half(lam * r) / sym(lam) if lam > 0 else 0.0

    amp = math.sqrt(2.0 / (math.pi * r))
    def tail(cut):
        value, err = ratio_tail(sym, r, cut)
        return amp * value, amp * err

    res = half_period_sum(f, r, spec, tail=tail)
    scale = r**-0.5 / (2.0 * math.pi) ** 1.5
    return scale * res.value, scale * res.error_estimate, res.half_periods


@dataclass(frozen=True)
class DispersionCase:
    """Which screening law to use, with its order, frequency and medium."""

    tag: str
    plasma: PlasmaParameters
    alpha: float = 1.0
    omega: float = 0.0

    def __post_init__(self):
        if self.tag not in CASES:
            raise CaseInvariantError(f"unknown case {self.tag!r}; expected one of {CASES}")
        a = float(self.alpha)
        if not math.isfinite(a) or not math.isfinite(self.omega):
            raise CaseInvariantError("alpha and omega must be finite")
        if self.tag == "small_x_three_term" and not 0.0 < a < 1.0 / 3.0:
            raise CaseInvariantError(f"small_x_three_term requires 0 < alpha < 1/3, got {a}")
        if self.tag == "small_x_two_term" and not 0.0 < a <= 1.0:
            raise CaseInvariantError(f"small_x_two_term requires 0 < alpha <= 1, got {a}")
        if self.tag.startswith("large_x"):
            if not self.omega > 0:
                raise CaseInvariantError(f"{self.tag} requires omega > 0, got {self.omega}")
            if not 0.0 < a <= 1.0:
                raise CaseInvariantError(f"{self.tag} requires 0 < alpha <= 1, got {a}")
        if self.tag == "small_x_three_term" and self.omega < 0:
            raise CaseInvariantError(f"omega must be non-negative, got {self.omega}")


def build_symbol(case: DispersionCase) -> PowerLawSymbol:
    p = case.plasma
    r_d, w_l = p.debye_radius, p.langmuir_frequency
    a, w = case.alpha, case.omega
    if case.tag == "coulomb":
        return PowerLawSymbol(0.0, ((1.0, 2.0),))
    if case.tag == "debye":
        return PowerLawSymbol(1.0 / r_d**2, ((1.0, 2.0),))
    if case.tag == "small_x_two_term":
        return PowerLawSymbol(0.0, ((1.0 / r_d**2, 1.0 - a), (1.0, 2.0)))
    if case.tag == "small_x_three_term":
        a1 = 1.0 / r_d**2
        a2 = w**2 / (r_d**4 * w_l**2)
        return PowerLawSymbol(0.0, ((-a2, 1.0 - 3.0 * a), (a1, 1.0 - a), (1.0, 2.0)))
    cutoff = w_l**2 / w**2
    terms = [(1.0, 2.0), (-cutoff, a + 1.0)]
    if case.tag == "large_x_three_term":
        terms.append((-3.0 * r_d**2 * w_l**4 / w**4, 3.0 * a + 1.0))
    return PowerLawSymbol(0.0, tuple(terms))


def coulomb_potential(Q: float, r: float, p: PlasmaParameters) -> float:
    return Q / (4.0 * math.pi * p.vacuum_permittivity * r)


def point_charge_potential(
    case: DispersionCase, Q: float, r: float, spec: QuadratureSpec = DEFAULT_SPEC
) -> PotentialResult:
    """Phi(r) = Q / (4 pi eps0 r) * C(r); Coulomb and Debye use their closed forms."""
    if not (r > 0 and math.isfinite(r)):
        raise DomainError(f"r must be finite and positive, got {r}")
    base = coulomb_potential(Q, r, case.plasma)
    if case.tag == "coulomb":
        return PotentialResult(base, 1.0, 0.0, 0)
    if case.tag == "debye":
        c = math.exp(-r / case.plasma.debye_radius)
        return PotentialResult(base * c, c, abs(base * c) * math.ulp(1.0), 0)
    cf = correction_factor(build_symbol(case), r, spec)
    return PotentialResult(base * cf.value, cf.value, abs(base) * cf.error_estimate, cf.half_periods_used, cf.pole_encountered)


def potential_profile(
    case: DispersionCase, Q: float, r_grid: Sequence[float], spec: QuadratureSpec = DEFAULT_SPEC
) -> list[PotentialResult]:
    """Evaluate the potential on a sorted positive grid; failures are recorded per point."""
    grid = [float(v) for v in r_grid]
    if any(not (v > 0 and math.isfinite(v)) for v in grid):
        raise DomainError("radial grid must be finite and strictly positive")
    if any(b <= a for a, b in zip(grid[:-1], grid[1:])):
        raise DomainError("radial grid must be strictly increasing")
    out = []
    for r in grid:
        try:
            out.append(point_charge_potential(case, Q, r, spec))
        except FracPlasmaError as exc:
            out.append(
                PotentialResult(math.nan, math.nan, math.inf, 0, isinstance(exc, PoleError), f"{type(exc).__name__}: {exc}")
            )
    return out
