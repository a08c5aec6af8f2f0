"""Longitudinal permittivity of a Maxwellian medium with power-law spatial dispersion.

Inputs are SI.  The exact path evaluates

    eps(k, w) = eps0 + q**2 N / (kB T k**(1 + alpha)) * W(x) / sqrt(pi),
    x = sqrt(m / (2 kB T)) * w / k**alpha,

with W the Landau-prescribed response integral from :mod:`specialfn`.  The
two expansions are written through the Debye radius and Langmuir frequency.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import AccuracyWarning, DomainError, ResonanceError
from .specialfn import SQRT_PI, plasma_response_integral

VACUUM_PERMITTIVITY = 8.8541878128e-12
BOLTZMANN = 1.38065e-23

# small-x series is accepted up to x = 1 but only trusted below this
SMALL_X_WARN = 0.3
# |k**alpha v - w| below this fraction of |w| + |k**alpha v| counts as resonant
RESONANCE_RTOL = 1e-12

METHODS = ("exact", "small_x", "large_x")


def _positive(name, value):
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be finite and positive, got {value}")
    return value


@dataclass(frozen=True)
class PlasmaParameters:
    """Medium constants in SI units."""

    number_density: float
    charge: float
    mass: float
    temperature: float
    vacuum_permittivity: float = VACUUM_PERMITTIVITY
    boltzmann: float = BOLTZMANN

    def __post_init__(self):
        for name in ("number_density", "charge", "mass", "temperature", "vacuum_permittivity", "boltzmann"):
            object.__setattr__(self, name, _positive(name, getattr(self, name)))
        for name in ("debye_radius", "langmuir_frequency", "thermal_velocity"):
            _positive(name, getattr(self, name))

    @property
    def thermal_energy(self) -> float:
        return self.boltzmann * self.temperature

    @property
    def debye_radius(self) -> float:
        return math.sqrt(self.vacuum_permittivity * self.thermal_energy / (self.number_density * self.charge**2))

    @property
    def langmuir_frequency(self) -> float:
        return math.sqrt(self.number_density * self.charge**2 / (self.mass * self.vacuum_permittivity))

    @property
    def thermal_velocity(self) -> float:
        return math.sqrt(self.thermal_energy / self.mass)


@dataclass(frozen=True)
class SpectralPoint:
    """Wavenumber magnitude, angular frequency and fractional order."""

    k_mag: float
    omega: float
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "k_mag", _positive("k_mag", self.k_mag))
        if not math.isfinite(self.omega):
            raise DomainError(f"omega must be finite, got {self.omega}")
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha}")


@dataclass(frozen=True)
class ComplexPermittivity:
    value: complex
    method: str
    x_used: float

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        if not (math.isfinite(self.value.real) and math.isfinite(self.value.imag)):
            raise DomainError(f"non-finite permittivity {self.value}")


@dataclass(frozen=True)
class PerturbationResponse:
    delta_rho: complex
    field_amplitude: float
    momentum: float
    point: SpectralPoint


def debye_radius(p: PlasmaParameters) -> float:
    return p.debye_radius


def langmuir_frequency(p: PlasmaParameters) -> float:
    return p.langmuir_frequency


def dimensionless_x(sp: SpectralPoint, p: PlasmaParameters) -> float:
    """Phase velocity over sqrt(2) v_T with the fractional wavenumber k**alpha."""
    return math.sqrt(p.mass / (2.0 * p.thermal_energy)) * sp.omega / sp.k_mag**sp.alpha


def maxwellian(p_x: float, p: PlasmaParameters) -> float:
    """One-dimensional Maxwell momentum distribution normalised to the density."""
    two_mt = 2.0 * p.mass * p.thermal_energy
    return p.number_density / math.sqrt(math.pi * two_mt) * math.exp(-p_x * p_x / two_mt)


def maxwellian_slope(p_x: float, p: PlasmaParameters) -> float:
    two_mt = 2.0 * p.mass * p.thermal_energy
    return -2.0 * p_x * p.number_density / (SQRT_PI * two_mt**1.5) * math.exp(-p_x * p_x / two_mt)


def perturbation_response(
    E_amp: float, p_x: float, sp: SpectralPoint, p: PlasmaParameters
) -> PerturbationResponse:
    """Linear distribution perturbation for a longitudinal plane wave.

    delta_rho = -q E f0'(p_x) / (i (k**alpha v_x - w)); resonant particles
    raise :class:`ResonanceError` since their contribution only exists under
    the +i0 rule applied to the full velocity integral.
    """
    drift = sp.k_mag**sp.alpha * p_x / p.mass
    denom = drift - sp.omega
    if abs(denom) <= RESONANCE_RTOL * (abs(drift) + abs(sp.omega)) or denom == 0.0:
        raise ResonanceError(f"k**alpha v_x = omega at p_x={p_x}: resonant particle")
    rho = -p.charge * E_amp * maxwellian_slope(p_x, p) / (1j * denom)
    return PerturbationResponse(complex(rho), float(E_amp), float(p_x), sp)


def _screening_prefactor(sp: SpectralPoint, p: PlasmaParameters) -> float:
    """q**2 N / (kB T k**(1+alpha)) = eps0 / (r_D**2 k**(1+alpha))."""
    return p.charge**2 * p.number_density / (p.thermal_energy * sp.k_mag ** (1.0 + sp.alpha))


def _landau_imag(prefactor: float, x: float) -> float:
    return prefactor * SQRT_PI * x * math.exp(-x * x)


def permittivity_exact(sp: SpectralPoint, p: PlasmaParameters) -> ComplexPermittivity:
    pref = _screening_prefactor(sp, p)
    if sp.omega == 0.0:
        return ComplexPermittivity(complex(p.vacuum_permittivity + pref, 0.0), "exact", 0.0)
    x = dimensionless_x(sp, p)
    value = p.vacuum_permittivity + pref * plasma_response_integral(x) / SQRT_PI
    return ComplexPermittivity(value, "exact", x)


def permittivity_small_x(sp: SpectralPoint, p: PlasmaParameters, n_terms: int = 3) -> ComplexPermittivity:
    """Truncated low-frequency series in powers of w**2.

    The third correction carries 1/3: the principal value of the response
    integral expands as sqrt(pi) (1 - 2x**2 + 4x**4/3 - ...).
    """
    if n_terms not in (1, 2, 3):
        raise DomainError(f"small-x series has 1..3 terms, got {n_terms}")
    x = dimensionless_x(sp, p)
    if abs(x) >= 1.0:
        raise DomainError(f"small-x series needs |x| < 1, got x={x}")
    if abs(x) > SMALL_X_WARN:
        warnings.warn(f"small-x series at x={x:.3g} is inaccurate", AccuracyWarning, stacklevel=2)
    eps0, r_d, w_l = p.vacuum_permittivity, p.debye_radius, p.langmuir_frequency
    k, a, w = sp.k_mag, sp.alpha, sp.omega
    pref = _screening_prefactor(sp, p)
    terms = [
        # eps0 / (r_D**2 k**(1+alpha)), written as the exact path writes it
        pref,
        -eps0 * w**2 / (r_d**4 * w_l**2 * k ** (3 * a + 1)),
        eps0 * w**4 / (3.0 * r_d**6 * w_l**4 * k ** (5 * a + 1)),
    ]
    real = eps0 + math.fsum(terms[:n_terms])
    return ComplexPermittivity(complex(real, _landau_imag(pref, x)), "small_x", x)


def permittivity_large_x(sp: SpectralPoint, p: PlasmaParameters, n_terms: int = 2) -> ComplexPermittivity:
    """Truncated high-frequency series in powers of 1/w**2.

    The imaginary part keeps the exponentially small Landau term.
    """
    if n_terms not in (1, 2):
        raise DomainError(f"large-x series has 1..2 terms, got {n_terms}")
    x = dimensionless_x(sp, p)
    if not abs(x) > 1.0:
        raise DomainError(f"large-x series needs |x| > 1, got x={x}")
    eps0, r_d, w_l = p.vacuum_permittivity, p.debye_radius, p.langmuir_frequency
    k, a, w = sp.k_mag, sp.alpha, sp.omega
    terms = [
        -eps0 * w_l**2 * k ** (a - 1) / w**2,
        -3.0 * eps0 * r_d**2 * w_l**4 * k ** (3 * a - 1) / w**4,
    ]
    real = eps0 + math.fsum(terms[:n_terms])
    return ComplexPermittivity(complex(real, _landau_imag(_screening_prefactor(sp, p), x)), "large_x", x)


def permittivity(sp: SpectralPoint, p: PlasmaParameters, method: str = "exact", n_terms: int | None = None):
    """Dispatch by name; ``auto`` is the exact path, expansions are never substituted silently."""
    if method in ("exact", "auto"):
        return permittivity_exact(sp, p)
    if method == "small_x":
        return permittivity_small_x(sp, p, 3 if n_terms is None else n_terms)
    if method == "large_x":
        return permittivity_large_x(sp, p, 2 if n_terms is None else n_terms)
    raise DomainError(f"unknown permittivity method {method!r}")


__all__ = [
    "BOLTZMANN",
    "VACUUM_PERMITTIVITY",
    "ComplexPermittivity",
    "PerturbationResponse",
    "PlasmaParameters",
    "SpectralPoint",
    "debye_radius",
    "dimensionless_x",
    "langmuir_frequency",
    "maxwellian",
    "maxwellian_slope",
    "perturbation_response",
    "permittivity",
    "permittivity_exact",
    "permittivity_large_x",
    "permittivity_small_x",
]
