"""Permittivity and screened potentials of plasma-like media with power-law spatial dispersion."""

from .errors import (
    AccuracyWarning,
    CaseInvariantError,
    ConvergenceError,
    DomainError,
    FracPlasmaError,
    MaxPeriodsError,
    PoleError,
    QuadratureError,
    ResonanceError,
    SolvabilityError,
    TailDivergenceError,
)
from .fraccalc import (
    SampledFunction,
    caputo_numeric,
    caputo_power_rule,
    riemann_liouville_integral,
    riesz_laplacian_1d_hypersingular,
    riesz_laplacian_1d_spectral,
    riesz_symbol,
)
from .plasma import (
    ComplexPermittivity,
    PerturbationResponse,
    PlasmaParameters,
    SpectralPoint,
    debye_radius,
    dimensionless_x,
    langmuir_frequency,
    permittivity,
    permittivity_exact,
    permittivity_large_x,
    permittivity_small_x,
    perturbation_response,
)
from .potential import (
    DispersionCase,
    PotentialResult,
    PowerLawSymbol,
    build_symbol,
    correction_factor,
    green_function_radial,
    point_charge_potential,
    potential_profile,
)
from .quadrature import QuadratureSpec, oscillatory_sine_integral
from .specialfn import (
    SeriesControl,
    bessel_j_half,
    dawson,
    gamma,
    mittag_leffler,
    plasma_response_integral,
)

__version__ = "0.1.0"
