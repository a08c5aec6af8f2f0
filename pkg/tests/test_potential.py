import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from fracplasma import potential
from fracplasma.errors import CaseInvariantError, DomainError, PoleError, SolvabilityError
from fracplasma.plasma import PlasmaParameters
from fracplasma.potential import DispersionCase, PowerLawSymbol, build_symbol, correction_factor
from fracplasma.quadrature import QuadratureSpec
from fracplasma.validation import FROZEN_C_HALF_ORDER, REFERENCE_PLASMA, UNIT_PLASMA

PV = QuadratureSpec(pole_policy="principal_value")
TIGHT = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-13)


def sym(*terms, a0=0.0):
    return PowerLawSymbol(a0, tuple(terms))


# symbols


def test_symbol_merges_and_sorts():
    s = sym((1.0, 2.0), (0.5, 0.5), (0.25, 2.0), (3.0, 0.0))
    assert s.a0 == 3.0
    assert s.terms == ((0.5, 0.5), (1.25, 2.0))
    assert s(2.0) == pytest.approx(3.0 + 0.5 * 2**0.5 + 1.25 * 4.0)


def test_symbol_drops_cancelled_terms():
    s = sym((1.0, 2.0), (0.3, 1.0), (-0.3, 1.0))
    assert s.terms == ((1.0, 2.0),)


def test_symbol_keeps_terms_of_any_scale():
    # SI coefficients span many decades; none of them is a cancellation
    s = sym((1.0, 2.0), (2e10, 0.8), (-4e16, 0.4))
    assert len(s.terms) == 3


def test_symbol_touching_root():
    assert sym((1.0, 2.0), (-2.0, 1.0), a0=1.0).positive_roots() == pytest.approx([1.0], rel=1e-5)


@pytest.mark.parametrize("terms", [(), ((1.0, -1.0),), ((math.nan, 2.0),), ((2.0, 0.0),)])
def test_symbol_rejects(terms):
    with pytest.raises(DomainError):
        PowerLawSymbol(0.0, terms)


def test_symbol_derivatives():
    s = sym((2.0, 2.0), (1.0, 0.5), a0=1.0)
    d = s.derivatives(1.3, 2)
    assert d[0] == pytest.approx(s(1.3))
    assert d[1] == pytest.approx(4.0 * 1.3 + 0.5 * 1.3**-0.5)
    assert d[2] == pytest.approx(4.0 - 0.25 * 1.3**-1.5)


def test_symbol_roots():
    assert sym((1.0, 2.0), a0=-4.0).positive_roots() == pytest.approx([2.0], rel=1e-14)
    assert sym((1.0, 2.0), a0=1.0).positive_roots() == []
    s = sym((1.0, 2.0), (-0.25, 1.5))
    assert s.positive_roots() == pytest.approx([0.0625], rel=1e-13)


def test_symbol_nonpositive_detection():
    # negative near zero but never crossing would still be flagged
    assert sym((1.0, 2.0), (-1.0, 0.1), (5.0, 0.5)).nonpositive_somewhere()
    assert not sym((1.0, 2.0), (1.0, 0.5)).nonpositive_somewhere()


def test_solvability_window():
    with pytest.raises(SolvabilityError):
        correction_factor(sym((1.0, 1.0)), 1.0)
    with pytest.raises(SolvabilityError):
        correction_factor(sym((1.0, 3.5)), 1.0)
    # a constant term lifts the lower restriction
    assert correction_factor(sym((1.0, 3.5), a0=1.0), 1.0).value == pytest.approx(
        correction_factor(sym((1.0, 3.5), a0=1.0), 1.0, TIGHT).value, abs=1e-8
    )


# cases


def test_case_constraints():
    for a in (0.0, 1 / 3, 0.4, 0.9, -0.1):
        with pytest.raises(CaseInvariantError):
            DispersionCase("small_x_three_term", UNIT_PLASMA, alpha=a, omega=0.1)
    DispersionCase("small_x_three_term", UNIT_PLASMA, alpha=0.2, omega=0.1)
    with pytest.raises(CaseInvariantError):
        DispersionCase("small_x_two_term", UNIT_PLASMA, alpha=0.0)
    with pytest.raises(CaseInvariantError):
        DispersionCase("large_x_two_term", UNIT_PLASMA, alpha=0.5, omega=0.0)
    with pytest.raises(CaseInvariantError):
        DispersionCase("yukawa", UNIT_PLASMA)


def test_case_error_is_a_domain_error():
    assert issubclass(CaseInvariantError, DomainError)


def test_build_debye():
    s = build_symbol(DispersionCase("debye", UNIT_PLASMA))
    assert s == sym((1.0, 2.0), a0=1.0)


def test_build_coulomb():
    assert build_symbol(DispersionCase("coulomb", REFERENCE_PLASMA)) == sym((1.0, 2.0))


def test_two_term_at_alpha_one_is_debye():
    p = REFERENCE_PLASMA
    two = build_symbol(DispersionCase("small_x_two_term", p, alpha=1.0))
    assert two == build_symbol(DispersionCase("debye", p))


def test_large_x_alpha_one_collapses():
    s = build_symbol(DispersionCase("large_x_two_term", UNIT_PLASMA, alpha=1.0, omega=2.0))
    assert s.a0 == 0.0
    assert s.terms == ((0.75, 2.0),)


def test_three_term_coefficients():
    p = REFERENCE_PLASMA
    w = 0.01 * p.langmuir_frequency
    s = build_symbol(DispersionCase("small_x_three_term", p, alpha=0.2, omega=w))
    a2 = w**2 / (p.debye_radius**4 * p.langmuir_frequency**2)
    assert s.terms[0] == pytest.approx((-a2, 0.4), rel=1e-15)
    assert s.terms[1] == pytest.approx((1 / p.debye_radius**2, 0.8), rel=1e-15)
    assert s.terms[2] == (1.0, 2.0)


def test_large_x_three_term_coefficients():
    s = build_symbol(DispersionCase("large_x_three_term", UNIT_PLASMA, alpha=0.5, omega=2.0))
    assert s.terms == ((-0.25, 1.5), (1.0, 2.0), (-3 / 16, 2.5))


# correction factor


def test_debye_factor_grid():
    s = sym((1.0, 2.0), a0=1.0)
    for r in np.geomspace(0.1, 10, 50):
        assert abs(correction_factor(s, r).value - math.exp(-r)) <= 1e-6


def test_debye_factor_physical_units():
    p = REFERENCE_PLASMA
    s = build_symbol(DispersionCase("debye", p))
    for ratio in (0.1, 1.0, 10.0):
        r = ratio * p.debye_radius
        assert abs(correction_factor(s, r).value - math.exp(-ratio)) <= 1e-6


def test_coulomb_factor_is_one():
    for r in (0.01, 1.0, 30.0):
        assert correction_factor(sym((1.0, 2.0)), r).value == pytest.approx(1.0, abs=1e-9)


def test_frozen_half_order_reference():
    got = correction_factor(sym((1.0, 2.0), (1.0, 0.5)), 1.0, TIGHT).value
    assert got == pytest.approx(FROZEN_C_HALF_ORDER, abs=1e-12)


def test_weak_screening_tends_to_coulomb():
    s = sym((1.0, 2.0), (1e-8, 0.5))
    for r in np.geomspace(0.1, 10, 50):
        assert abs(correction_factor(s, r).value - 1.0) <= 1e-4


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 5.0), st.floats(0.05, 10.0))
def test_yukawa_factor_property(a, r):
    assert correction_factor(sym((1.0, 2.0), a0=a * a), r).value == pytest.approx(math.exp(-a * r), abs=1e-8)


def test_error_estimate_bounds_known_error():
    s = sym((1.0, 2.0), a0=1.0)
    for r in (0.2, 1.0, 5.0):
        cf = correction_factor(s, r)
        assert cf.error_estimate >= 0
        assert abs(cf.value - math.exp(-r)) <= max(cf.error_estimate, 1e-14)


def test_halving_tolerance_consistency():
    s = sym((1.0, 2.0), (1.0, 0.5))
    for r in (0.3, 1.0, 4.0):
        tol = 1e-6
        prev = correction_factor(s, r, QuadratureSpec(abs_tol=tol, rel_tol=1e-13))
        for _ in range(8):
            tol /= 2
            cur = correction_factor(s, r, QuadratureSpec(abs_tol=tol, rel_tol=1e-13))
            assert abs(cur.value - prev.value) <= prev.error_estimate
            prev = cur


@pytest.mark.parametrize("r", [0.0, -2.0, math.nan])
def test_correction_factor_bad_r(r):
    with pytest.raises(DomainError):
        correction_factor(sym((1.0, 2.0)), r)


# Green function


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_green_yukawa(a):
    s = sym((1.0, 2.0), a0=a * a)
    for r in np.geomspace(0.1 / a, 10 / a, 12):
        want = math.exp(-a * r) / (4 * math.pi * r)
        assert potential.green_function_radial(s, r) == pytest.approx(want, rel=1e-6)


def test_green_coulomb():
    for r in (0.1, 1.0, 7.0):
        assert potential.green_function_radial(sym((1.0, 2.0)), r) == pytest.approx(1 / (4 * math.pi * r), rel=1e-9)


@pytest.mark.parametrize(
    "s",
    [
        sym((1.0, 2.0), (1.0, 0.5)),
        sym((1.0, 2.0), (2.0, 0.1), (0.3, 1.2)),
        sym((1.0, 2.5), a0=0.5),
        sym((1.0, 1.8), (1.0, 0.5)),
    ],
)
def test_green_sine_form_equivalence(s):
    for r in (0.2, 1.0, 3.0):
        g = potential.green_function_radial(s, r)
        c = correction_factor(s, r).value
        assert 4 * math.pi * r * g == pytest.approx(c, rel=1e-10)


def test_green_pole_policy():
    s = sym((1.0, 2.0), (-0.25, 1.5))
    with pytest.raises(PoleError):
        potential.green_function_radial(s, 1.0)
    g = potential.green_function_radial(s, 1.0, PV)
    assert 4 * math.pi * g == pytest.approx(correction_factor(s, 1.0, PV).value, rel=1e-12)


# poles


def test_pole_default_policy():
    case = DispersionCase("large_x_two_term", UNIT_PLASMA, alpha=0.5, omega=2.0)
    with pytest.raises(PoleError):
        correction_factor(build_symbol(case), 1.0)
    with pytest.raises(PoleError):
        potential.point_charge_potential(case, 1.0, 1.0)


def test_pole_principal_value_flagged():
    case = DispersionCase("large_x_two_term", UNIT_PLASMA, alpha=0.5, omega=2.0)
    res = potential.point_charge_potential(case, 1.0, 1.0, PV)
    assert res.pole_encountered
    assert math.isfinite(res.value)


@pytest.mark.parametrize("c", [0.5, 1.0, 3.0])
def test_principal_value_cosine(c):
    # PV (2/pi) int lambda sin(lambda r) / (lambda^2 - c^2) = cos(c r)
    s = sym((1.0, 2.0), a0=-c * c)
    for r in (0.3, 1.0, 2.5):
        cf = correction_factor(s, r, PV)
        assert cf.pole_encountered
        assert cf.value == pytest.approx(math.cos(c * r), abs=1e-8)


@pytest.mark.parametrize("r", [0.5, 2.0, 9.0])
def test_principal_value_against_cauchy_weight(r):
    # independent route: QAWC on [0, 2 root] and QAWF beyond
    s = sym((1.0, 2.0), (-0.25, 1.5))
    root = s.positive_roots()[0]

    def reduced(lam):
        # lambda sin(lambda r) / P(lambda) * (lambda - root), regular at the root
        if lam == 0.0:
            return 0.0
        if lam == root:
            return root * math.sin(root * r) / s.derivatives(root, 1)[1]
        return lam * math.sin(lam * r) / s(lam) * (lam - root)

    near = integrate.quad(reduced, 0.0, 2 * root, weight="cauchy", wvar=root, epsabs=1e-13, limit=400)[0]
    far = integrate.quad(lambda lam: lam / s(lam), 2 * root, np.inf, weight="sin", wvar=r, epsabs=1e-10, limlst=200)[0]
    want = 2 / math.pi * (near + far)
    assert correction_factor(s, r, PV).value == pytest.approx(want, abs=1e-7)


def test_multiple_root_has_no_principal_value():
    # (lambda - 1)^2 lambda^0 structure: lambda^2 - 2 lambda + 1 touches zero
    s = sym((1.0, 2.0), (-2.0, 1.0), a0=1.0)
    with pytest.raises(PoleError):
        correction_factor(s, 1.0, PV)


def test_three_term_negative_near_zero_is_pole():
    case = DispersionCase("small_x_three_term", UNIT_PLASMA, alpha=0.2, omega=0.5)
    with pytest.raises(PoleError):
        correction_factor(build_symbol(case), 1.0)


def test_three_term_degenerates_to_two_term():
    for a in (0.1, 0.25):
        two = build_symbol(DispersionCase("small_x_two_term", UNIT_PLASMA, alpha=a))
        three = build_symbol(DispersionCase("small_x_three_term", UNIT_PLASMA, alpha=a, omega=1e-6))
        for r in (0.5, 2.0):
            c2 = correction_factor(two, r, TIGHT).value
            c3 = correction_factor(three, r, QuadratureSpec(1e-13, 1e-13, pole_policy="principal_value")).value
            assert c3 == pytest.approx(c2, rel=1e-8)


# point charge


def test_coulomb_normalisation():
    p = REFERENCE_PLASMA
    res = potential.point_charge_potential(DispersionCase("coulomb", p), 4 * math.pi * p.vacuum_permittivity, 1.0)
    assert res.value == pytest.approx(1.0, rel=1e-15)
    assert res.correction_factor == 1.0


def test_debye_potential_closed_form():
    p = REFERENCE_PLASMA
    Q = 1.602176634e-19
    for ratio in (0.2, 1.0, 4.0):
        r = ratio * p.debye_radius
        res = potential.point_charge_potential(DispersionCase("debye", p), Q, r)
        assert res.value == pytest.approx(potential.coulomb_potential(Q, r, p) * math.exp(-ratio), rel=1e-15)


def test_result_factor_is_ratio_to_coulomb():
    p = REFERENCE_PLASMA
    case = DispersionCase("small_x_two_term", p, alpha=0.6)
    r = 1.5 * p.debye_radius
    res = potential.point_charge_potential(case, 2.0e-19, r)
    assert res.correction_factor == pytest.approx(res.value / potential.coulomb_potential(2.0e-19, r, p), rel=1e-14)
    assert res.error_estimate >= 0


def test_alpha_near_one_matches_debye():
    # lambda**(1 - alpha) is dimensional, so continuity in alpha is a statement in r_D units
    p = UNIT_PLASMA
    case = DispersionCase("small_x_two_term", p, alpha=0.999)
    for ratio in np.linspace(0.5, 5, 10):
        r = ratio * p.debye_radius
        res = potential.point_charge_potential(case, 1.0, r)
        debye = potential.point_charge_potential(DispersionCase("debye", p), 1.0, r)
        assert abs(res.value - debye.value) <= 1e-2 * abs(debye.value)
        assert abs(res.correction_factor - math.exp(-ratio)) <= 1e-2


def test_point_charge_bad_r():
    with pytest.raises(DomainError):
        potential.point_charge_potential(DispersionCase("coulomb", UNIT_PLASMA), 1.0, 0.0)


# profiles


def test_profile_empty():
    assert potential.potential_profile(DispersionCase("coulomb", UNIT_PLASMA), 1.0, []) == []


def test_profile_coulomb_inverse_r():
    grid = np.geomspace(0.1, 10, 20)
    res = potential.potential_profile(DispersionCase("coulomb", REFERENCE_PLASMA), 1.0, grid)
    products = [p.value * r for p, r in zip(res, grid)]
    assert np.allclose(products, products[0], rtol=1e-14)


def test_profile_debye_log_slope():
    p = REFERENCE_PLASMA
    grid = np.linspace(0.5, 5, 25) * p.debye_radius
    res = potential.potential_profile(DispersionCase("debye", p), 1.0, grid)
    slope = np.polyfit(grid, np.log([v.value * r for v, r in zip(res, grid)]), 1)[0]
    assert slope == pytest.approx(-1 / p.debye_radius, rel=1e-10)


def test_profile_quadrature_debye_slope():
    # the same check through the quadrature path
    grid = np.linspace(0.5, 5, 10)
    s = sym((1.0, 2.0), a0=1.0)
    logs = [math.log(correction_factor(s, r).value) for r in grid]
    assert np.polyfit(grid, logs, 1)[0] == pytest.approx(-1.0, rel=1e-6)


def test_profile_reproducible():
    case = DispersionCase("small_x_two_term", UNIT_PLASMA, alpha=0.4)
    grid = [0.3, 1.0, 2.0]
    assert potential.potential_profile(case, 1.0, grid) == potential.potential_profile(case, 1.0, grid)


def test_profile_collects_errors():
    case = DispersionCase("large_x_two_term", UNIT_PLASMA, alpha=0.5, omega=2.0)
    res = potential.potential_profile(case, 1.0, [0.5, 1.0])
    assert all(math.isnan(r.value) and r.pole_encountered and r.error.startswith("PoleError") for r in res)


@pytest.mark.parametrize("grid", [[1.0, 0.5], [0.0, 1.0], [1.0, 1.0], [-1.0, 2.0]])
def test_profile_grid_validation(grid):
    with pytest.raises(DomainError):
        potential.potential_profile(DispersionCase("coulomb", UNIT_PLASMA), 1.0, grid)


def test_plasma_independent_scaling():
    # C depends on r / r_D only when the symbol is the two-term one with alpha = 1
    p1 = PlasmaParameters(1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    p2 = PlasmaParameters(4.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    c1 = correction_factor(build_symbol(DispersionCase("small_x_two_term", p1, alpha=1.0)), 1.0).value
    c2 = correction_factor(build_symbol(DispersionCase("small_x_two_term", p2, alpha=1.0)), 0.5).value
    assert c1 == pytest.approx(c2, abs=1e-9)
