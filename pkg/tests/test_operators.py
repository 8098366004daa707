"""Averaging operator, Bloch seminorms, and the two-sided norm bounds."""

import math
from fractions import Fraction

import numpy as np
import pytest

from bergman_orlicz.errors import SymbolInvariantError
from bergman_orlicz.growth import power_growth
from bergman_orlicz.holo import KernelPower, Series
from bergman_orlicz.holo import test_function as kernel_test_function
from bergman_orlicz.measure import build_rule, make_measure
from bergman_orlicz.norms import luxemburg_norm, rule_for_function
from bergman_orlicz.operators import (
    CesaroSymbol,
    bergman_project,
    bloch_seminorm,
    cesaro_apply_exact,
    cesaro_apply_numeric,
    cesaro_norm_lower_bound,
    cesaro_upper_bound_check,
    little_bloch_profile,
    radial_derivative_identity_check,
)

RNG = np.random.default_rng(404)


def random_series(n, degree, terms=5, constant_free=False):
    out = {}
    lo = 1 if constant_free else 0
    for _ in range(terms):
        m = tuple(int(v) for v in RNG.integers(lo, degree + 1, size=n))
        if sum(m) > degree or (constant_free and sum(m) == 0):
            continue
        out[m] = complex(*RNG.normal(size=2))
    out.setdefault((1,) + (0,) * (n - 1), 1.0)
    return Series(n, out)


def ball_points(n, count, radius=0.6):
    w = RNG.normal(size=(count, n, 2))
    pts = w[..., 0] + 1j * w[..., 1]
    norms = np.linalg.norm(pts, axis=1, keepdims=True)
    return pts * (radius * RNG.uniform(0.1, 1.0, size=(count, 1)) / np.maximum(norms, 1e-12))


def test_symbol_requires_vanishing_at_origin():
    with pytest.raises(SymbolInvariantError):
        CesaroSymbol(Series(1, {(0,): 1.0, (1,): 1.0}))


def test_averaging_of_one_recovers_the_symbol():
    # T_g 1 = integral_0^1 Rg(tz) dt/t = g(z) - g(0) = g for admissible g.
    g = Series(1, {(1,): 2.0, (3,): -1j, (5,): 0.25})
    out = cesaro_apply_exact(CesaroSymbol(g), Series(1, {(0,): 1.0}))
    assert set(out.terms) == set(g.terms)
    for m, c in g.terms.items():
        assert out.terms[m] == pytest.approx(c, abs=1e-15)


def test_known_coefficients():
    sym = CesaroSymbol(Series(1, {(2,): 1.0}))
    out = cesaro_apply_exact(sym, Series(1, {(1,): 1.0}))
    assert set(out.terms) == {(3,)}
    assert out.terms[(3,)] == pytest.approx(2.0 / 3.0, abs=1e-16)

    sym2 = CesaroSymbol(Series(2, {(1, 0): 1.0}))
    out2 = cesaro_apply_exact(sym2, Series(2, {(0, 1): 1.0}))
    assert set(out2.terms) == {(1, 1)}
    assert out2.terms[(1, 1)] == pytest.approx(0.5, abs=1e-16)


@pytest.mark.parametrize("n", [1, 2])
def test_exact_matches_ray_quadrature(n):
    for _ in range(25):
        g = random_series(n, 6, constant_free=True)
        f = random_series(n, 6)
        sym = CesaroSymbol(g)
        exact = cesaro_apply_exact(sym, f, truncation_degree=14)
        pts = ball_points(n, 12)
        gap = np.abs(exact.eval(pts) - cesaro_apply_numeric(sym, f, pts))
        assert np.max(gap) < 1e-12


@pytest.mark.parametrize("n", [1, 2])
def test_radial_derivative_identity_is_coefficient_exact(n):
    g = random_series(n, 6, constant_free=True)
    f = random_series(n, 6)
    rep = radial_derivative_identity_check(CesaroSymbol(g), f, ball_points(n, 16))
    assert rep.coefficient_deviation == 0.0
    assert rep.sample_deviation < 1e-12


def test_bloch_seminorm_oracles():
    # sup (1-r^2) r = 2/(3 sqrt 3) at r = 1/sqrt(3);
    # sup (1-r^2) 2r^2 = 1/2 at r = 1/sqrt(2).
    rep1 = bloch_seminorm(CesaroSymbol(Series(1, {(1,): 1.0})))
    assert rep1.M == pytest.approx(2.0 / (3.0 * math.sqrt(3.0)), abs=1e-9)
    assert rep1.argmax_radius == pytest.approx(1.0 / math.sqrt(3.0), abs=1e-6)
    rep2 = bloch_seminorm(CesaroSymbol(Series(1, {(2,): 1.0})))
    assert rep2.M == pytest.approx(0.5, abs=1e-9)
    assert rep2.argmax_radius == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-6)
    assert not rep1.unbounded and not rep2.unbounded


def test_bloch_seminorm_scales_linearly():
    g = Series(1, {(1,): 1.0, (2,): 0.5j})
    m1 = bloch_seminorm(CesaroSymbol(g)).M
    m2 = bloch_seminorm(CesaroSymbol(g.scaled(2.0))).M
    assert m2 == pytest.approx(2.0 * m1, rel=1e-12)


def test_bloch_flags_divergent_symbol():
    # g = (1-z)^(-2): the weighted radial derivative grows like (1-r)^(-2).
    g = KernelPower(np.array([1.0 - 1e-9 + 0j]), 2.0, 1.0)
    rep = bloch_seminorm(g)
    assert rep.unbounded


def test_polynomials_are_little_bloch():
    rep = little_bloch_profile(CesaroSymbol(Series(1, {(1,): 1.0})))
    assert rep.verdict
    values = [v for _, v in rep.profile]
    assert values[-1] < 1e-3
    # profile radii increase toward the sphere and values eventually decay
    assert values[-1] < max(values)


def test_bergman_projection_reproduces_polynomials():
    measure = make_measure(1, 1.0)
    rule = build_rule(measure, degree=48)
    f = Series(1, {(3,): 1.0, (1,): -2j})
    proj = bergman_project(f, 1.0, measure, rule)
    pts = ball_points(1, 20, radius=0.5)
    assert np.max(np.abs(proj(pts) - f.eval(pts))) < 1e-10


def test_lower_bound_on_constant_family():
    measure = make_measure(1, 0.0)
    phi = power_growth(2)
    sym = CesaroSymbol(Series(1, {(1,): 1.0}))
    rep = cesaro_norm_lower_bound(sym, phi, measure, [Series(1, {(0,): 1.0})])
    # T_g 1 = z and ||z|| = sqrt(1/2), ||1|| = 1
    assert rep.value == pytest.approx(math.sqrt(0.5), rel=1e-9)


def test_upper_bound_modular_for_constant_argument():
    # With f = 1, g = z, Phi = t^2, alpha = 0 the modular of
    # (1-|z|^2)|f Rg| / (M ||f||) is (1/12) / M^2 = 27/48.
    measure = make_measure(1, 0.0)
    phi = power_growth(2)
    sym = CesaroSymbol(Series(1, {(1,): 1.0}))
    rep = cesaro_upper_bound_check(sym, phi, measure, [Series(1, {(0,): 1.0})])
    assert rep.passes
    assert rep.worst_modular == pytest.approx(27.0 / 48.0, rel=1e-8)


def test_lower_over_m_is_scale_invariant():
    measure = make_measure(1, 1.0)
    phi = power_growth(2)
    fam = [Series(1, {(0,): 1.0}), Series(1, {(1,): 1.0, (2,): 0.3})]
    g = Series(1, {(1,): 1.0, (2,): 1.0})
    ratios = []
    for c in (1.0, 2.0):
        sym = CesaroSymbol(g.scaled(c))
        low = cesaro_norm_lower_bound(sym, phi, measure, fam)
        ratios.append(low.value / bloch_seminorm(sym).M)
    assert ratios[1] == pytest.approx(ratios[0], rel=1e-6)


def test_identity_check_survives_fraction_round_trip():
    # the coefficient comparison runs in exact rational arithmetic
    f = Series(1, {(k,): Fraction(1, k + 1) for k in range(4)})
    g = Series(1, {(1,): Fraction(3, 7)})
    rep = radial_derivative_identity_check(CesaroSymbol(g), f, ball_points(1, 4))
    assert rep.coefficient_deviation == 0.0
