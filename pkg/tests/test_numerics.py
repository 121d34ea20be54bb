"""Spectral grid, interpolation, differentiation, quadrature, extrapolation."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from virasoro import (
    PeriodicSamples,
    circle_grid,
    circle_integral,
    count_sign_changes,
    richardson_limit,
    spectral_derivative,
)

TWO_PI = 2.0 * np.pi


def test_circle_grid_uniform_open():
    g = circle_grid(8)
    assert g[0] == 0.0
    assert np.allclose(np.diff(g), np.pi / 4.0)
    assert g[-1] < TWO_PI


class TestPeriodicSamples:
    def test_rejects_odd_small_nonfinite(self):
        with pytest.raises(ValueError):
            PeriodicSamples(np.zeros(7))
        with pytest.raises(ValueError):
            PeriodicSamples(np.zeros(6))
        with pytest.raises(ValueError):
            PeriodicSamples([0.0] * 7 + [np.nan])
        with pytest.raises(ValueError):
            PeriodicSamples(np.zeros((4, 4)))

    def test_values_read_only(self):
        s = PeriodicSamples(np.zeros(8))
        with pytest.raises(ValueError):
            s.values[0] = 1.0

    def test_interpolation_exact_for_bandlimited(self):
        g = circle_grid(32)
        s = PeriodicSamples(np.cos(3.0 * g) - 0.5 * np.sin(5.0 * g))
        probe = np.linspace(0.1, 6.1, 40)
        exact = np.cos(3.0 * probe) - 0.5 * np.sin(5.0 * probe)
        assert np.max(np.abs(s.interpolate(probe) - exact)) < 1e-12

    def test_interpolation_matches_nodes(self):
        g = circle_grid(16)
        v = np.exp(np.sin(g))
        s = PeriodicSamples(v)
        assert np.max(np.abs(s.interpolate(g) - v)) < 1e-13

    def test_scalar_in_scalar_out(self):
        s = PeriodicSamples(np.cos(circle_grid(16)))
        out = s.interpolate(0.3)
        assert isinstance(out, float)
        assert abs(out - np.cos(0.3)) < 1e-13


class TestSpectralDerivative:
    def test_first_derivative_of_cos(self):
        g = circle_grid(64)
        d = spectral_derivative(PeriodicSamples(np.cos(g)), 1)
        assert np.max(np.abs(d.values + np.sin(g))) < 1e-13

    def test_third_derivative_of_sin2(self):
        g = circle_grid(64)
        d = spectral_derivative(PeriodicSamples(np.sin(2.0 * g)), 3)
        # Rounding noise in the top bins is amplified by k^3; 5e-11 covers it.
        assert np.max(np.abs(d.values + 8.0 * np.cos(2.0 * g))) < 5e-11

    def test_smooth_nonpolynomial(self):
        g = circle_grid(256)
        d = spectral_derivative(PeriodicSamples(np.exp(np.sin(g))), 1)
        exact = np.cos(g) * np.exp(np.sin(g))
        assert np.max(np.abs(d.values - exact)) < 1e-11

    def test_order_validation(self):
        s = PeriodicSamples(np.zeros(8))
        with pytest.raises(ValueError):
            spectral_derivative(s, 0)
        with pytest.raises(ValueError):
            spectral_derivative(s, 4)

    @given(st.integers(min_value=1, max_value=3))
    def test_derivative_of_constant_vanishes(self, order):
        s = PeriodicSamples(np.full(16, 2.5))
        assert np.max(np.abs(spectral_derivative(s, order).values)) < 1e-14


class TestCircleIntegral:
    def test_constant(self):
        assert abs(circle_integral(PeriodicSamples(np.ones(8))) - TWO_PI) < 1e-15

    def test_cos_squared(self):
        g = circle_grid(64)
        assert abs(circle_integral(PeriodicSamples(np.cos(g) ** 2)) - np.pi) < 1e-13

    def test_pure_harmonic_integrates_to_zero(self):
        g = circle_grid(32)
        assert abs(circle_integral(PeriodicSamples(np.sin(5.0 * g)))) < 1e-14


class TestRichardson:
    def test_even_power_limit(self):
        res = richardson_limit(lambda e: np.cos(e), eps0=0.3, levels=5)
        assert abs(res.value - 1.0) < 1e-12
        assert res.converged
        assert res.error_estimate < 1e-8

    def test_quadratic_model_recovered(self):
        # f(eps) = 2 + 5 eps^2 - eps^4 has exact limit 2.
        res = richardson_limit(lambda e: 2.0 + 5.0 * e**2 - e**4, eps0=0.2, levels=4)
        assert abs(res.value - 2.0) < 1e-13

    def test_table_shape(self):
        res = richardson_limit(lambda e: 1.0 + e**2, eps0=0.1, levels=4)
        assert len(res.table) == 4
        assert len(res.table[-1]) == 4

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            richardson_limit(lambda e: e, eps0=0.1, levels=2)
        with pytest.raises(ValueError):
            richardson_limit(lambda e: e, eps0=0.0)

    def test_divergence_flagged(self):
        res = richardson_limit(lambda e: 1.0 / e, eps0=0.4, levels=6)
        assert not res.converged


class TestSignChanges:
    def test_sin_two_theta(self):
        s = PeriodicSamples(np.sin(2.0 * circle_grid(64)))
        count, locations = count_sign_changes(s)
        assert count == 4
        expected = np.array([0.0, np.pi / 2.0, np.pi, 3.0 * np.pi / 2.0])
        gaps = np.abs(np.sort(locations) - expected)
        gaps = np.minimum(gaps, TWO_PI - gaps)
        assert np.max(gaps) < 1e-8

    def test_no_changes_for_positive_function(self):
        s = PeriodicSamples(2.0 + np.cos(circle_grid(32)))
        count, locations = count_sign_changes(s)
        assert count == 0
        assert locations.size == 0

    def test_shifted_harmonic(self):
        s = PeriodicSamples(np.sin(3.0 * circle_grid(96) + 0.4))
        count, _ = count_sign_changes(s)
        assert count == 6
