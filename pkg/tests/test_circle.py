"""Circle diffeomorphisms, vector fields, flows, brackets, projective elements."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from virasoro import (
    CircleDiffeo,
    MobiusElement,
    VectorFieldS1,
    bracket,
    compose,
    flow,
    inverse,
    random_diffeo,
    random_mobius,
    random_vector_field,
)
from conftest import sup_gap

TWO_PI = 2.0 * np.pi


class TestCircleDiffeo:
    def test_identity_and_rotation(self):
        ident = CircleDiffeo.identity()
        rot = CircleDiffeo.rotation(0.5)
        theta = np.linspace(0.0, TWO_PI, 17)
        assert np.allclose(ident.eval(theta), theta)
        assert np.allclose(rot.eval(theta), theta + 0.5)
        assert np.allclose(rot.derivative(theta, 1), 1.0)

    def test_wobble_jet_at_zero(self, wobble):
        assert wobble.eval(0.0) == 0.0
        assert abs(wobble.derivative(0.0, 1) - 1.3) < 1e-15
        assert abs(wobble.derivative(0.0, 2)) < 1e-15
        assert abs(wobble.derivative(0.0, 3) + 0.3) < 1e-15

    def test_equivariance_under_full_turn(self, two_mode):
        theta = np.linspace(-2.0, 9.0, 23)
        gap = two_mode.eval(theta + TWO_PI) - two_mode.eval(theta) - TWO_PI
        assert np.max(np.abs(gap)) < 1e-12

    def test_displacement_periodic(self, two_mode):
        theta = np.linspace(0.0, TWO_PI, 11)
        gap = two_mode.displacement(theta + TWO_PI) - two_mode.displacement(theta)
        assert np.max(np.abs(gap)) < 1e-12

    def test_rejects_non_monotone(self):
        with pytest.raises(ValueError):
            CircleDiffeo(0.0, (), (1.1,))
        with pytest.raises(ValueError):
            CircleDiffeo(0.0, (0.8,), (0.8,))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            CircleDiffeo(np.nan)
        with pytest.raises(ValueError):
            CircleDiffeo(0.0, (np.inf,), ())

    def test_slope_margin_constant(self):
        # Slope of theta + b sin(theta) dips to 1 - b; just inside is fine.
        CircleDiffeo(0.0, (), (0.999,))
        with pytest.raises(ValueError):
            CircleDiffeo(0.0, (), (1.0,))


class TestComposeInverse:
    def test_identity_is_neutral(self, two_mode):
        left = compose(CircleDiffeo.identity(), two_mode)
        right = compose(two_mode, CircleDiffeo.identity())
        assert sup_gap(left.eval, two_mode.eval) < 1e-12
        assert sup_gap(right.eval, two_mode.eval) < 1e-12

    def test_rotations_add(self):
        r = compose(CircleDiffeo.rotation(0.4), CircleDiffeo.rotation(-1.1))
        assert abs(r.shift + 0.7) < 1e-12
        assert r.modes == 0

    def test_round_trip_through_inverse(self, two_mode):
        ident = compose(two_mode, inverse(two_mode))
        assert sup_gap(ident.eval, lambda t: t) < 1e-9
        ident2 = compose(inverse(two_mode), two_mode)
        assert sup_gap(ident2.eval, lambda t: t) < 1e-9

    def test_inverse_of_rotation(self):
        inv = inverse(CircleDiffeo.rotation(0.8))
        assert abs(inv.shift + 0.8) < 1e-12
        assert inv.modes == 0

    def test_associativity(self, rng):
        d1 = random_diffeo(rng)
        d2 = random_diffeo(rng)
        d3 = random_diffeo(rng)
        left = compose(compose(d1, d2), d3)
        right = compose(d1, compose(d2, d3))
        assert sup_gap(left.eval, right.eval) < 1e-8

    def test_chain_rule(self, wobble, two_mode):
        c = compose(wobble, two_mode)
        theta = np.linspace(0.1, 6.1, 25)
        expect = wobble.derivative(two_mode.eval(theta), 1) * two_mode.derivative(theta, 1)
        assert np.max(np.abs(c.derivative(theta, 1) - expect)) < 1e-9

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_random_round_trip(self, seed):
        d = random_diffeo(np.random.default_rng(seed))
        assert sup_gap(compose(d, inverse(d)).eval, lambda t: t) < 1e-9


class TestFlow:
    def test_zero_time_is_identity(self):
        xi = VectorFieldS1(0.3, (0.1,), (0.2,))
        f = flow(xi, 0.0)
        assert sup_gap(f.eval, lambda t: t) < 1e-12

    def test_constant_field_rotates(self):
        f = flow(VectorFieldS1(1.0), 0.7)
        assert abs(f.shift - 0.7) < 1e-10
        assert f.modes == 0 or max(np.max(np.abs(f.cos)), np.max(np.abs(f.sin))) < 1e-12

    def test_sine_field_closed_form(self):
        # d theta/ds = sin theta integrates to tan(theta/2) = e^s tan(theta0/2).
        f = flow(VectorFieldS1(0.0, (), (1.0,)), 0.35)
        theta0 = np.array([0.4, 1.1, 2.0, 3.0, 4.5, 5.9])
        lhs = np.tan(f.eval(theta0) / 2.0)
        rhs = np.exp(0.35) * np.tan(theta0 / 2.0)
        assert np.max(np.abs(lhs - rhs) / (1.0 + np.abs(rhs))) < 1e-10

    def test_semigroup(self, rng):
        xi = random_vector_field(rng)
        a = flow(xi, 0.12)
        b = flow(xi, 0.3)
        both = flow(xi, 0.42)
        assert sup_gap(compose(a, b).eval, both.eval) < 1e-8

    def test_reverse_time_inverts(self, rng):
        xi = random_vector_field(rng)
        fwd = flow(xi, 0.25)
        back = flow(xi, -0.25)
        assert sup_gap(compose(fwd, back).eval, lambda t: t) < 1e-9


class TestBracket:
    def test_rotation_with_sine(self):
        out = bracket(VectorFieldS1(1.0), VectorFieldS1(0.0, (), (1.0,)))
        assert sup_gap(out.eval, np.cos) < 1e-12

    def test_sine_with_cosine(self):
        out = bracket(VectorFieldS1(0.0, (), (1.0,)), VectorFieldS1(0.0, (1.0,), ()))
        assert sup_gap(out.eval, lambda t: -np.ones_like(t)) < 1e-12

    def test_antisymmetry(self, rng):
        x = random_vector_field(rng)
        y = random_vector_field(rng)
        lhs = bracket(x, y)
        rhs = bracket(y, x)
        assert sup_gap(lhs.eval, lambda t: -rhs.eval(t)) < 1e-11

    def test_jacobi(self, rng):
        x = random_vector_field(rng)
        y = random_vector_field(rng)
        z = random_vector_field(rng)
        terms = (
            bracket(x, bracket(y, z)),
            bracket(y, bracket(z, x)),
            bracket(z, bracket(x, y)),
        )
        total = lambda t: sum(term.eval(t) for term in terms)
        assert sup_gap(total, lambda t: np.zeros_like(t)) < 1e-9

    def test_commutator_of_flows(self, rng):
        # [X, Y] drives the second-order defect of the flow commutator.
        x = random_vector_field(rng, max_degree=2, amplitude=0.3)
        y = random_vector_field(rng, max_degree=2, amplitude=0.3)
        s = 1e-3
        loop = compose(
            compose(flow(x, s), flow(y, s)),
            compose(flow(x, -s), flow(y, -s)),
        )
        theta = np.linspace(0.2, 6.0, 9)
        measured = (loop.eval(theta) - theta) / s**2
        expect = bracket(y, x).eval(theta)
        assert np.max(np.abs(measured - expect)) < 5e-3


class TestMobiusElement:
    def test_unit_determinant_normalization(self):
        m = MobiusElement(np.array([[2.0, 0.0], [0.0, 2.0]]))
        assert abs(np.linalg.det(m.matrix) - 1.0) < 1e-14

    def test_sign_canonicalized(self):
        m1 = MobiusElement(np.array([[1.0, 0.3], [0.2, 1.06]]))
        m2 = MobiusElement(-np.array([[1.0, 0.3], [0.2, 1.06]]))
        assert np.allclose(m1.matrix, m2.matrix)

    def test_rejects_singular(self):
        with pytest.raises(ValueError):
            MobiusElement(np.array([[1.0, 2.0], [2.0, 4.0]]))

    def test_affine_action(self):
        m = MobiusElement(np.array([[2.0, 1.0], [0.0, 0.5]]))
        assert abs(m.act_affine(1.0) - (2.0 * 1.0 + 1.0) / 0.5) < 1e-12

    def test_compose_matches_matrix_product(self, rng):
        m1 = random_mobius(rng)
        m2 = random_mobius(rng)
        t = 0.37
        assert abs(m1.compose(m2).act_affine(t) - m1.act_affine(m2.act_affine(t))) < 1e-10

    def test_inverse(self, rng):
        m = random_mobius(rng)
        assert m.compose(m.inverse()).distance(MobiusElement.identity()) < 1e-12

    def test_point_action_matches_affine_chart(self, rng):
        m = random_mobius(rng)
        t = -0.83
        x, y = m.act_point(1.0, t)
        assert abs(y / x - m.act_affine(t)) < 1e-10


class TestRandomGenerators:
    def test_diffeo_slope_floor(self):
        for seed in range(40):
            d = random_diffeo(np.random.default_rng(seed))
            theta = np.linspace(0.0, TWO_PI, 4096, endpoint=False)
            assert float(np.min(d.derivative(theta, 1))) > 0.15

    def test_determinism(self):
        d1 = random_diffeo(np.random.default_rng(7))
        d2 = random_diffeo(np.random.default_rng(7))
        assert d1.shift == d2.shift
        assert np.array_equal(d1.cos, d2.cos)
        assert np.array_equal(d1.sin, d2.sin)

    def test_mobius_unit_det(self, rng):
        for _ in range(10):
            m = random_mobius(rng)
            assert abs(np.linalg.det(m.matrix) - 1.0) < 1e-12
