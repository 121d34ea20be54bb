"""Schwarzian cocycles of circle diffeomorphisms.

The classical Schwarzian derivative, its chart-corrected (universal) variant
for a projective structure, the modified variant (the torus case), the
log-derivative and affine cocycles it is built from, the infinitesimal
Schwarzian, osculating projective elements, and the sign-change count of the
modified Schwarzian.

Coefficient fields carry grid samples plus an exact analytic evaluator
whenever one is available; arithmetic and pullbacks prefer the evaluator and
fall back to trigonometric interpolation of the samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circle import CircleDiffeo, MobiusElement, VectorFieldS1
from .numerics import (
    DEFAULT_GRID,
    PeriodicSamples,
    circle_grid,
    count_sign_changes,
    spectral_derivative,
)
from .projective import ProjectiveStructure, TORUS, _good_rotation


class _DensityField:
    """Sampled coefficient of a field of weight ``w`` (transforms with phi'^w)."""

    weight = 0

    __slots__ = ("samples", "evaluator")

    def __init__(self, samples, evaluator=None) -> None:
        if not isinstance(samples, PeriodicSamples):
            samples = PeriodicSamples(samples)
        self.samples = samples
        self.evaluator = evaluator

    @classmethod
    def from_function(cls, fn, grid: int = DEFAULT_GRID):
        return cls(PeriodicSamples(fn(circle_grid(grid))), fn)

    @classmethod
    def constant(cls, value: float, grid: int = DEFAULT_GRID):
        v = float(value)
        return cls.from_function(lambda th: np.full(np.shape(th), v), grid)

    def eval(self, theta):
        if self.evaluator is not None:
            return self.evaluator(theta)
        return self.samples.interpolate(theta)

    def pullback(self, d: CircleDiffeo):
        """Pull the field back by a diffeomorphism: ``u(d theta) d'(theta)^w``."""
        w = self.weight

        def fn(theta):
            return self.eval(d.eval(theta)) * d.derivative(theta, 1) ** w

        return type(self).from_function(fn, self.samples.size)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.samples.values)))

    def _binary(self, other, sign: float):
        n = max(self.samples.size, other.samples.size)

        def fn(theta):
            return self.eval(theta) + sign * other.eval(theta)

        return type(self).from_function(fn, n)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._binary(other, 1.0)

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._binary(other, -1.0)

    def __mul__(self, scalar):
        s = float(scalar)

        def fn(theta):
            return s * self.eval(theta)

        return type(self).from_function(fn, self.samples.size)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __repr__(self) -> str:  # pragma: no cover
        return f"{type(self).__name__}(n={self.samples.size}, max={self.max_abs():.3g})"


class PeriodicFunction(_DensityField):
    """Plain periodic function (weight 0)."""

    weight = 0


class OneForm(_DensityField):
    """Coefficient ``a(theta)`` of a one-form ``a d theta`` (weight 1)."""

    weight = 1


class QuadraticDifferential(_DensityField):
    """Coefficient ``u(theta)`` of ``u d theta^2`` (weight 2)."""

    weight = 2


def _classical_coefficient(d: CircleDiffeo):
    def fn(theta):
        p1 = d.derivative(theta, 1)
        p2 = d.derivative(theta, 2)
        p3 = d.derivative(theta, 3)
        return p3 / p1 - 1.5 * (p2 / p1) ** 2

    return fn


def schwarzian_classical(d: CircleDiffeo, grid: int = DEFAULT_GRID) -> QuadraticDifferential:
    """Classical Schwarzian derivative ``phi'''/phi' - (3/2)(phi''/phi')^2``."""
    return QuadraticDifferential.from_function(_classical_coefficient(d), grid)


def schwarzian_universal(
    d: CircleDiffeo, structure: ProjectiveStructure, grid: int = DEFAULT_GRID
) -> QuadraticDifferential:
    """Chart-corrected Schwarzian for a projective structure.

    Adds ``k (phi'^2 - 1)`` to the classical coefficient, where ``k`` is the
    constant chart Schwarzian of the structure. Vanishes exactly on lifts of
    projective transformations and satisfies the same cocycle identity as the
    classical Schwarzian.
    """
    k = structure.chart_schwarzian
    classical = _classical_coefficient(d)

    def fn(theta):
        return classical(theta) + k * (d.derivative(theta, 1) ** 2 - 1.0)

    return QuadraticDifferential.from_function(fn, grid)


def schwarzian_modified(d: CircleDiffeo, grid: int = DEFAULT_GRID) -> QuadraticDifferential:
    """Modified Schwarzian: the chart-corrected variant for the torus structure."""
    return schwarzian_universal(d, TORUS, grid)


def cocycle_E(d: CircleDiffeo, grid: int = DEFAULT_GRID) -> PeriodicFunction:
    """Logarithmic slope cocycle ``E = log phi'``."""
    return PeriodicFunction.from_function(lambda th: np.log(d.derivative(th, 1)), grid)


def cocycle_A(d: CircleDiffeo, grid: int = DEFAULT_GRID) -> OneForm:
    """Affine cocycle ``A = (phi''/phi') d theta`` (the differential of E)."""
    return OneForm.from_function(lambda th: d.derivative(th, 2) / d.derivative(th, 1), grid)


def schwarzian_from_triple(d: CircleDiffeo, grid: int = DEFAULT_GRID) -> QuadraticDifferential:
    """Schwarzian rebuilt from the affine cocycle, ``a' - a^2/2`` with ``a = phi''/phi'``.

    The derivative is taken spectrally from the sampled one-form, giving an
    independent route that must agree with ``schwarzian_classical``.
    """
    a = cocycle_A(d, grid)
    a_prime = spectral_derivative(a.samples, 1)
    values = a_prime.values - 0.5 * a.samples.values**2
    return QuadraticDifferential(PeriodicSamples(values))


def infinitesimal_schwarzian(
    xi: VectorFieldS1,
    structure: ProjectiveStructure | None = TORUS,
    grid: int = DEFAULT_GRID,
) -> QuadraticDifferential:
    """Linearization of the Schwarzian cocycle along a vector field.

    For a structure with chart Schwarzian ``k`` this is
    ``(xi''' + 2 k xi') d theta^2`` (torus: ``xi''' + xi'``); with
    ``structure=None`` it is the uniform-density linearization ``xi'''``.
    """
    k = 0.0 if structure is None else structure.chart_schwarzian

    def fn(theta):
        return xi.derivative(theta, 3) + 2.0 * k * xi.derivative(theta, 1)

    return QuadraticDifferential.from_function(fn, grid)


def osculating_mobius(
    d: CircleDiffeo, structure: ProjectiveStructure, theta0: float
) -> MobiusElement:
    """Projective element matching the developed 2-jet of ``d`` at ``theta0``.

    Reads ``d`` through the developing chart (rotated off the pole), matches
    value, first, and second derivative of the induced map of the affine
    line, and conjugates the resulting matrix back to the standard chart.
    The third-order mismatch that remains is the universal Schwarzian.
    """
    theta0 = float(theta0)
    rho = _good_rotation(structure, [theta0, d.eval(theta0)])
    t, dt, ddt, _ = structure.chart_derivs(theta0, rho)
    phi = d.eval(theta0)
    p1 = d.derivative(theta0, 1)
    p2 = d.derivative(theta0, 2)
    tau, s1, s2, _ = structure.chart_derivs(phi, rho)
    # Parametric derivatives of the induced chart map h(t(theta)) = tau(theta).
    dtau = s1 * p1
    ddtau = s2 * p1**2 + s1 * p2
    v = tau
    p = dtau / dt
    q = (ddtau * dt - dtau * ddt) / dt**3
    # Mobius map with 2-jet (v, p, q) at t: shift to t, slope p with curvature
    # q, then shift by v.
    jet = np.array([[p, 0.0], [-q / (2.0 * p), 1.0]])
    to_t = np.array([[1.0, -t], [0.0, 1.0]])
    add_v = np.array([[1.0, v], [0.0, 1.0]])
    local = add_v @ jet @ to_t
    cr, sr = np.cos(rho), np.sin(rho)
    rot = np.array([[cr, sr], [-sr, cr]])
    rot_inv = np.array([[cr, -sr], [sr, cr]])
    return MobiusElement(rot_inv @ local @ rot)


@dataclass(frozen=True)
class GhysReport:
    """Sign-change report for the modified Schwarzian of a diffeomorphism.

    ``identically_zero`` marks coefficients below the zero floor everywhere
    (projective lifts); ``count`` is then None instead of a finite number.
    """

    identically_zero: bool
    count: int | None
    locations: np.ndarray


def ghys_zero_count(
    d: CircleDiffeo, grid: int = DEFAULT_GRID, zero_floor: float = 1e-11
) -> GhysReport:
    """Count sign changes of the modified Schwarzian around the circle.

    Generic diffeomorphisms give at least four; inputs whose coefficient
    stays below ``zero_floor`` in absolute value are tagged identically zero.
    """
    q = schwarzian_modified(d, grid)
    if q.max_abs() < zero_floor:
        return GhysReport(True, None, np.empty(0))
    count, locations = count_sign_changes(q.samples)
    return GhysReport(False, count, locations)
