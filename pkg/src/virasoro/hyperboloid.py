"""Lorentz metrics on the torus minus its diagonal, and the hyperboloid chart.

A metric here is a coefficient ``F(theta1, theta2)`` of ``F d theta1
d theta2``. The curved family ``F = c / sin^2((theta1 - theta2)/2)`` is the
pullback of the ambient quadratic form of the hyperboloid ``x^2 + y^2 - t^2
= c`` under the double-angle embedding; its Gaussian curvature is ``1/c``.
The diagonal limits of conformal-factor expressions recover Schwarzian data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circle import CircleDiffeo
from .numerics import ExtrapolationResult, richardson_limit
from .projective import ProjectiveStructure
from .schwarzian import schwarzian_modified

_DIAGONAL_GUARD = 1e-8


def _half_sine(th1, th2):
    return np.sin(0.5 * (np.asarray(th1, float) - np.asarray(th2, float)))


class NullMetric:
    """Metric coefficient ``F(theta1, theta2)`` of ``F d theta1 d theta2``.

    Three kinds: ``curved`` with parameter ``c`` (``F = c / sin^2`` of the
    half difference), ``flat`` (``F = 1``), and ``pullback`` of a base metric
    by the diagonal action of a circle diffeomorphism.
    """

    __slots__ = ("kind", "c", "base", "map")

    def __init__(self, kind: str, c: float | None = None, base=None, map=None) -> None:
        if kind not in ("curved", "flat", "pullback"):
            raise ValueError(f"unknown metric kind {kind!r}")
        if kind == "curved" and (c is None or c == 0.0 or not math.isfinite(c)):
            raise ValueError("curved metric needs a nonzero finite parameter")
        if kind == "pullback" and not (isinstance(base, NullMetric) and isinstance(map, CircleDiffeo)):
            raise ValueError("pullback metric needs a base metric and a diffeomorphism")
        self.kind = kind
        self.c = None if c is None else float(c)
        self.base = base
        self.map = map

    @classmethod
    def curved(cls, c: float) -> "NullMetric":
        return cls("curved", c=c)

    @classmethod
    def flat(cls) -> "NullMetric":
        return cls("flat")

    @classmethod
    def pullback(cls, base: "NullMetric", d: CircleDiffeo) -> "NullMetric":
        return cls("pullback", base=base, map=d)

    def coefficient(self, th1, th2):
        """Evaluate ``F``; points too close to the diagonal are rejected."""
        s = _half_sine(th1, th2)
        if np.min(np.abs(s)) <= _DIAGONAL_GUARD:
            raise ValueError("metric evaluated too close to the diagonal")
        return self._coefficient(th1, th2)

    def _coefficient(self, th1, th2):
        if self.kind == "curved":
            return self.c / _half_sine(th1, th2) ** 2
        if self.kind == "flat":
            return np.ones(np.broadcast(np.asarray(th1), np.asarray(th2)).shape)
        d = self.map
        return (
            self.base._coefficient(d.eval(th1), d.eval(th2))
            * d.derivative(th1, 1)
            * d.derivative(th2, 1)
        )

    def __repr__(self) -> str:  # pragma: no cover
        if self.kind == "curved":
            return f"NullMetric.curved({self.c:.6g})"
        if self.kind == "flat":
            return "NullMetric.flat()"
        return f"NullMetric.pullback({self.base!r}, {self.map!r})"


def metric_eval(metric: NullMetric, th1, th2):
    """Coefficient of the metric at off-diagonal points."""
    return metric.coefficient(th1, th2)


def gaussian_curvature(metric: NullMetric, th1, th2, step: float = 1e-3):
    """Gaussian curvature ``K = -(2/F) d^2 log|F| / d theta1 d theta2``.

    The mixed partial uses the centered cross stencil at ``step`` and
    ``step/2`` combined by one Richardson step, so the truncation error is
    fourth order. Points should keep a margin of at least 0.05 from the
    diagonal.
    """

    def logf(a, b):
        return np.log(np.abs(metric.coefficient(a, b)))

    def mixed(h):
        return (
            logf(th1 + h, th2 + h)
            - logf(th1 + h, th2 - h)
            - logf(th1 - h, th2 + h)
            + logf(th1 - h, th2 - h)
        ) / (4.0 * h * h)

    m = (4.0 * mixed(step / 2.0) - mixed(step)) / 3.0
    return -2.0 * m / metric.coefficient(th1, th2)


@dataclass(frozen=True)
class SpacetimePoint:
    """Point of the quadric ``x^2 + y^2 - t^2 = c`` in Minkowski 3-space."""

    x: float
    y: float
    t: float
    c: float

    def __post_init__(self) -> None:
        if not all(map(math.isfinite, (self.x, self.y, self.t, self.c))):
            raise ValueError("coordinates must be finite")
        if abs(self.quadric_residual()) > 1e-10 * max(1.0, abs(self.c)):
            raise ValueError("point does not lie on the quadric")

    def quadric_residual(self) -> float:
        return self.x**2 + self.y**2 - self.t**2 - self.c


def embed(th1: float, th2: float, c: float) -> SpacetimePoint:
    """Hyperboloid point for an off-diagonal angle pair (``c > 0``).

    With ``theta = (th1 + th2)/2`` and ``phi = (th1 - th2)/2`` the point is
    ``rho (sin theta, cos theta, cos phi / 1)`` scaled by
    ``rho = sqrt(c) / sin(phi)``; the pulled-back ambient form is exactly the
    curved metric coefficient.
    """
    if not c > 0:
        raise ValueError("embedding needs a positive quadric parameter")
    th1, th2 = float(th1), float(th2)
    half_sum = 0.5 * (th1 + th2)
    half_diff = 0.5 * (th1 - th2)
    s = math.sin(half_diff)
    if abs(s) <= _DIAGONAL_GUARD:
        raise ValueError("embedding evaluated too close to the diagonal")
    rho = math.sqrt(c) / s
    return SpacetimePoint(
        x=rho * math.sin(half_sum),
        y=rho * math.cos(half_sum),
        t=rho * math.cos(half_diff),
        c=float(c),
    )


def conformal_factor(d: CircleDiffeo, th1, th2):
    """Ratio of the pulled-back curved metric to the curved metric.

    ``f = phi'(th1) phi'(th2) sin^2((th1-th2)/2) / sin^2((phi th1 - phi th2)/2)``,
    independent of the curvature parameter. Extends smoothly to the diagonal
    with value 1; evaluation this close to the diagonal is rejected.
    """
    s = _half_sine(th1, th2)
    s_img = _half_sine(d.eval(th1), d.eval(th2))
    if np.min(np.abs(s)) <= _DIAGONAL_GUARD or np.min(np.abs(s_img)) <= _DIAGONAL_GUARD:
        raise ValueError("conformal factor evaluated too close to the diagonal")
    return d.derivative(th1, 1) * d.derivative(th2, 1) * s**2 / s_img**2


def diagonal_restriction(
    d: CircleDiffeo,
    c: float,
    theta: float,
    eps0: float = 0.1,
    levels: int = 5,
) -> ExtrapolationResult:
    """Diagonal limit of ``(3/2) (f - 1) F_c`` along ``(theta+eps, theta-eps)``.

    Extrapolates the symmetric off-diagonal family with Richardson; the limit
    is ``c`` times the modified-Schwarzian coefficient at ``theta``.
    """
    theta = float(theta)

    def g(eps):
        f = conformal_factor(d, theta + eps, theta - eps)
        big_f = c / math.sin(eps) ** 2
        return 1.5 * (f - 1.0) * big_f

    return richardson_limit(g, eps0, levels)


def hessian_check(
    d: CircleDiffeo,
    theta: float,
    eps0: float = 0.1,
    levels: int = 5,
    tol: float = 1e-5,
):
    """Transverse Hessian of the conformal factor against the Schwarzian.

    Extracts the coefficient of ``(th1 - th2)^2 / 2`` in ``f - 1`` across the
    diagonal and compares with one third of the modified-Schwarzian
    coefficient. Returns ``(hessian_value, schwarzian_value, residual,
    passed)``.
    """
    theta = float(theta)

    def g(eps):
        return (conformal_factor(d, theta + eps, theta - eps) - 1.0) / (2.0 * eps) ** 2

    hessian_value = 2.0 * richardson_limit(g, eps0, levels).value
    schwarzian_value = float(schwarzian_modified(d).eval(theta)) / 3.0
    residual = abs(hessian_value - schwarzian_value)
    return hessian_value, schwarzian_value, residual, residual <= tol


def flat_cocycle(d: CircleDiffeo, theta):
    """Diagonal cocycle of the flat metric, ``phi'(theta)^2 - 1``."""
    return d.derivative(theta, 1) ** 2 - 1.0


def general_metric(structure: ProjectiveStructure, th1, th2):
    """Metric induced by a developing curve, ``4 W1 W2 / det(P1, P2)^2``.

    Both supported curves have unit Wronskian, so this is ``4 / det^2`` with
    ``det`` the homogeneous 2x2 determinant of the developed pair; for the
    torus structure it collapses to the curved coefficient with ``c = 1``.
    Developed points must be distinct.
    """
    x1, y1 = structure.curve(np.asarray(th1, float))
    x2, y2 = structure.curve(np.asarray(th2, float))
    det = y1 * x2 - x1 * y2
    if np.min(np.abs(det)) <= _DIAGONAL_GUARD:
        raise ValueError("developed points coincide; the induced metric is singular there")
    return 4.0 / det**2
