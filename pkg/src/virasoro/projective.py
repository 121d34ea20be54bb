"""Projective structures on the circle, cross-ratios, and Mobius lifts.

A structure is given by a developing curve ``theta -> (x(theta), y(theta))``
into homogeneous coordinates, with affine chart value ``t = y / x``. Both
supported curves have unit Wronskian ``x y' - x' y = 1``, which gives exact
closed forms for the chart derivatives and the chart Schwarzian
``S = -2 x'' / x``. Cross-ratios are computed from 2x2 determinants of
homogeneous pairs, so points at infinity need no special casing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circle import CircleDiffeo, MobiusElement
from .numerics import TWO_PI

_ROTATIONS = (0.0, np.pi / 4.0, np.pi / 2.0, 3.0 * np.pi / 4.0)


class ProjectiveStructure:
    """Projective structure on the circle ('torus' or 'line').

    The torus structure develops by ``(cos(theta/2), 2 sin(theta/2))``
    (affine chart ``2 tan(theta/2)``, chart Schwarzian 1/2, wrapping the
    projective line once). The line structure develops by
    ``(cos theta, sin theta)`` (affine chart ``tan theta``, chart Schwarzian
    2, wrapping twice). The constant chart Schwarzian is re-verified
    numerically at construction.
    """

    __slots__ = ("name", "chart_schwarzian", "wraps")

    def __init__(self, name: str) -> None:
        if name == "torus":
            self.chart_schwarzian = 0.5
            self.wraps = 1
        elif name == "line":
            self.chart_schwarzian = 2.0
            self.wraps = 2
        else:
            raise ValueError(f"unknown projective structure {name!r}")
        self.name = name
        self._verify_constant()

    # -- developing curve -------------------------------------------------

    def curve(self, theta, order: int = 0):
        """Component ``(x, y)`` of the developing curve or a derivative.

        The curves are pure cosines/sines, so derivatives only shift phase.
        """
        th = np.asarray(theta, dtype=float)
        half = np.pi / 2.0
        if self.name == "torus":
            x = 0.5**order * np.cos(th / 2.0 + order * half)
            y = 2.0 * 0.5**order * np.sin(th / 2.0 + order * half)
        else:
            x = np.cos(th + order * half)
            y = np.sin(th + order * half)
        return x, y

    def angle_of(self, x, y):
        """Angle in ``[0, deck)`` whose developed ray matches ``(x, y)``.

        ``deck`` is ``2 pi`` for the torus curve and ``pi`` for the line
        curve (which covers the projective line twice).
        """
        if self.name == "torus":
            u = np.arctan2(y, 2.0 * x) % np.pi
            return 2.0 * u
        return np.arctan2(y, x) % np.pi

    @property
    def deck(self) -> float:
        """Period of the angle ambiguity of ``angle_of``."""
        return TWO_PI / self.wraps

    # -- affine charts ----------------------------------------------------

    def chart_derivs(self, theta, rotation: float = 0.0):
        """Affine chart value and derivatives in a rotated chart.

        Returns ``(t, t', t'', t''')`` as functions of theta for the chart
        obtained by rotating the homogeneous pair by ``rotation``. With unit
        Wronskian: ``t' = 1/x^2``, ``t'' = -2 x'/x^3``,
        ``t''' = (6 x'^2 - 2 x x'')/x^4``.
        """
        cr, sr = np.cos(rotation), np.sin(rotation)
        x0, y0 = self.curve(theta, 0)
        x0d, y0d = self.curve(theta, 1)
        x0dd, y0dd = self.curve(theta, 2)
        x = cr * x0 - sr * y0
        y = sr * x0 + cr * y0
        xd = cr * x0d - sr * y0d
        xdd = cr * x0dd - sr * y0dd
        t = y / x
        t1 = 1.0 / x**2
        t2 = -2.0 * xd / x**3
        t3 = (6.0 * xd**2 - 2.0 * x * xdd) / x**4
        return t, t1, t2, t3

    def chart(self, theta, rotation: float = 0.0):
        return self.chart_derivs(theta, rotation)[0]

    def _verify_constant(self) -> None:
        # Chart Schwarzian t'''/t' - 1.5 (t''/t')^2 must equal the stored
        # constant; sampled away from the chart pole, where the formula is
        # free of cancellation.
        theta = np.linspace(0.0, TWO_PI, 81)[:-1] + 0.017
        x, y = self.curve(theta)
        theta = theta[np.abs(x) / np.hypot(x, y) >= 0.35]
        t, t1, t2, t3 = self.chart_derivs(theta)
        s = t3 / t1 - 1.5 * (t2 / t1) ** 2
        if np.max(np.abs(s - self.chart_schwarzian)) > 1e-12:
            raise AssertionError(f"chart Schwarzian of {self.name!r} is not constant")

    def __repr__(self) -> str:  # pragma: no cover
        return f"ProjectiveStructure({self.name!r})"


TORUS = ProjectiveStructure("torus")
LINE = ProjectiveStructure("line")


def structure_by_name(name: str) -> ProjectiveStructure:
    if name == "torus":
        return TORUS
    if name == "line":
        return LINE
    raise ValueError(f"unknown projective structure {name!r}")


@dataclass(frozen=True)
class ProjectivePoint:
    """Point of the projective line as a normalized homogeneous pair.

    Stored with ``x^2 + y^2 = 1`` and the first nonzero coordinate positive,
    so equal points have equal coordinates. The affine value is ``y / x``
    with ``x = 0`` mapping to infinity.
    """

    x: float
    y: float

    def __post_init__(self) -> None:
        r = math.hypot(self.x, self.y)
        if r == 0.0 or not math.isfinite(r):
            raise ValueError("homogeneous pair must be nonzero and finite")
        x, y = self.x / r, self.y / r
        if x < 0.0 or (x == 0.0 and y < 0.0):
            x, y = -x, -y
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_affine(cls, t: float) -> "ProjectivePoint":
        if math.isinf(t):
            return cls(0.0, 1.0)
        return cls(1.0, float(t))

    @property
    def affine(self) -> float:
        if self.x == 0.0:
            return math.inf
        return self.y / self.x

    def apply(self, m: MobiusElement) -> "ProjectivePoint":
        x, y = m.act_point(self.x, self.y)
        return ProjectivePoint(float(x), float(y))


def develop(structure: ProjectiveStructure, theta: float) -> ProjectivePoint:
    """Developed point of an angle, as a normalized projective point."""
    x, y = structure.curve(float(theta))
    return ProjectivePoint(float(x), float(y))


def _homogeneous(z) -> tuple:
    z = float(z)
    if math.isinf(z):
        return (0.0, 1.0)
    return (1.0, z)


def cross_ratio(z1, z2, z3, z4) -> float:
    """Cross-ratio ``(z1 - z3)(z2 - z4) / ((z1 - z4)(z2 - z3))``.

    Arguments are finite reals or ``+-inf`` (the point at infinity). The
    computation runs on homogeneous 2x2 determinants, which agrees bit for
    bit with the affine formula when every argument is finite. A vanishing
    denominator with nonzero numerator returns a signed infinity;
    configurations with three coincident points are rejected.
    """
    pts = [_homogeneous(z) for z in (z1, z2, z3, z4)]

    def det(i: int, j: int) -> float:
        (xi, yi), (xj, yj) = pts[i], pts[j]
        return yi * xj - xi * yj

    coincident = [[False] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(i + 1, 4):
            if det(i, j) == 0.0:
                coincident[i][j] = coincident[j][i] = True
    for i in range(4):
        if sum(coincident[i]) >= 2:
            raise ValueError("cross-ratio needs at least three distinct points")

    num = det(0, 2) * det(1, 3)
    den = det(0, 3) * det(1, 2)
    if den == 0.0:
        if num == 0.0:
            raise ValueError("degenerate cross-ratio configuration")
        return math.copysign(math.inf, num)
    return num / den


def _affine_cross_ratio(t: np.ndarray) -> float:
    return ((t[0] - t[2]) * (t[1] - t[3])) / ((t[0] - t[3]) * (t[1] - t[2]))


def _good_rotation(structure: ProjectiveStructure, angles) -> float:
    """Pick a chart rotation that keeps the given angles off the chart pole.

    Scores each candidate by the smallest normalized ``|x|`` component over
    the developed angles and returns the best one. With candidates spaced
    pi/4 apart the winning score is bounded away from zero for any input.
    """
    x, y = structure.curve(np.asarray(angles, dtype=float))
    r = np.hypot(x, y)
    best, best_score = 0.0, -1.0
    for rho in _ROTATIONS:
        xr = np.cos(rho) * x - np.sin(rho) * y
        score = float(np.min(np.abs(xr) / r))
        if score > best_score:
            best, best_score = rho, score
    return best


# Series terms of a lift are cut once they cannot move third derivatives by
# more than roughly this amount; the cap rejects near-degenerate elements.
_LIFT_TAIL_TOL = 1e-18
_LIFT_TERM_CAP = 16384


def mobius_lift(m: MobiusElement, structure: ProjectiveStructure = TORUS) -> CircleDiffeo:
    """Circle diffeomorphism induced by a projective transformation.

    The affine chart maps to the unit circle by a Cayley transform, under
    which the fractional-linear action becomes a disk automorphism
    ``w -> lam (w - alpha)/(1 - conj(alpha) w)``. Its boundary argument has
    the explicit series ``arg lam + 2 sum rho^n sin(n(u - psi))/n`` with
    ``alpha = rho e^(i psi)``, so the Fourier lift is written down exactly
    instead of being fit by sampling. The deck-covering ambiguity is fixed by
    placing the mean displacement in ``(-deck/2, deck/2]``, which is the
    principal branch of ``arg lam``.
    """
    # Chart value 2 tan(theta/2) resp. tan(theta) equals -i s (w - 1)/(w + 1)
    # on w = e^(i theta * wraps) with s = 2/wraps, inverted by the rows below.
    s = 2.0 / structure.wraps
    cayley = np.array([[-1.0, 1j * s], [1.0, 1j * s]], dtype=complex)
    w_mat = cayley @ m.matrix.astype(complex) @ np.linalg.inv(cayley)
    if abs(w_mat[0, 0]) <= abs(w_mat[0, 1]):
        raise ArithmeticError("projective element does not act on the disk")
    alpha = -w_mat[0, 1] / w_mat[0, 0]
    rho = abs(alpha)
    if rho >= 1.0:
        raise ArithmeticError("projective element does not act on the disk")
    w_one = (w_mat[0, 0] + w_mat[0, 1]) / (w_mat[1, 0] + w_mat[1, 1])
    lam = w_one * (1.0 - np.conj(alpha)) / (1.0 - alpha)
    shift = math.atan2(lam.imag, lam.real) / structure.wraps

    terms = 0
    if rho > 0.0:
        # rho^n / n below the tail tolerance contributes nothing detectable.
        budget = _LIFT_TAIL_TOL * (1.0 - rho)
        terms = int(np.ceil(math.log(budget) / math.log(rho)))
        terms = max(terms, 1)
        if terms * structure.wraps > _LIFT_TERM_CAP:
            raise ArithmeticError(
                f"lift of a near-degenerate projective element needs more than "
                f"{_LIFT_TERM_CAP} modes"
            )
    n = np.arange(1, terms + 1, dtype=float)
    psi = math.atan2(alpha.imag, alpha.real)
    radial = (2.0 / structure.wraps) * rho**n / n
    cos_w = -radial * np.sin(n * psi)
    sin_w = radial * np.cos(n * psi)
    if structure.wraps == 1:
        cos_c, sin_c = cos_w, sin_w
    else:
        # Harmonics sit at multiples of the wrapping number; odd slots vanish.
        cos_c = np.zeros(structure.wraps * terms)
        sin_c = np.zeros(structure.wraps * terms)
        cos_c[structure.wraps - 1 :: structure.wraps] = cos_w
        sin_c[structure.wraps - 1 :: structure.wraps] = sin_w
    lift = CircleDiffeo(shift, cos_c, sin_c)

    probe = np.linspace(0.0, TWO_PI, 49)[:-1] + 0.013
    xm, ym = m.act_point(*structure.curve(probe))
    gap = structure.angle_of(xm, ym) - lift.eval(probe)
    gap -= structure.deck * np.round(gap / structure.deck)
    if np.max(np.abs(gap)) > 1e-9:
        raise ArithmeticError("projective lift failed its residual check")
    return lift


def cartan_schwarzian_estimate(
    d: CircleDiffeo,
    structure: ProjectiveStructure,
    theta: float,
    eps: float,
) -> float:
    """Finite cross-ratio estimate of the chart-corrected Schwarzian at ``theta``.

    Develops the symmetric stencil ``theta + eps * (1, -1, 2, -2)`` and its
    image under ``d``, forms the ratio of image to source cross-ratios, and
    normalizes by the developed-chart spread:

        6 * (CR(images)/CR(sources) - 1) / ((t1 - t2)(t3 - t4))

    evaluated in a deterministically rotated chart that keeps the stencil off
    the chart pole, then scaled by the squared chart derivative so the result
    converges (second order in ``eps``, by symmetry) to the coefficient of
    the universal Schwarzian of ``d`` at ``theta``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    theta = float(theta)
    offs = np.array([1.0, -1.0, 2.0, -2.0]) * eps
    src = theta + offs
    img = d.eval(src)
    rho = _good_rotation(structure, [theta, d.eval(theta)])
    t = structure.chart(src, rho)
    tau = structure.chart(img, rho)
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(tau))):
        raise ValueError("stencil hits the chart pole; reduce eps")
    ratio = _affine_cross_ratio(tau) / _affine_cross_ratio(t) - 1.0
    denom = (t[0] - t[1]) * (t[2] - t[3])
    chart_value = 6.0 * ratio / denom
    dchart = structure.chart_derivs(theta, rho)[1]
    return float(chart_value * dchart**2)
