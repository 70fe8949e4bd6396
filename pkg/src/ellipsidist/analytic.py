"""Real periods, elliptic logarithm and the Weierstrass parametrization.

Conventions.  For y^2 = x^3 + A x + B with largest real root e, the real
period is

    omega = 2 * int_e^inf dx / sqrt(x^3 + A x + B),

and the elliptic logarithm of a point on the unbounded branch is
z = int_x^inf dt / sqrt(t^3 + A t + B) when y >= 0, and omega - z otherwise.
So z runs over [0, omega): z -> 0 is the point at infinity and omega/2 is
(e, 0).  The inverse map is built from the Weierstrass function of the
lattice with invariants g2 = -4A, g3 = -4B, evaluated at w = z/2, using
x = p(w), y = -p'(w)/2.

On a two-component curve (three real roots e1 > e2 > e3) a point Q of the
oval is addressed by the log of Q + (e3, 0), which lies on the unbounded
branch; the group E(R) is then R/omega x Z/2 with additive coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy import integrate
from scipy.special import elliprf

from .ec_core import NEAR_SINGULAR_REL, Curve, Point
from .errors import (
    PointNotOnCurveError,
    PointOnBoundedComponentError,
    PoleProximityError,
    QuadratureError,
    SingularCurveError,
)

SERIES_TERMS = 24
QUAD_TOL = 1e-13
POLE_TOL_REL = 1e-6
PERIOD_AGREEMENT = 1e-10

UNBOUNDED = 0
BOUNDED = 1


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of two positive reals."""
    a, b = float(a), float(b)
    for _ in range(64):
        if abs(a - b) <= 4e-16 * abs(a):
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


@dataclass(frozen=True)
class SeriesCoefficients:
    """Laurent tail of p(w) = 1/w^2 + sum_{n>=1} a_n w^(2n)."""

    a: tuple

    @property
    def g2(self):
        return 20 * self.a[0]

    @property
    def g3(self):
        return 28 * self.a[1]

    def as_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.a])


def series_coefficients(c: Curve, M: int = SERIES_TERMS) -> SeriesCoefficients:
    """Coefficients a_1..a_M from a_1 = g2/20, a_2 = g3/28 and

        a_{n+1} = 6 / ((2n+1)(2n+2) - 12) * sum_{k=1}^{n-1} a_k a_{n-k}.

    Exact curves give ``Fraction`` coefficients.
    """
    if M < 2:
        raise ValueError("need M >= 2")
    g2, g3 = -4 * c.a, -4 * c.b
    if c.exact:
        a = [Fraction(g2) / 20, Fraction(g3) / 28]
    else:
        a = [g2 / 20.0, g3 / 28.0]
    for n in range(2, M):
        conv = sum(a[k - 1] * a[n - k - 1] for k in range(1, n))
        denom = (2 * n + 1) * (2 * n + 2) - 12
        a.append(Fraction(6, denom) * conv if c.exact else 6.0 / denom * conv)
    return SeriesCoefficients(tuple(a))


@dataclass(frozen=True)
class MonotonicityClass:
    kind: str  # increasing-everywhere | dip-interval
    dip: Optional[tuple[float, float]] = None


def classify_monotonicity(c: Curve) -> MonotonicityClass:
    """Whether y = +sqrt(x^3 + A x + B) increases on all of [e, inf).

    dy/dx = (3x^2 + A)/(2y) is negative exactly on (-r, r), r = sqrt(|A|/3).
    """
    A = float(c.a)
    e = float(c.e)
    if A >= 0:
        return MonotonicityClass("increasing-everywhere")
    r = math.sqrt(abs(A) / 3.0)
    if r < e:
        return MonotonicityClass("increasing-everywhere")
    return MonotonicityClass("dip-interval", (max(-r, e), r))


def _quad(fn, lo, hi, what: str) -> tuple[float, float]:
    val, err = integrate.quad(fn, lo, hi, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=400)
    if not math.isfinite(val) or err > 1e-9 * max(1.0, abs(val)):
        raise QuadratureError(f"{what}: quadrature did not converge (err={err:.3g})")
    return val, err


def _half_period_quadrature(A: float, B: float, e: float) -> tuple[float, float]:
    """int_e^inf dx/sqrt(f) by two smooth substitutions.

    On [e, X] with x = e + t^2 the integrand becomes 2/sqrt(q(e + t^2)),
    q(x) = f(x)/(x - e).  Beyond X = max(e, 0) + 10, u = 1/sqrt(x) gives
    2/sqrt(1 + A u^4 + B u^6).
    """
    X = max(e, 0.0) + 10.0
    c1 = e * e + A

    def near(t):
        x = e + t * t
        return 2.0 / math.sqrt(x * x + e * x + c1)

    def tail(u):
        u2 = u * u
        return 2.0 / math.sqrt(1.0 + A * u2 * u2 + B * u2 * u2 * u2)

    v1, e1 = _quad(near, 0.0, math.sqrt(X - e), "real period (near root)")
    v2, e2 = _quad(tail, 0.0, 1.0 / math.sqrt(X), "real period (tail)")
    return v1 + v2, e1 + e2


def _oval_half_quadrature(e1: float, e2: float, e3: float) -> tuple[float, float]:
    """int_{e3}^{e2} dx/sqrt(f), both endpoint singularities removed."""
    m = 0.5 * (e2 + e3)
    h = math.sqrt(m - e3)

    def left(t):
        x = e3 + t * t
        return 2.0 / math.sqrt((e2 - x) * (e1 - x))

    def right(t):
        x = e2 - t * t
        return 2.0 / math.sqrt((x - e3) * (e1 - x))

    v1, r1 = _quad(left, 0.0, h, "oval period (left)")
    v2, r2 = _quad(right, 0.0, h, "oval period (right)")
    return v1 + v2, r1 + r2


@dataclass(frozen=True)
class PeriodData:
    curve: Curve
    omega: float
    omega_agm: float
    component: str  # one-component | two-component
    e: float
    roots: tuple  # all three roots as complex numbers, real ones first
    omega_bounded: Optional[float]
    omega_bounded_agm: Optional[float]
    imag_period: float  # shortest purely imaginary period of the p-lattice
    lattice_min_norm: float
    series: np.ndarray
    quad_error: float

    @property
    def A(self) -> float:
        return float(self.curve.a)

    @property
    def B(self) -> float:
        return float(self.curve.b)

    @property
    def two_component(self) -> bool:
        return self.component == "two-component"

    @property
    def pole_tol(self) -> float:
        return POLE_TOL_REL * self.omega

    @property
    def real_roots(self) -> tuple:
        return tuple(r.real for r in self.roots if r.imag == 0)


def real_period(c: Curve) -> PeriodData:
    """Real period by substitution-regularized quadrature and by AGM.

    Raises ``QuadratureError`` when the two routes disagree beyond
    1e-10 relative.
    """
    A, B = float(c.a), float(c.b)
    core = 4 * A**3 + 27 * B**2
    if core == 0 or abs(core) <= NEAR_SINGULAR_REL * max(4 * abs(A) ** 3, 27 * B * B):
        raise SingularCurveError("discriminant zero (or numerically zero)")
    reals = [float(r) for r in c.real_roots]
    e = reals[0]
    half, qerr = _half_period_quadrature(A, B, e)
    omega = 2.0 * half
    omega_b = omega_b_agm = None
    if len(reals) == 3:
        e1, e2, e3 = reals
        roots = (complex(e1), complex(e2), complex(e3))
        omega_agm = 2.0 * math.pi / agm(math.sqrt(e1 - e3), math.sqrt(e1 - e2))
        oval, oerr = _oval_half_quadrature(e1, e2, e3)
        omega_b, omega_b_agm = 2.0 * oval, omega_agm
        qerr += oerr
        imag = math.pi / agm(math.sqrt(e1 - e3), math.sqrt(e2 - e3))
        min_norm = min(0.5 * omega, imag)
        component = "two-component"
    else:
        im = math.sqrt(0.75 * e * e + A)
        roots = (complex(e), complex(-0.5 * e, im), complex(-0.5 * e, -im))
        r = math.sqrt(3 * e * e + A)
        omega_agm = 2.0 * math.pi / agm(math.sqrt(r), math.sqrt(0.5 * (r + 1.5 * e)))
        imag = math.pi / agm(math.sqrt(r), math.sqrt(0.5 * (r - 1.5 * e)))
        wl = 0.5 * omega
        min_norm = min(wl, imag, 0.5 * abs(complex(wl, imag)))
        component = "one-component"
    rel = abs(omega - omega_agm) / omega
    if rel > PERIOD_AGREEMENT:
        raise QuadratureError(f"period routes disagree: quad {omega!r} vs AGM {omega_agm!r}")
    return PeriodData(
        curve=c,
        omega=omega,
        omega_agm=omega_agm,
        component=component,
        e=e,
        roots=roots,
        omega_bounded=omega_b,
        omega_bounded_agm=omega_b_agm,
        imag_period=imag,
        lattice_min_norm=min_norm,
        series=series_coefficients(c.to_float()).as_array(),
        quad_error=2 * qerr,
    )


# -- elliptic logarithm ------------------------------------------------------


def _tail_integral(pd: PeriodData, x):
    """int_x^inf dt/sqrt(f(t)) = 2 R_F(x - e1, x - e2, x - e3)."""
    x = np.asarray(x, dtype=float)
    r = pd.roots
    if pd.two_component:
        val = elliprf(x - r[0].real, x - r[1].real, x - r[2].real)
    else:
        val = elliprf(x - r[0], x - r[1], x - r[2]).real
    return 2.0 * val


def _tail_from_offset(pd: PeriodData, d: float) -> float:
    """Tail integral at x = e + d, with the offset d given directly."""
    r = pd.roots
    e = r[0]
    if pd.two_component:
        return 2.0 * float(elliprf(d, d + (e - r[1]).real, d + (e - r[2]).real))
    return 2.0 * float(elliprf(d, d + (e - r[1]), d + (e - r[2])).real)


def _component_of(pd: PeriodData, x: float) -> int:
    tol = 1e-12 * max(1.0, abs(pd.e))
    if x >= pd.e - tol:
        return UNBOUNDED
    if pd.two_component and pd.roots[2].real - tol <= x <= pd.roots[1].real + tol:
        return BOUNDED
    raise PointNotOnCurveError(f"x={x} lies in no real component")


def oval_translate(pd: PeriodData, x, y):
    """Translate by the 2-torsion point (e3, 0); maps each component to the other.

    x' = e3 + K/(x - e3), y' = -y K/(x - e3)^2 with K = (e3 - e1)(e3 - e2).
    """
    e1, e2, e3 = (r.real for r in pd.roots)
    K = (e3 - e1) * (e3 - e2)
    d = np.asarray(x, dtype=float) - e3
    with np.errstate(divide="ignore", invalid="ignore"):
        return e3 + K / d, -np.asarray(y, dtype=float) * K / (d * d)


def elliptic_log(pd: PeriodData, p: Point) -> float:
    """Elliptic log in [0, omega) of a point on the unbounded branch."""
    if p.is_infinity:
        return 0.0
    x, y = float(p.x), float(p.y)
    if _component_of(pd, x) == BOUNDED:
        raise PointOnBoundedComponentError(f"{p!r} lies on the bounded oval")
    e, A = pd.e, pd.A
    d = x - e
    q = x * x + e * x + e * e + A  # f(x) / (x - e)
    K = 3 * e * e + A
    if y != 0 and d < math.sqrt(abs(K)):
        # Near the root x - e is badly conditioned; translate by (e, 0),
        # which adds omega/2, and recover the offset from y instead.
        dt = K * q / (y * y)
        t = _tail_from_offset(pd, dt)
        z = 0.5 * pd.omega - t if y > 0 else 0.5 * pd.omega + t
    elif y == 0:
        z = 0.5 * pd.omega
    else:
        z = _tail_from_offset(pd, max(d, 0.0))
        if y < 0:
            z = pd.omega - z
    return z % pd.omega


def elliptic_log_bounded(pd: PeriodData, p: Point) -> float:
    """Additive coordinate s in [0, omega) of a point on the oval."""
    x, y = float(p.x), float(p.y)
    if _component_of(pd, x) != BOUNDED:
        raise ValueError(f"{p!r} is not on the bounded oval")
    e3 = pd.roots[2].real
    if x <= e3:
        return 0.0
    xt, yt = oval_translate(pd, x, y)
    return elliptic_log(pd, Point(float(xt), float(yt)))


def elliptic_log_any(pd: PeriodData, p: Point) -> tuple[float, int]:
    """``(s, component)`` with component 0 = unbounded branch, 1 = oval."""
    if p.is_infinity:
        return 0.0, UNBOUNDED
    if _component_of(pd, float(p.x)) == BOUNDED:
        return elliptic_log_bounded(pd, p), BOUNDED
    return elliptic_log(pd, p), UNBOUNDED


# -- Weierstrass parametrization ----------------------------------------------


def _series_point(pd: PeriodData, w: np.ndarray):
    """(p(w), p'(w)) from the truncated Laurent series, w small."""
    a = pd.series
    w2 = w * w
    s = np.zeros_like(w)
    d = np.zeros_like(w)
    for n in range(len(a), 0, -1):
        s = s * w2 + a[n - 1]
        d = d * w2 + 2 * n * a[n - 1]
    wp = 1.0 / w2 + s * w2
    dwp = -2.0 / (w2 * w) + d * w
    return wp, dwp


def wp_eval_many(pd: PeriodData, z) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized point (x, y) with elliptic log ``z`` on the unbounded branch.

    Arguments are reduced mod omega; z = 0 maps to (inf, inf).  The series is
    evaluated at w/2^k inside half the lattice's shortest vector and the
    result is doubled k times with the group law.
    """
    z = np.mod(np.asarray(z, dtype=float), pd.omega)
    flip = z > 0.5 * pd.omega
    zz = np.where(flip, pd.omega - z, z)
    w = 0.5 * zz
    wmax = float(np.max(w)) if w.size else 0.0
    k = 0
    limit = 0.5 * pd.lattice_min_norm
    while wmax / 2**k > limit:
        k += 1
    w0 = w / 2.0**k
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x, dwp = _series_point(pd, w0)
        # the sign puts small z on the y > 0 sheet
        y = -0.5 * dwp
        A = pd.A
        for _ in range(k):
            lam = (3.0 * x * x + A) / (2.0 * y)
            x3 = lam * lam - 2.0 * x
            y = lam * (x - x3) - y
            x = x3
    y = np.where(flip, -y, y)
    zero = zz == 0
    if np.any(zero):
        x = np.where(zero, np.inf, x)
        y = np.where(zero, np.inf, y)
    return x, y


def wp_eval(pd: PeriodData, z: float) -> tuple[float, float]:
    """Curve point with elliptic log ``z``; raises near the pole."""
    zr = float(z) % pd.omega
    if zr < pd.pole_tol or pd.omega - zr < pd.pole_tol:
        raise PoleProximityError(f"z={z} is within pole_tol of a lattice point")
    x, y = wp_eval_many(pd, np.array([zr]))
    return float(x[0]), float(y[0])


def point_at(pd: PeriodData, s: float, component: int = UNBOUNDED) -> Point:
    """Float point with additive coordinate ``(s, component)``."""
    x, y = wp_eval(pd, s)
    if component == BOUNDED:
        x, y = oval_translate(pd, x, y)
        x, y = float(x), float(y)
    return Point(x, y)
