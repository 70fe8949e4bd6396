"""Measures on the real locus and their distribution functions.

``PushforwardMeasure`` is the law of x-coordinates of an equidistributed
elliptic-log sequence on the unbounded branch,

    F(t) = (2/omega) int_e^t dx / sqrt(x^3 + A x + B),

``TwoComponentMeasure`` splits mass evenly between the unbounded branch and
the oval, and ``ArcLengthMeasure`` is plain arc length along the graph of
y = sqrt(x^3 + A x + B), which has infinite total mass.

The distribution functions use the closed form
int_t^inf dx/sqrt(f) = 2 R_F(t - e1, t - e2, t - e3), so they are exact to
rounding and vectorize over numpy arrays.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .analytic import PeriodData, _tail_integral, oval_translate, wp_eval
from .errors import QuadratureError
from .quadrature import filon_fourier
from .report import csv_text, write_atomic

HORIZON_TAIL = 1e-9
FOURIER_CUTOFF = 1e6


@dataclass(frozen=True)
class PushforwardMeasure:
    pd: PeriodData

    def survival(self, t):
        """1 - F(t), computed directly (no cancellation for large t)."""
        t = np.maximum(np.asarray(t, dtype=float), self.pd.e)
        out = 2.0 * _tail_integral(self.pd, t) / self.pd.omega
        out = np.where(np.isinf(t), 0.0, out)
        return float(out) if out.ndim == 0 else out

    def cdf(self, t):
        """Vectorized F(t); values at or below e map to 0."""
        t = np.asarray(t, dtype=float)
        out = np.where(t <= self.pd.e, 0.0, 1.0 - np.asarray(self.survival(t)))
        return float(out) if out.ndim == 0 else out

    @cached_property
    def horizon(self) -> float:
        """Smallest power-of-two offset x_h = e + 2^j with 1 - F(x_h) < 1e-9."""
        j = 0
        while self.survival(self.pd.e + 2.0**j) >= HORIZON_TAIL:
            j += 1
        return self.pd.e + 2.0**j

    def cdf_grid(self, n: int = 400, upper: Optional[float] = None) -> tuple[np.ndarray, np.ndarray]:
        """Grid (x, F) with x - e spaced geometrically up to ``upper``."""
        upper = upper if upper is not None else min(self.horizon, self.pd.e + 1e6)
        off = np.geomspace(1e-6, upper - self.pd.e, n - 1)
        x = np.concatenate([[self.pd.e], self.pd.e + off])
        return x, np.asarray(self.cdf(x))

    def export_csv(self, path, n: int = 400) -> None:
        x, F = self.cdf_grid(n)
        write_atomic(path, csv_text(["x", "F"], zip(x, F)))

    def fourier_coefficient(self, k: float) -> tuple[complex, float]:
        """``(c, err)`` with c = int exp(2 pi i k x) dmu(x).

        Near e the substitution x = e + t^2 and adaptive quadrature handle the
        root singularity; from there on Filon panels that double in length
        run out to 1e6 (relative to e), and the rest comes from three terms of
        integration by parts with a bound on the remainder.
        """
        pd = self.pd
        alpha = 2.0 * math.pi * k
        if alpha == 0:
            return 1.0 + 0j, 0.0
        e, A, B = pd.e, pd.A, pd.B
        d = min(1.0, 8.0 / abs(alpha))
        c1 = e * e + A

        def near_re(t):
            x = e + t * t
            return 2.0 * math.cos(alpha * x) / math.sqrt(x * x + e * x + c1)

        def near_im(t):
            x = e + t * t
            return 2.0 * math.sin(alpha * x) / math.sqrt(x * x + e * x + c1)

        opts = dict(epsabs=1e-14, epsrel=1e-12, limit=400)
        with warnings.catch_warnings():
            # roundoff at this tolerance is expected; the error estimate is kept
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            vr, er = integrate.quad(near_re, 0.0, math.sqrt(d), **opts)
            vi, ei = integrate.quad(near_im, 0.0, math.sqrt(d), **opts)
        total = complex(vr, vi)
        err = er + ei

        def g(x):
            return 1.0 / np.sqrt(x * x * x + A * x + B)

        lo = d
        stop = FOURIER_CUTOFF
        while lo < stop:
            hi = min(2.0 * lo, stop)
            v, pe = filon_fourier(g, e + lo, e + hi, alpha)
            total += v
            err += pe
            lo = hi
        X = e + stop
        f = X**3 + A * X + B
        f1 = 3 * X * X + A
        f2 = 6 * X
        g0 = f**-0.5
        g1 = -0.5 * f1 * f**-1.5
        g2 = 0.75 * f1 * f1 * f**-2.5 - 0.5 * f2 * f**-1.5
        ia = 1j * alpha
        total += -np.exp(ia * X) * (g0 / ia - g1 / ia**2 + g2 / ia**3)
        # remainder is (i alpha)^-3 int exp(i alpha x) g''' dx, and |g'''| integrates to |g''(X)|
        err += abs(g2) / abs(alpha) ** 3
        scale = 2.0 / pd.omega
        val = complex(scale * total)
        if not (math.isfinite(val.real) and math.isfinite(val.imag)):
            raise QuadratureError(f"fourier coefficient at k={k} is not finite")
        return val, scale * err


@dataclass(frozen=True)
class TwoComponentMeasure:
    """Half the mass on the unbounded branch, half on the oval."""

    pd: PeriodData

    def __post_init__(self):
        if not self.pd.two_component:
            raise ValueError("two-component measure needs a curve with positive discriminant")

    @property
    def unbounded(self) -> PushforwardMeasure:
        return PushforwardMeasure(self.pd)

    def oval_cdf(self, t):
        """(2/omega_b) int_{e3}^t dx/sqrt(|f|) on [e3, e2].

        Translation by (e3, 0) carries the oval onto [e1, inf) and preserves
        dx/y, so the oval CDF is a tail integral of the unbounded branch.
        """
        e1, e2, e3 = self.pd.real_roots
        t = np.clip(np.asarray(t, dtype=float), e3, e2)
        with np.errstate(divide="ignore"):
            xt, _ = oval_translate(self.pd, t, np.zeros_like(t))
        xt = np.where(t <= e3, np.inf, xt)
        tail = np.where(np.isinf(xt), 0.0, _tail_integral(self.pd, np.where(np.isinf(xt), e1, xt)))
        out = 2.0 * tail / self.pd.omega_bounded
        return float(out) if out.ndim == 0 else out

    def component_cdf(self, component: str):
        if component == "unbounded":
            return self.unbounded.cdf
        if component == "bounded":
            return self.oval_cdf
        raise ValueError(f"unknown component {component!r}")

    def mu_plus_mass(self, component: str, a: float = -math.inf, b: float = math.inf) -> float:
        """Mass of the x-interval [a, b] on one component."""
        F = self.component_cdf(component)
        e1, e2, e3 = self.pd.real_roots
        lo_edge = e1 if component == "unbounded" else e3
        a = max(a, lo_edge)
        if component == "bounded":
            b = min(b, e2)
        if b <= a:
            return 0.0
        Fb = 1.0 if math.isinf(b) else float(F(b))
        return 0.5 * (Fb - float(F(a)))

    def total_mass(self) -> float:
        return self.mu_plus_mass("unbounded") + self.mu_plus_mass("bounded")


def graph_arc_density(dydx):
    """sqrt(1 + (dy/dx)^2), the arc-length density of a graph."""
    return np.sqrt(1.0 + np.square(dydx))


def parametric_mass(speed: Callable, t0: float, t1: float) -> float:
    """int_{t0}^{t1} ||gamma'(t)|| dt for a speed function of t."""
    val, _ = integrate.quad(speed, t0, t1, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


@dataclass(frozen=True)
class ArcLengthMeasure:
    """Arc length along y = +sqrt(f(x)) over x-intervals of [e, inf)."""

    pd: PeriodData

    def _integrand_t(self, t: float) -> float:
        # x = e + t^2 turns sqrt(1 + y'^2) dx into sqrt(4 t^2 + f'(x)^2 / q(x)) dt
        e, A = self.pd.e, self.pd.A
        x = e + t * t
        q = x * x + e * x + e * e + A
        fp = 3 * x * x + A
        return math.sqrt(4 * t * t + fp * fp / q)

    def mu_gamma_mass(self, a: float, b: float) -> float:
        e = self.pd.e
        if not (a >= e and b >= a) or math.isinf(b):
            raise ValueError(f"interval [{a}, {b}] outside the domain [e, inf)")
        if a == b:
            return 0.0
        ta, tb = math.sqrt(a - e), math.sqrt(b - e)
        # break points keep the integrand polynomial-scale on each piece
        pts = [ta]
        while pts[-1] * 2 < tb:
            pts.append(max(pts[-1] * 2, pts[-1] + 1.0))
        pts.append(tb)
        total = 0.0
        for lo, hi in zip(pts[:-1], pts[1:]):
            v, err = integrate.quad(self._integrand_t, lo, hi, epsabs=0, epsrel=1e-13, limit=200)
            if err > 1e-9 * max(abs(v), 1.0):
                raise QuadratureError("arc-length quadrature did not converge")
            total += v
        return total

    def window_edge(self, a_k: float) -> float:
        """x-coordinate X_k bounding the x-image [e, X_k] of (omega/2 - a_k, omega/2 + a_k)."""
        half = 0.5 * self.pd.omega
        if not 0 <= a_k < half:
            raise ValueError("window half-width must lie in [0, omega/2)")
        if a_k == 0:
            return self.pd.e
        return wp_eval(self.pd, half - a_k)[0]


def halving_windows(omega: float, count: int) -> list[float]:
    """Half-widths a_k = (omega/2)(1 - 2^-k), k = 1..count."""
    return [0.5 * omega * (1.0 - 2.0**-k) for k in range(1, count + 1)]


def harmonic_windows(omega: float, count: int) -> list[float]:
    """Half-widths a_k = (omega/2)(1 - 1/(k+1)), k = 1..count."""
    return [0.5 * omega * (1.0 - 1.0 / (k + 1)) for k in range(1, count + 1)]


def circle_speed(t: float) -> float:
    """||gamma'(t)|| for gamma(t) = (sin 2 pi t, cos 2 pi t)."""
    return math.hypot(2 * math.pi * math.cos(2 * math.pi * t), -2 * math.pi * math.sin(2 * math.pi * t))


def polyline_length(xs, ys) -> float:
    return float(np.sum(np.hypot(np.diff(xs), np.diff(ys))))
