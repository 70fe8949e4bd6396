"""Weyl sums for the orbit n*z on a complex torus C / [tau, 1].

A point ``w`` of the plane has lattice coordinates ``(x1, x2)`` with
``w = x1*tau + x2``.  In row-vector form ``(x2, x1) @ A`` gives the real
coordinates of ``w``, where ``A = [[1, 0], [tau_x, tau_y]]``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .parallel import pmap

INT_TOL = 1e-9
AXIS_TOL = 1e-12
DEFAULT_WINDOW = 8

FAMILIES = ("real-axis", "tau-axis", "diagonal")


def parse_complex(text: str) -> complex:
    """Parse ``"0.3+1.1i"``, ``"2i"``, ``"-1.5"`` and friends."""
    s = str(text).strip().replace(" ", "")
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise ValueError(f"not a complex number: {text!r}") from None


@dataclass(frozen=True)
class Lattice:
    tau: complex

    def __post_init__(self):
        tau = complex(self.tau)
        if not tau.imag > 0:
            raise ValueError(f"lattice needs Im(tau) > 0, got {tau}")
        object.__setattr__(self, "tau", tau)

    @property
    def tau_x(self) -> float:
        return self.tau.real

    @property
    def tau_y(self) -> float:
        return self.tau.imag

    @cached_property
    def basis_matrix(self) -> np.ndarray:
        return np.array([[1.0, 0.0], [self.tau_x, self.tau_y]])

    @cached_property
    def basis_matrix_inv(self) -> np.ndarray:
        return np.array([[1.0, 0.0], [-self.tau_x / self.tau_y, 1.0 / self.tau_y]])

    def coords(self, z):
        """Lattice coordinates ``(x1, x2)`` of ``z = x1*tau + x2``."""
        z = np.asarray(z, dtype=complex)
        x1 = z.imag / self.tau_y
        x2 = z.real - x1 * self.tau_x
        return x1, x2


@dataclass(frozen=True)
class LatticeFrequency:
    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 == 0 and self.n2 == 0:
            raise ValueError("frequency (0, 0) is excluded")

    def vector(self, lat: Lattice) -> tuple[float, float]:
        """Real-plane frequency vector (n1, (n2 - n1*tau_x)/tau_y)."""
        return float(self.n1), (self.n2 - self.n1 * lat.tau_x) / lat.tau_y


def frequency_window(K: int = DEFAULT_WINDOW) -> list[LatticeFrequency]:
    return [
        LatticeFrequency(n1, n2)
        for n1 in range(-K, K + 1)
        for n2 in range(-K, K + 1)
        if (n1, n2) != (0, 0)
    ]


def _frac(x, snap: float):
    f = x - np.floor(x)
    return np.where((f < snap) | (f > 1.0 - snap), 0.0, f)


def reduce_mod_lattice(lat: Lattice, z, snap: float = AXIS_TOL):
    """Representative of ``z`` in the fundamental parallelogram.

    Both lattice coordinates of the result lie in [0, 1); coordinates within
    ``snap`` of an integer are snapped to 0.
    """
    x1, x2 = lat.coords(z)
    r = _frac(x1, snap) * lat.tau + _frac(x2, snap)
    return complex(r) if np.ndim(r) == 0 else r


def fourier_atom(lat: Lattice, f: LatticeFrequency, z):
    """exp(2 pi i (n1 x + (n2 - n1 tau_x)/tau_y * y)) at ``z = x + iy``."""
    fx, fy = f.vector(lat)
    z = np.asarray(z, dtype=complex)
    return np.exp(2j * np.pi * (fx * z.real + fy * z.imag))


def k_value(lat: Lattice, z, f: LatticeFrequency):
    """k(n1, n2) = n1 z_x + ((n2 - n1 tau_x)/tau_y) z_y."""
    fx, fy = f.vector(lat)
    z = np.asarray(z, dtype=complex)
    k = fx * z.real + fy * z.imag
    return float(k) if k.ndim == 0 else k


def is_integer(k: float, tol: float = INT_TOL) -> bool:
    return abs(k - round(k)) <= tol


def geometric_bound(k: float, N: int) -> float:
    """(1/N) * 2/|e^{2 pi i k} - 1|; infinite when k is an integer."""
    d = abs(cmath.exp(2j * math.pi * k) - 1.0)
    return math.inf if d == 0 else 2.0 / (N * d)


def lattice_weyl_sum(lat: Lattice, z: complex, f: LatticeFrequency, N: int) -> complex:
    """(1/N) sum_{n<N} exp(2 pi i k(n1, n2)(w_n)) over reduced w_n = n z mod L."""
    if N < 1:
        raise ValueError("N must be >= 1")
    # lattice coordinates of n*z are n times those of z; reduce them directly
    x1, x2 = lat.coords(z)
    n = np.arange(N, dtype=np.float64)
    c1 = _frac(n * float(x1), 0.0)
    c2 = _frac(n * float(x2), 0.0)
    w = c1 * lat.tau + c2
    phase = k_value(lat, w, f)
    return complex(np.mean(np.exp(2j * np.pi * phase)))


def degenerate_family(lat: Lattice, z: complex, tol: float = AXIS_TOL) -> frozenset:
    """Which degenerate families (real axis, tau axis, diagonal) contain ``z``."""
    z = complex(z)
    out = set()
    if abs(z.imag) <= tol:
        out.add("real-axis")
    t = lat.tau
    if abs(z.real * t.imag - z.imag * t.real) <= tol * max(1.0, abs(t)):
        out.add("tau-axis")
    d = t + 1
    if abs(z.real * d.imag - z.imag * d.real) <= tol * max(1.0, abs(d)):
        out.add("diagonal")
    return frozenset(out) if out else frozenset({"none"})


def family_frequencies(family: str, K: int = DEFAULT_WINDOW) -> list[LatticeFrequency]:
    """Frequencies on which a degenerate family has k(n1, n2) = 0."""
    ns = [n for n in range(-K, K + 1) if n != 0]
    if family == "real-axis":
        return [LatticeFrequency(0, n) for n in ns]
    if family == "tau-axis":
        return [LatticeFrequency(n, 0) for n in ns]
    if family == "diagonal":
        return [LatticeFrequency(n, -n) for n in ns]
    raise ValueError(f"unknown family {family!r}")


@dataclass(frozen=True)
class WindowEntry:
    freq: LatticeFrequency
    k: float
    k_integer: bool
    weyl: complex
    bound: float

    @property
    def modulus(self) -> float:
        return abs(self.weyl)

    @property
    def within_bound(self) -> bool:
        if self.k_integer:
            return abs(self.modulus - 1.0) <= 1e-9
        return self.modulus <= self.bound * (1 + 1e-9) + 1e-15


def weyl_window(
    lat: Lattice,
    z: complex,
    N: int,
    freqs: Iterable[LatticeFrequency] | None = None,
    workers: int | None = None,
) -> list[WindowEntry]:
    """Lattice Weyl sums over a frequency window, evaluated concurrently."""
    freqs = list(freqs) if freqs is not None else frequency_window()

    def one(f: LatticeFrequency) -> WindowEntry:
        k = k_value(lat, z, f)
        return WindowEntry(f, k, is_integer(k), lattice_weyl_sum(lat, z, f, N), geometric_bound(k, N))

    return pmap(one, freqs, workers)
