"""Elliptic-curve arithmetic on short Weierstrass models y^2 = x^3 + a x + b.

Two backends share one interface.  A curve whose coefficients are ints or
``Fraction`` objects is *exact*: every coordinate is a ``Fraction`` and all
comparisons are exact.  A curve with a float coefficient is a float curve and
membership is checked against a scaled residual tolerance.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Optional, Union

from .errors import (
    BackendError,
    NumericOverflowError,
    PointNotOnCurveError,
    SingularCurveError,
)

Number = Union[Fraction, float]

ROOT_TOL = 1e-12
RESIDUAL_TOL = 1e-9
# float curves with |4a^3+27b^2| below this fraction of its terms are rejected
NEAR_SINGULAR_REL = 1e-10
MAZUR_BOUND = 12

_INT_RE = re.compile(r"^[+-]?\d+$")
_FRAC_RE = re.compile(r"^([+-]?\d+)\s*/\s*(\d+)$")


def parse_number(text) -> Number:
    """Parse an integer, a fraction ``"p/q"`` or a decimal float.

    Integers and fractions come back as ``Fraction``; anything else as float.
    """
    if isinstance(text, (Fraction, int)) and not isinstance(text, bool):
        return Fraction(text)
    if isinstance(text, float):
        return text
    s = str(text).strip()
    if _INT_RE.match(s):
        return Fraction(int(s))
    m = _FRAC_RE.match(s)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), den)
    try:
        return float(s)
    except ValueError:
        raise ValueError(f"not a number: {text!r}") from None


def _is_exact(v) -> bool:
    return isinstance(v, Fraction)


@dataclass(frozen=True)
class Point:
    """Affine point ``(x, y)``; ``Point()`` is the point at infinity."""

    x: Optional[Number] = None
    y: Optional[Number] = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def as_float(self) -> "Point":
        if self.is_infinity:
            return self
        return Point(float(self.x), float(self.y))

    def __repr__(self) -> str:
        if self.is_infinity:
            return "Point(infinity)"
        return f"Point({self.x}, {self.y})"


INFINITY = Point()


@dataclass(frozen=True)
class Curve:
    """Nonsingular curve y^2 = x^3 + a x + b over Q (exact) or R (float)."""

    a: Number
    b: Number
    root_tol: float = field(default=ROOT_TOL, compare=False)
    residual_tol: float = field(default=RESIDUAL_TOL, compare=False)

    def __post_init__(self):
        a, b = parse_number(self.a), parse_number(self.b)
        if not (_is_exact(a) and _is_exact(b)):
            a, b = float(a), float(b)
            if not (math.isfinite(a) and math.isfinite(b)):
                raise ValueError("curve coefficients must be finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        core = 4 * a**3 + 27 * b**2
        if core == 0:
            raise SingularCurveError(f"discriminant zero for a={a}, b={b}")
        if not self.exact:
            scale = max(4 * abs(a) ** 3, 27 * b * b)
            if abs(core) <= NEAR_SINGULAR_REL * scale:
                raise SingularCurveError(
                    f"discriminant effectively zero for a={a}, b={b}"
                )

    @property
    def exact(self) -> bool:
        return _is_exact(self.a)

    @property
    def disc(self) -> Number:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    @property
    def two_components(self) -> bool:
        return self.disc > 0

    def rhs(self, x):
        return x * x * x + self.a * x + self.b

    @cached_property
    def real_roots(self) -> tuple:
        """Real roots of x^3 + a x + b, largest first.

        Exact curves report rational roots as ``Fraction`` values.
        """
        a, b = float(self.a), float(self.b)
        if self.disc > 0:
            r = math.sqrt(-a / 3.0)
            arg = (3.0 * b / (2.0 * a)) * math.sqrt(-3.0 / a)
            theta = math.acos(max(-1.0, min(1.0, arg))) / 3.0
            roots = [2 * r * math.cos(theta - 2 * math.pi * k / 3) for k in range(3)]
        else:
            d = b * b / 4.0 + a**3 / 27.0
            t = -b / 2.0 - math.copysign(math.sqrt(d), b) if b != 0 else math.sqrt(d)
            u = math.copysign(abs(t) ** (1.0 / 3.0), t)
            roots = [u - a / (3.0 * u) if u != 0 else 0.0]
        roots = [self._polish(x) for x in roots]
        roots.sort(reverse=True)
        if self.exact:
            roots = [self._rationalize(x) for x in roots]
        return tuple(roots)

    def _polish(self, x: float) -> float:
        a, b = float(self.a), float(self.b)
        for _ in range(2):
            d = 3 * x * x + a
            if d == 0:
                break
            step = (x * x * x + a * x + b) / d
            x -= step
        return x

    def _rationalize(self, x: float):
        # a rational root of the integral model X^3 + A X + B is an integer
        u, _, _ = integral_model(self)
        cand = round(x * u * u)
        r = Fraction(cand, u * u)
        return r if self.rhs(r) == 0 else x

    @property
    def e(self) -> Number:
        """Largest real root (left end of the unbounded component)."""
        return self.real_roots[0]

    def residual(self, p: Point) -> float:
        return abs(p.y * p.y - self.rhs(p.x))

    def contains(self, p: Point) -> bool:
        if p.is_infinity:
            return True
        if self.exact:
            if not (_is_exact(p.x) and _is_exact(p.y)):
                return False
            return p.y * p.y == self.rhs(p.x)
        x, y = float(p.x), float(p.y)
        if not (math.isfinite(x) and math.isfinite(y)):
            return False
        scale = max(1.0, y * y, abs(x) ** 3, abs(self.a * x), abs(self.b))
        return abs(y * y - self.rhs(x)) <= self.residual_tol * scale

    def check(self, p: Point) -> None:
        if not self.contains(p):
            raise PointNotOnCurveError(f"{p!r} is not on y^2 = x^3 + {self.a}x + {self.b}")

    def point(self, x, y) -> Point:
        """Build a point in this curve's backend and check membership."""
        x, y = parse_number(x), parse_number(y)
        if self.exact:
            if not (_is_exact(x) and _is_exact(y)):
                raise BackendError("exact curve needs rational coordinates")
        else:
            x, y = float(x), float(y)
        p = Point(x, y)
        self.check(p)
        return p

    def lift_x(self, x, sign: int = 1) -> Point:
        """Float point with abscissa ``x`` and ``sign(y) == sign``."""
        x = float(parse_number(x))
        v = float(self.rhs(x)) if not self.exact else float(self.rhs(Fraction(x)))
        if v < 0:
            # rounding can push f slightly negative at a root
            if -v > self.residual_tol * max(1.0, abs(x) ** 3, abs(float(self.b))):
                raise PointNotOnCurveError(f"no real point with x={x}")
            v = 0.0
        return Point(x, math.copysign(math.sqrt(v), sign))

    def to_float(self) -> "Curve":
        if not self.exact:
            return self
        return Curve(float(self.a), float(self.b), self.root_tol, self.residual_tol)

    def scaled(self, u) -> "Curve":
        """Isomorphic model y^2 = x^3 + (a/u^4) x + b/u^6."""
        u = parse_number(u)
        return Curve(self.a / u**4, self.b / u**6, self.root_tol, self.residual_tol)


def scale_point(p: Point, u) -> Point:
    """Image of ``p`` under (x, y) -> (x/u^2, y/u^3), matching ``Curve.scaled``."""
    if p.is_infinity:
        return p
    u = parse_number(u)
    if not (_is_exact(p.x) and _is_exact(u)):
        u = float(u)
    return Point(p.x / u**2, p.y / u**3)


def negate(c: Curve, p: Point) -> Point:
    if p.is_infinity:
        return p
    return Point(p.x, -p.y)


def _finite(p: Point) -> Point:
    if not p.is_infinity and isinstance(p.x, float):
        if not (math.isfinite(p.x) and math.isfinite(p.y)):
            raise NumericOverflowError("float group law produced a non-finite coordinate")
    return p


def _add(c: Curve, p: Point, q: Point) -> Point:
    if p.is_infinity:
        return q
    if q.is_infinity:
        return p
    x1, y1, x2, y2 = p.x, p.y, q.x, q.y
    if x1 == x2:
        if c.exact:
            opposite = y1 == -y2
        else:
            opposite = abs(y1 + y2) <= c.residual_tol * max(1.0, abs(y1))
        if opposite:
            return INFINITY
        # doubling; y1 != 0 here since y1 == -y2 would have caught it
        lam = (3 * x1 * x1 + c.a) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    y3 = lam * (x1 - x3) - y1
    return _finite(Point(x3, y3))


def _mul(c: Curve, n: int, p: Point) -> Point:
    if n < 0:
        n, p = -n, negate(c, p)
    result = INFINITY
    addend = p
    while n:
        if n & 1:
            result = _add(c, result, addend)
        n >>= 1
        if n:
            addend = _add(c, addend, addend)
    return result


def add(c: Curve, p: Point, q: Point) -> Point:
    """Chord-tangent sum ``p + q``."""
    c.check(p)
    c.check(q)
    return _add(c, p, q)


def scalar_mul(c: Curve, n: int, p: Point) -> Point:
    """``[n]p`` by double-and-add; negative ``n`` negates first."""
    c.check(p)
    return _mul(c, int(n), p)


def sequence_iter(c: Curve, p: Point, schedule: Iterable[int]) -> Iterator[Point]:
    """Yield ``[s]p`` for each integer ``s`` of ``schedule`` in order.

    Consecutive schedule values are reached incrementally: the step from
    ``s_prev`` to ``s`` adds ``[s - s_prev]p``, which for the linear schedule
    is a single addition of ``p``.
    """
    c.check(p)
    prev_n, prev = 0, INFINITY
    steps: dict[int, Point] = {}
    for s in schedule:
        s = int(s)
        delta = s - prev_n
        if delta not in steps:
            steps[delta] = _mul(c, delta, p)
            if len(steps) > 64:
                steps.pop(next(iter(steps)))
        prev = _add(c, prev, steps[delta])
        prev_n = s
        yield prev


@dataclass(frozen=True)
class TorsionVerdict:
    is_torsion: bool
    order: Optional[int]
    method: str  # nagell-lutz-coordinates | nagell-lutz-discriminant | multiple-reached-infinity | order-exceeds-mazur


def integral_model(c: Curve) -> tuple[int, int, int]:
    """Return ``(u, A, B)`` with A = u^4 a, B = u^6 b integral.

    ``u`` is the lcm of the coefficient denominators, not necessarily minimal;
    Nagell-Lutz holds on any integral model.
    """
    if not c.exact:
        raise BackendError("integral model needs the exact backend")
    u = math.lcm(c.a.denominator, c.b.denominator)
    A = c.a * u**4
    B = c.b * u**6
    return u, int(A), int(B)


def _integral_coords(p: Point, u: int) -> Optional[tuple[int, int]]:
    X, Y = p.x * u * u, p.y * u**3
    if X.denominator != 1 or Y.denominator != 1:
        return None
    return int(X), int(Y)


def classify_torsion(c: Curve, p: Point) -> TorsionVerdict:
    """Decide whether a rational point has finite order.

    A Nagell-Lutz screen on the integral model may reject torsion outright;
    otherwise multiples up to Mazur's bound 12 are computed exactly, and
    every multiple is screened for integrality along the way.
    """
    if not c.exact:
        raise BackendError("torsion classification needs the exact rational backend")
    c.check(p)
    if p.is_infinity:
        return TorsionVerdict(True, 1, "multiple-reached-infinity")
    u, A, B = integral_model(c)
    disc_int = -16 * (4 * A**3 + 27 * B**2)
    xy = _integral_coords(p, u)
    if xy is None:
        return TorsionVerdict(False, None, "nagell-lutz-coordinates")
    if xy[1] != 0 and disc_int % (xy[1] ** 2) != 0:
        return TorsionVerdict(False, None, "nagell-lutz-discriminant")
    q = p
    for m in range(2, MAZUR_BOUND + 1):
        q = _add(c, q, p)
        if q.is_infinity:
            return TorsionVerdict(True, m, "multiple-reached-infinity")
        if _integral_coords(q, u) is None:
            return TorsionVerdict(False, None, "nagell-lutz-coordinates")
    return TorsionVerdict(False, None, "order-exceeds-mazur")
