"""Point sequences in elliptic-log space and the statistics run on them.

A seed P with elliptic log z is stored as u = z/omega.  The n-th sample of a
schedule p is the phase frac(p(n) * u), computed exactly from the binary
expansion of u: a double u = m / 2^E with E <= 64 needs only wrapping
uint64 products, so a million-term sequence carries no accumulated rounding.
Torsion seeds found by the exact backend are snapped to the rational j/order
they approximate, so their orbits are exactly periodic.

Statistics: Weyl sums of the phases, KS distances against the uniform law
and against the pushforward law of the x-coordinates, an arc-length window
diagnostic, and the fractional-part suite for x mod 1.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .analytic import (
    BOUNDED,
    PeriodData,
    classify_monotonicity,
    elliptic_log_any,
    oval_translate,
    real_period,
    wp_eval_many,
)
from .ec_core import Curve, Point, TorsionVerdict, classify_torsion, scale_point, sequence_iter
from .errors import SeedNotEquidistributedError
from .measures import (
    ArcLengthMeasure,
    PushforwardMeasure,
    TwoComponentMeasure,
    halving_windows,
)
from .parallel import pmap

SNAP_TOL = 1e-6
KS_COEFF = 2.0
HALF_CELLS = 100_000


def weyl_threshold(N: int) -> float:
    return 5.0 / math.sqrt(N)


def bias_floor(N: int) -> float:
    return 10.0 * weyl_threshold(N)


def ks_threshold(N: int) -> float:
    """Acceptance level for KS distances, a little above the 1% asymptote 1.63/sqrt(N)."""
    return KS_COEFF / math.sqrt(N)


# -- schedules -----------------------------------------------------------------

_TERM_RE = re.compile(r"^([+-]?\d*)\*?(n(?:\^(\d+))?)?$")


@dataclass(frozen=True)
class Schedule:
    """Monic integer polynomial, coefficients from the leading one down."""

    coeffs: tuple = (1, 0)

    def __post_init__(self):
        cs = tuple(self.coeffs)
        if len(cs) < 2:
            raise ValueError("schedule polynomial must have degree >= 1")
        if any(not isinstance(c, (int, np.integer)) or isinstance(c, bool) for c in cs):
            raise ValueError("schedule coefficients must be integers")
        if cs[0] != 1:
            raise ValueError("schedule polynomial must be monic")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in cs))

    @classmethod
    def linear(cls) -> "Schedule":
        return cls((1, 0))

    @classmethod
    def parse(cls, text) -> "Schedule":
        """Accept ``linear``, a coefficient list ``1,1,0`` or ``n^3+2n``."""
        if isinstance(text, Schedule):
            return text
        if isinstance(text, (list, tuple)):
            return cls(tuple(int(c) for c in text))
        s = str(text).strip().replace(" ", "")
        if s in ("", "linear", "n"):
            return cls.linear()
        if "n" not in s:
            return cls(tuple(int(c) for c in s.split(",")))
        terms: dict[int, int] = {}
        for tok in re.findall(r"[+-]?[^+-]+", s):
            m = _TERM_RE.match(tok)
            if not m:
                raise ValueError(f"cannot parse schedule term {tok!r}")
            cs, var, power = m.groups()
            coef = int(cs) if cs not in ("", "+", "-") else (-1 if cs == "-" else 1)
            deg = 0 if not var else int(power or 1)
            terms[deg] = terms.get(deg, 0) + coef
        d = max(terms)
        return cls(tuple(terms.get(i, 0) for i in range(d, -1, -1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_linear(self) -> bool:
        return self.coeffs == (1, 0)

    def __call__(self, n: int) -> int:
        acc = 0
        for c in self.coeffs:
            acc = acc * n + c
        return acc

    def mod(self, n: np.ndarray, q: int) -> np.ndarray:
        """p(n) mod q elementwise, for q < 2^31."""
        nn = np.asarray(n, dtype=np.int64) % q
        acc = np.zeros_like(nn)
        for c in self.coeffs:
            acc = (acc * nn + (c % q)) % q
        return acc

    def wrap64(self, n: np.ndarray) -> np.ndarray:
        """p(n) mod 2^64 by wrapping uint64 Horner steps."""
        nn = np.asarray(n, dtype=np.uint64)
        acc = np.zeros_like(nn)
        for c in self.coeffs:
            acc = acc * nn + np.uint64(c % 2**64)
        return acc

    @property
    def label(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            d = self.degree - i
            if c == 0:
                continue
            mono = "" if d == 0 else ("n" if d == 1 else f"n^{d}")
            mag = abs(c)
            body = f"{mag}{mono}" if (mag != 1 or d == 0) else mono
            parts.append(("-" if c < 0 else "+") + body)
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out


def phases_of(u: Fraction, schedule: Schedule, n: np.ndarray) -> np.ndarray:
    """frac(p(n) * u) as float64, exact up to the final rounding."""
    num, den = u.numerator % u.denominator, u.denominator
    if num == 0:
        return np.zeros(len(n))
    if den & (den - 1) == 0 and den <= 2**64:
        E = den.bit_length() - 1
        r = schedule.wrap64(n) * np.uint64(num)
        if E < 64:
            r = r & np.uint64(den - 1)
        ph = r.astype(np.float64) * 2.0**-E
    elif den < 2**31:
        r = (schedule.mod(n, den) * num) % den
        ph = r.astype(np.float64) / den
    else:
        ph = np.array([((schedule(int(k)) * num) % den) / den for k in n], dtype=float)
    return np.where(ph >= 1.0, ph - 1.0, ph)


# -- sequences and their generation ------------------------------------------------


@dataclass(frozen=True)
class SequenceSpec:
    curve: Curve
    seed: Point
    schedule: Schedule = field(default_factory=Schedule.linear)
    N: int = 1000
    space: str = "elliptic-log"

    def __post_init__(self):
        if int(self.N) < 1:
            raise ValueError("N must be >= 1")
        if self.space not in ("elliptic-log", "point"):
            raise ValueError(f"unknown sample space {self.space!r}")
        object.__setattr__(self, "schedule", Schedule.parse(self.schedule))
        self.curve.check(self.seed)


@dataclass
class Samples:
    spec: SequenceSpec
    pd: PeriodData
    u: Fraction
    seed_component: int
    phases: np.ndarray
    components: np.ndarray
    torsion: Optional[TorsionVerdict] = None
    warnings: list = field(default_factory=list)

    @property
    def N(self) -> int:
        return len(self.phases)

    @property
    def s(self) -> np.ndarray:
        return self.phases * self.pd.omega

    @cached_property
    def xy(self) -> tuple[np.ndarray, np.ndarray]:
        x, y = wp_eval_many(self.pd, self.s)
        odd = self.components == BOUNDED
        if np.any(odd):
            xo, yo = oval_translate(self.pd, x[odd], y[odd])
            x, y = x.copy(), y.copy()
            x[odd], y[odd] = xo, yo
        return x, y

    @property
    def x(self) -> np.ndarray:
        return self.xy[0]

    def prefix(self, N: int) -> "Samples":
        return Samples(
            self.spec, self.pd, self.u, self.seed_component,
            self.phases[:N], self.components[:N], self.torsion, list(self.warnings),
        )


def torsion_status(spec: SequenceSpec) -> Optional[TorsionVerdict]:
    """Exact verdict when both curve and seed are rational, else ``None``."""
    p = spec.seed
    if not spec.curve.exact:
        return None
    if not p.is_infinity and not (isinstance(p.x, Fraction) and isinstance(p.y, Fraction)):
        return None
    return classify_torsion(spec.curve, p)


def generate(spec: SequenceSpec, pd: Optional[PeriodData] = None) -> Samples:
    """Samples n = 1..N of the schedule in elliptic-log space."""
    pd = pd or real_period(spec.curve)
    tv = torsion_status(spec)
    warnings = []
    z, comp = elliptic_log_any(pd, spec.seed.as_float())
    u_float = z / pd.omega
    u = Fraction(u_float)
    if tv is not None and tv.is_torsion:
        warnings.append(f"seed is torsion of order {tv.order}")
        j = round(u_float * tv.order) % tv.order
        if abs(u_float - j / tv.order) < SNAP_TOL or abs(u_float - 1 - j / tv.order) < SNAP_TOL:
            u = Fraction(j, tv.order)
        else:
            warnings.append("torsion phase did not match j/order; kept the float phase")
    if spec.seed.is_infinity:
        u = Fraction(0)
    n = np.arange(1, int(spec.N) + 1, dtype=np.int64)
    phases = phases_of(u, spec.schedule, n)
    if comp == BOUNDED:
        components = (spec.schedule.wrap64(n) & np.uint64(1)).astype(np.uint8)
    else:
        components = np.zeros(len(n), dtype=np.uint8)
    return Samples(spec, pd, u, comp, phases, components, tv, warnings)


def generate_points(spec: SequenceSpec) -> list[Point]:
    """Exact points [p(n)]P for n = 1..N; meant for small N."""
    return list(sequence_iter(spec.curve, spec.seed, (spec.schedule(n) for n in range(1, int(spec.N) + 1))))


# -- Weyl sums -----------------------------------------------------------------


@dataclass(frozen=True)
class WeylReport:
    N: int
    ks: tuple
    sums: tuple
    bounds: tuple  # geometric-sum bound per k, None when not applicable
    threshold: float

    @property
    def moduli(self) -> tuple:
        return tuple(abs(s) for s in self.sums)

    @property
    def max_modulus(self) -> float:
        return max(self.moduli)

    @property
    def verdict(self) -> str:
        if self.max_modulus < self.threshold:
            return "equidistributed-evidence"
        return "not-equidistributed"


def weyl_sums(phases: np.ndarray, ks: Sequence[int], workers: Optional[int] = None) -> list[complex]:
    ph = np.asarray(phases, dtype=float)

    def one(k):
        t = np.mod(k * ph, 1.0)
        return complex(np.mean(np.exp(2j * np.pi * t)))

    return pmap(one, list(ks), workers)


def weyl_test(phases, K: int = 8, u: Optional[float] = None, workers: Optional[int] = None) -> WeylReport:
    """S_N(k) for k = 1..K over phases s_n/omega in [0, 1).

    Pass ``u`` = z/omega of a linear orbit to also get the bound
    2/(N |e^{2 pi i k u} - 1|).
    """
    ph = np.asarray(phases, dtype=float)
    N = len(ph)
    ks = tuple(range(1, K + 1))
    sums = tuple(weyl_sums(ph, ks, workers))
    bounds = []
    for k in ks:
        if u is None:
            bounds.append(None)
            continue
        d = abs(np.exp(2j * np.pi * ((k * float(u)) % 1.0)) - 1.0)
        bounds.append(math.inf if d == 0 else 2.0 / (N * d))
    return WeylReport(N, ks, sums, tuple(bounds), weyl_threshold(N))


def weyl_decay(samples: Samples, Ns: Sequence[int], K: int = 8) -> list[WeylReport]:
    """Weyl reports on nested prefixes of one sequence."""
    u = float(samples.u) if samples.spec.schedule.is_linear else None
    return [weyl_test(samples.phases[:N], K, u) for N in Ns]


def decay_ratios(reports: Sequence[WeylReport]) -> list[float]:
    return [a.max_modulus / b.max_modulus if b.max_modulus > 0 else math.inf for a, b in zip(reports, reports[1:])]


def torsion_dichotomy(reports: Sequence[WeylReport]) -> str:
    """``persistent`` if some frequency stays above 0.9 at every N, else ``decaying``."""
    K = len(reports[0].ks)
    for i in range(K):
        if all(r.moduli[i] > 0.9 for r in reports):
            return "persistent"
    return "decaying"


# -- KS statistics ---------------------------------------------------------------


def ks_uniform(phases) -> float:
    ph = np.asarray(phases, dtype=float)
    if len(ph) < 100:
        raise ValueError("ks_uniform needs N >= 100")
    return float(stats.kstest(ph, "uniform").statistic)


def ks_against_mu(x, measure: PushforwardMeasure) -> float:
    x = np.asarray(x, dtype=float)
    e = measure.pd.e
    if np.any(x < e - 1e-9 * max(1.0, abs(e))):
        raise ValueError("x-samples must lie on the unbounded branch (x >= e)")
    return float(stats.kstest(x, measure.cdf).statistic)


def ks_against(x, cdf) -> float:
    return float(stats.kstest(np.asarray(x, dtype=float), cdf).statistic)


# -- arc length ---------------------------------------------------------------------


@dataclass(frozen=True)
class WindowRow:
    k: int
    half_width: float
    edge: float  # X_k
    count: int
    empirical: float
    mu_ratio: float
    gamma_ratio: float


@dataclass(frozen=True)
class ArcLengthDiagnostic:
    interval: tuple
    rows: tuple

    @property
    def gamma_decreasing(self) -> bool:
        g = [r.gamma_ratio for r in self.rows]
        return all(b < a for a, b in zip(g, g[1:]))

    @property
    def verdict(self) -> str:
        last = self.rows[-1]
        tol = 5.0 / math.sqrt(max(last.count, 1))
        mu_ok = abs(last.empirical - last.mu_ratio) < tol
        gamma_off = abs(last.empirical - last.gamma_ratio) > tol
        if self.gamma_decreasing and mu_ok and gamma_off:
            return "mu-not-mu_gamma"
        return "inconclusive"


def default_interval(pd: PeriodData) -> tuple[float, float]:
    """x-interval [x(0.4 omega), x(0.3 omega)], inside the first window."""
    x, _ = wp_eval_many(pd, np.array([0.4, 0.3]) * pd.omega)
    return float(x[0]), float(x[1])


def arclength_refutation(
    x,
    am: ArcLengthMeasure,
    interval: Optional[tuple] = None,
    windows: Optional[Sequence[float]] = None,
) -> ArcLengthDiagnostic:
    """Empirical window ratios against the mu and arc-length predictions."""
    pd = am.pd
    x = np.asarray(x, dtype=float)
    a, b = interval or default_interval(pd)
    windows = list(windows) if windows is not None else halving_windows(pd.omega, 6)
    mu = PushforwardMeasure(pd)
    Fa, Fb = mu.cdf(a), mu.cdf(b)
    gamma_ab = am.mu_gamma_mass(a, b)
    inside = np.count_nonzero((x >= a) & (x <= b))
    rows = []
    for k, ak in enumerate(windows, start=1):
        X = am.window_edge(ak)
        if X < b:
            raise ValueError(f"window {k} does not contain the interval [{a}, {b}]")
        cnt = int(np.count_nonzero(x <= X))
        emp = inside / cnt if cnt else math.nan
        rows.append(
            WindowRow(k, ak, X, cnt, emp, (Fb - Fa) / mu.cdf(X), gamma_ab / am.mu_gamma_mass(pd.e, X))
        )
    return ArcLengthDiagnostic((a, b), tuple(rows))


# -- fractional parts of x ----------------------------------------------------------


@dataclass(frozen=True)
class Mod1Entry:
    k: int
    T: complex
    c: Optional[complex]
    c_err: Optional[float]
    tol: float

    @property
    def match(self) -> Optional[bool]:
        if self.c is None:
            return None
        return abs(self.T - self.c) < self.tol


@dataclass(frozen=True)
class HalfCounts:
    """Counts of {x} in the two halves of a window [w0, w1)."""

    window: tuple
    lo: int
    hi: int
    N: int
    predicted_diff: Optional[float]  # expected lo - hi, as a fraction of N

    @property
    def margin(self) -> float:
        return 3.0 * math.sqrt(self.N)

    @property
    def passes(self) -> bool:
        return self.lo - self.hi > self.margin


@dataclass(frozen=True)
class Mod1Report:
    N: int
    entries: tuple
    half_interval: HalfCounts
    window_sign: Optional[HalfCounts]
    digit_shift: int
    shifted: tuple  # entries at frequencies 10^m k, diagnostic only
    monotonicity: Optional[str]
    threshold: float
    floor: float

    @property
    def theory_match(self) -> Optional[bool]:
        flags = [e.match for e in self.entries]
        return None if any(f is None for f in flags) else all(flags)

    @property
    def verdict(self) -> str:
        for e in self.entries:
            if abs(e.T) > self.floor and (e.c is None or abs(e.c) > self.floor):
                return "not-uniform-mod-1"
        if all(abs(e.T) < self.threshold for e in self.entries):
            return "uniform-evidence"
        return "inconclusive"


def _frac_T(frac: np.ndarray, k: int) -> complex:
    return complex(np.mean(np.exp(2j * np.pi * np.mod(k * frac, 1.0))))


def predicted_half_diff(measure: PushforwardMeasure, w0: float, w1: float, cells: int = HALF_CELLS) -> float:
    """mu-mass of {x} in [w0, mid) minus that in [mid, w1)."""
    e = measure.pd.e
    mid = 0.5 * (w0 + w1)
    n = np.arange(math.floor(e) - 1, math.floor(e) + cells, dtype=float)
    pts = [np.maximum(n + w, e) for w in (w0, mid, w1)]
    F0, F1, F2 = (np.asarray(measure.cdf(p)) for p in pts)
    # beyond the last cell the two halves carry equal mass to well below 1e-7
    return float(np.sum((F1 - F0) - (F2 - F1)))


def _dip_free_third(dip: tuple) -> Optional[tuple]:
    lo, hi = dip
    if hi - lo >= 1.0 / 3.0:
        return None
    for j in range(3):
        w0, w1 = j / 3.0, (j + 1) / 3.0
        shift = math.floor(lo)
        hits = any(max(lo, w0 + s) < min(hi, w1 + s) for s in (shift - 1, shift, shift + 1))
        if not hits:
            return (w0, w1)
    return None


def _half_counts(frac, w0, w1, measure) -> HalfCounts:
    mid = 0.5 * (w0 + w1)
    lo = int(np.count_nonzero((frac >= w0) & (frac < mid)))
    hi = int(np.count_nonzero((frac >= mid) & (frac < w1)))
    pred = predicted_half_diff(measure, w0, w1) if measure is not None else None
    return HalfCounts((w0, w1), lo, hi, len(frac), pred)


def mod1_suite(
    x,
    pd: Optional[PeriodData] = None,
    K: int = 8,
    digit_shift: int = 0,
    torsion: Optional[TorsionVerdict] = None,
    workers: Optional[int] = None,
) -> Mod1Report:
    """Fractional-part statistics of x-samples.

    With ``pd`` the empirical T_N(k) are compared with the Fourier
    coefficients c(k) of the pushforward law and the monotonicity class
    selects the half-count test: halves of [0, 1) when y increases
    everywhere, halves of a third of [0, 1) that avoids the dip otherwise.
    """
    if torsion is not None and torsion.is_torsion:
        raise SeedNotEquidistributedError("torsion seed: the mod-1 suite gives no verdicts")
    x = np.asarray(x, dtype=float)
    N = len(x)
    frac = np.mod(x, 1.0)
    thr = weyl_threshold(N)
    measure = PushforwardMeasure(pd) if pd is not None else None

    def entry(k):
        T = _frac_T(frac, k)
        if measure is None:
            return Mod1Entry(k, T, None, None, thr)
        c, err = measure.fourier_coefficient(k)
        return Mod1Entry(k, T, c, err, thr + err)

    entries = tuple(pmap(entry, range(1, K + 1), workers))
    scale = 10**digit_shift
    shifted = tuple(pmap(lambda k: entry(k * scale), range(1, K + 1), workers)) if digit_shift else ()
    mono = classify_monotonicity(pd.curve) if pd is not None else None
    half = _half_counts(frac, 0.0, 1.0, measure)
    window = None
    if mono is not None and mono.kind == "dip-interval":
        third = _dip_free_third(mono.dip)
        if third is not None:
            window = _half_counts(frac, third[0], third[1], measure)
    return Mod1Report(
        N, entries, half, window, digit_shift, shifted,
        mono.kind if mono else None, thr, bias_floor(N),
    )


# -- scaled models ----------------------------------------------------------------


def scaled_model_transfer(spec: SequenceSpec, u: int) -> SequenceSpec:
    """Same sequence on y^2 = x^3 + (A/u^4) x + B/u^6, seed (x/u^2, y/u^3)."""
    if int(u) != u or u < 1:
        raise ValueError("scale factor must be a positive integer")
    u = int(u)
    if u == 1:
        return spec
    return SequenceSpec(spec.curve.scaled(u), scale_point(spec.seed, u), spec.schedule, spec.N, spec.space)


def smallest_window_scale(c: Curve) -> int:
    """Least integer u with 2 sqrt(|A|/(3 u^4)) < 1/3 (1 when y increases)."""
    if classify_monotonicity(c).kind == "increasing-everywhere":
        return 1
    A = abs(float(c.a))
    u = 1
    while 2.0 * math.sqrt(A / (3.0 * u**4)) >= 1.0 / 3.0:
        u += 1
    return u


# -- two components ---------------------------------------------------------------


@dataclass(frozen=True)
class TwoComponentReport:
    N: int
    fraction_bounded: float
    ks_unbounded: Optional[float]
    ks_bounded: Optional[float]
    threshold_fraction: float

    def _ks_ok(self, ks, count):
        return ks is not None and ks < ks_threshold(max(count, 1))

    @property
    def counts(self) -> tuple[int, int]:
        nb = int(round(self.fraction_bounded * self.N))
        return self.N - nb, nb

    @property
    def conditional_unbounded_passes(self) -> bool:
        return self._ks_ok(self.ks_unbounded, self.counts[0])

    @property
    def conditional_bounded_passes(self) -> bool:
        return self._ks_ok(self.ks_bounded, self.counts[1])

    @property
    def balance_passes(self) -> bool:
        return abs(self.fraction_bounded - 0.5) < self.threshold_fraction

    @property
    def verdict(self) -> str:
        if self.fraction_bounded in (0.0, 1.0):
            return "stuck-on-one-component"
        if self.balance_passes and self.conditional_unbounded_passes and self.conditional_bounded_passes:
            return "mu-plus-equidistributed"
        return "inconclusive"


def two_component_report(samples: Samples) -> TwoComponentReport:
    pd = samples.pd
    tm = TwoComponentMeasure(pd)
    x = samples.x
    odd = samples.components == BOUNDED
    xu, xb = x[~odd], x[odd]
    ku = ks_against(xu, tm.unbounded.cdf) if len(xu) >= 1 else None
    kb = ks_against(xb, tm.oval_cdf) if len(xb) >= 1 else None
    N = samples.N
    return TwoComponentReport(N, float(np.mean(odd)), ku, kb, weyl_threshold(N))
