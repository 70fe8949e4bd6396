"""One full analysis run: curve data, torsion, and every sequence statistic."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .analytic import BOUNDED, MonotonicityClass, PeriodData, classify_monotonicity, real_period
from .equidist import (
    ArcLengthDiagnostic,
    Mod1Report,
    Samples,
    SequenceSpec,
    TwoComponentReport,
    WeylReport,
    arclength_refutation,
    decay_ratios,
    generate,
    ks_against_mu,
    ks_threshold,
    ks_uniform,
    mod1_suite,
    torsion_dichotomy,
    two_component_report,
    weyl_decay,
)
from .errors import SeedNotEquidistributedError
from .measures import ArcLengthMeasure, PushforwardMeasure


@dataclass
class AnalysisResult:
    spec: SequenceSpec
    K: int
    pd: PeriodData
    monotonicity: MonotonicityClass
    samples: Samples
    weyl: list
    ks_uniform: Optional[float]
    ks_mu: Optional[float]
    arc_length: Optional[ArcLengthDiagnostic]
    mod1: Optional[Mod1Report]
    mod1_refusal: Optional[str]
    two_component: Optional[TwoComponentReport]
    warnings: list = field(default_factory=list)

    @property
    def final_weyl(self) -> WeylReport:
        return self.weyl[-1]

    @property
    def verdicts(self) -> dict:
        out = {"weyl": self.final_weyl.verdict}
        if len(self.weyl) > 1:
            dich = torsion_dichotomy(self.weyl)
            out["weyl_persistence"] = dich
            tv = self.samples.torsion
            if tv is not None:
                out["torsion_consistent"] = tv.is_torsion == (dich == "persistent")
        if self.ks_mu is not None:
            out["ks_mu"] = "pass" if self.ks_mu < ks_threshold(self.unbounded_count) else "fail"
        if self.arc_length is not None:
            out["arc_length"] = self.arc_length.verdict
        out["mod1"] = self.mod1.verdict if self.mod1 is not None else "refused"
        if self.two_component is not None:
            out["two_component"] = self.two_component.verdict
        return out

    @property
    def unbounded_count(self) -> int:
        return int(np.count_nonzero(self.samples.components != BOUNDED))


def decade_prefixes(N: int) -> list[int]:
    """N/100, N/10 and N, dropping prefixes shorter than 100 terms."""
    out = sorted({N // 10**j for j in (2, 1, 0) if N // 10**j >= 100})
    return out or [N]


def run_analysis(spec: SequenceSpec, K: int = 8, digit_shift: int = 0) -> AnalysisResult:
    pd = real_period(spec.curve)
    mono = classify_monotonicity(spec.curve)
    smp = generate(spec, pd)
    warnings = list(smp.warnings)
    weyl = weyl_decay(smp, decade_prefixes(smp.N), K)

    ks_u = ks_uniform(smp.phases) if smp.N >= 100 else None
    x = smp.x
    unb = smp.components != BOUNDED
    xu = x[unb]
    ks_mu = ks_against_mu(xu, PushforwardMeasure(pd)) if len(xu) else None

    arc = None
    if len(xu) and np.all(np.isfinite(xu)):
        arc = arclength_refutation(xu, ArcLengthMeasure(pd))
    elif len(xu):
        warnings.append("arc-length diagnostic skipped: orbit meets the point at infinity")

    mod1 = refusal = None
    try:
        # mixed-component orbits have no single pushforward law to compare with
        mod1 = mod1_suite(x, pd if smp.seed_component != BOUNDED else None, K, digit_shift, smp.torsion)
    except SeedNotEquidistributedError as exc:
        refusal = str(exc)

    two = two_component_report(smp) if pd.two_component else None
    return AnalysisResult(spec, K, pd, mono, smp, weyl, ks_u, ks_mu, arc, mod1, refusal, two, warnings)


def _num(v):
    """Exact numbers as strings, floats as floats."""
    if v is None:
        return None
    if isinstance(v, float):
        return v
    return str(v)


def _cplx(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def curve_dict(pd: PeriodData, mono: MonotonicityClass) -> dict:
    c = pd.curve
    return {
        "a": _num(c.a),
        "b": _num(c.b),
        "backend": "exact" if c.exact else "float",
        "discriminant": _num(c.disc),
        "component": pd.component,
        "roots": [float(r) for r in pd.real_roots],
        "e": pd.e,
        "omega": pd.omega,
        "omega_agm": pd.omega_agm,
        "omega_bounded": pd.omega_bounded,
        "imag_period": pd.imag_period,
        "monotonicity": {"kind": mono.kind, "dip": list(mono.dip) if mono.dip else None},
    }


def weyl_dict(r: WeylReport) -> dict:
    return {
        "N": r.N,
        "threshold": r.threshold,
        "max_modulus": r.max_modulus,
        "verdict": r.verdict,
        "k": [
            {"k": k, "S": _cplx(s), "modulus": abs(s), "bound": b}
            for k, s, b in zip(r.ks, r.sums, r.bounds)
        ],
    }


def _mod1_entries(entries) -> list:
    return [
        {
            "k": e.k,
            "T_N": _cplx(e.T),
            "c_k": _cplx(e.c) if e.c is not None else None,
            "c_err": e.c_err,
            "tol": e.tol,
            "match": e.match,
        }
        for e in entries
    ]


def _half(h) -> Optional[dict]:
    if h is None:
        return None
    return {
        "window": list(h.window),
        "lo": h.lo,
        "hi": h.hi,
        "margin": h.margin,
        "predicted_diff": h.predicted_diff,
        "passes": h.passes,
    }


def to_dict(res: AnalysisResult) -> dict:
    """Report in the versioned JSON layout (schema 1)."""
    smp = res.samples
    seed = res.spec.seed
    tv = smp.torsion
    out = {
        "schema": 1,
        "curve": curve_dict(res.pd, res.monotonicity),
        "seed": {
            "x": "infinity" if seed.is_infinity else _num(seed.x),
            "y": "infinity" if seed.is_infinity else _num(seed.y),
            "elliptic_log": float(smp.u) * res.pd.omega,
            "phase": float(smp.u),
            "component": "bounded" if smp.seed_component == BOUNDED else "unbounded",
        },
        "torsion": None if tv is None else {"is_torsion": tv.is_torsion, "order": tv.order, "method": tv.method},
        "schedule": res.spec.schedule.label,
        "N": smp.N,
        "K": res.K,
        "weyl": [weyl_dict(r) for r in res.weyl],
        "weyl_decay_ratios": decay_ratios(res.weyl),
        "ks_uniform": res.ks_uniform,
        "ks_mu": res.ks_mu,
        "ks_threshold": ks_threshold(max(res.unbounded_count, 1)),
    }
    arc = res.arc_length
    out["arc_length"] = None if arc is None else {
        "interval": list(arc.interval),
        "verdict": arc.verdict,
        "windows": [
            {
                "k": r.k,
                "half_width": r.half_width,
                "edge": r.edge,
                "count": r.count,
                "empirical": r.empirical,
                "mu_ratio": r.mu_ratio,
                "gamma_ratio": r.gamma_ratio,
            }
            for r in arc.rows
        ],
    }
    m = res.mod1
    if m is None:
        out["mod1"] = {"verdict": "refused", "reason": res.mod1_refusal}
        out["half_interval"] = None
    else:
        out["mod1"] = {
            "verdict": m.verdict,
            "theory_match": m.theory_match,
            "threshold": m.threshold,
            "bias_floor": m.floor,
            "monotonicity": m.monotonicity,
            "k": _mod1_entries(m.entries),
            "window_sign": _half(m.window_sign),
            "digit_shift": {"m": m.digit_shift, "k": _mod1_entries(m.shifted)},
        }
        out["half_interval"] = _half(m.half_interval)
    t = res.two_component
    out["two_component"] = None if t is None else {
        "fraction_bounded": t.fraction_bounded,
        "ks_unbounded": t.ks_unbounded,
        "ks_bounded": t.ks_bounded,
        "balance_tol": t.threshold_fraction,
        "verdict": t.verdict,
    }
    out["warnings"] = list(res.warnings)
    out["verdicts"] = res.verdicts
    return out


def period_dict(pd: PeriodData) -> dict:
    return {"schema": 1, "curve": curve_dict(pd, classify_monotonicity(pd.curve)), "quad_error": pd.quad_error}
