"""PNG figures for an analysis run, drawn with matplotlib's Agg backend."""

from __future__ import annotations

import os

import numpy as np

from .analysis import AnalysisResult
from .analytic import BOUNDED
from .measures import PushforwardMeasure

ORBIT_POINTS = 2000
HIST_BINS = 50


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_orbit(res: AnalysisResult, path) -> None:
    """First orbit points over the real locus of the curve."""
    plt = _pyplot()
    pd = res.pd
    x, y = res.samples.xy
    x, y = x[:ORBIT_POINTS], y[:ORBIT_POINTS]
    ok = np.isfinite(x) & np.isfinite(y)
    fig, ax = plt.subplots(figsize=(6, 5))
    hi = float(np.percentile(x[ok], 95)) if np.any(ok) else pd.e + 4
    xs = np.linspace(pd.e, max(hi, pd.e + 1), 800)
    ys = np.sqrt(np.maximum(xs**3 + pd.A * xs + pd.B, 0))
    ax.plot(xs, ys, "k-", lw=0.8)
    ax.plot(xs, -ys, "k-", lw=0.8)
    if pd.two_component:
        _, e2, e3 = pd.real_roots
        xo = np.linspace(e3, e2, 400)
        yo = np.sqrt(np.maximum(xo**3 + pd.A * xo + pd.B, 0))
        ax.plot(np.r_[xo, xo[::-1]], np.r_[yo, -yo[::-1]], "k-", lw=0.8)
    ax.scatter(x[ok], y[ok], s=2, alpha=0.5)
    ax.set_xlim(min(pd.real_roots) - 0.5, max(hi, pd.e + 1))
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"orbit, N={min(res.samples.N, ORBIT_POINTS)}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_weyl(res: AnalysisResult, path) -> None:
    """|S_N(k)| against k for each prefix length, with the threshold lines."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    for r in res.weyl:
        line = ax.semilogy(r.ks, np.maximum(r.moduli, 1e-16), "o-", label=f"N={r.N}")[0]
        ax.axhline(r.threshold, ls="--", color=line.get_color(), lw=0.8)
    ax.set_xlabel("k")
    ax.set_ylabel("|S_N(k)|")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_cdf(res: AnalysisResult, path) -> None:
    """Empirical CDF of unbounded-branch x-samples against F(t)."""
    plt = _pyplot()
    pd = res.pd
    m = PushforwardMeasure(pd)
    x = res.samples.x[res.samples.components != BOUNDED]
    x = np.sort(x[np.isfinite(x)])
    fig, ax = plt.subplots(figsize=(6, 4))
    if len(x):
        off = np.maximum(x - pd.e, 1e-12)
        idx = np.unique(np.linspace(0, len(x) - 1, min(len(x), 4000)).astype(int))
        ax.semilogx(off[idx], (idx + 1) / len(x), ".", ms=2, label="empirical")
        grid, F = m.cdf_grid(400, upper=float(x[-1]) + 1.0)
        ax.semilogx(np.maximum(grid - pd.e, 1e-12), F, "-", lw=1, label="F")
        ax.legend()
    ax.set_xlabel("x - e")
    ax.set_ylabel("CDF")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_mod1(res: AnalysisResult, path) -> None:
    """Histogram of the fractional parts of x."""
    plt = _pyplot()
    x = res.samples.x
    frac = np.mod(x[np.isfinite(x)], 1.0)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(frac, bins=HIST_BINS, range=(0, 1), density=True)
    ax.axhline(1.0, color="k", ls="--", lw=0.8)
    ax.set_xlabel("{x}")
    ax.set_ylabel("density")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_figures(res: AnalysisResult, directory) -> list[str]:
    """Render every figure into ``directory``; returns the written paths."""
    os.makedirs(directory, exist_ok=True)
    out = []
    for name, fn in (
        ("orbit.png", plot_orbit),
        ("weyl.png", plot_weyl),
        ("cdf.png", plot_cdf),
        ("mod1.png", plot_mod1),
    ):
        path = os.path.join(directory, name)
        fn(res, path)
        out.append(path)
    return out
