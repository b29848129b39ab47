"""Figure rendering for experiment output: estimate curves with confidence
bands against the closed-form prediction, and degree-census bar charts.

Figures are written straight to files (headless backend); the CSV/JSON-lines
output remains the primary machine-readable artifact.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .experiments import SummaryRow


def plot_measurement_curve(summary: list[SummaryRow], measurement: str, out_path, title: str = "") -> None:
    """One swept measurement: point estimates, Wilson band, prediction curve."""
    rows = [r for r in summary if r.measurement == measurement and r.sweep_value is not None]
    if not rows:
        raise ValueError(f"no swept rows for measurement {measurement!r}")
    xs = [float(r.sweep_value) for r in rows]
    est = [r.estimate for r in rows]
    lo = [r.ci_low if r.ci_low is not None else r.estimate for r in rows]
    hi = [r.ci_high if r.ci_high is not None else r.estimate for r in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.fill_between(xs, lo, hi, alpha=0.25, color="tab:blue", label="95% interval")
    ax.plot(xs, est, "o-", color="tab:blue", label="empirical")
    theory = [(x, r.theory_prediction) for x, r in zip(xs, rows) if r.theory_prediction is not None]
    if theory:
        ax.plot(*zip(*theory), "--", color="tab:red", label="prediction")
    ax.set_xlabel("sweep value")
    ax.set_ylabel(measurement)
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=130)
    plt.close(fig)


def plot_degree_census(summary: list[SummaryRow], out_path, title: str = "") -> None:
    """Mean count of degree-h nodes as bars, limiting Poisson mean as markers."""
    rows = [
        r
        for r in summary
        if r.measurement.startswith("deg_count_") and not r.measurement.endswith("tail")
    ]
    if not rows:
        raise ValueError("no degree-census rows in summary")
    hs = [int(r.measurement.rsplit("_", 1)[1]) for r in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.bar(hs, [r.estimate for r in rows], color="tab:blue", alpha=0.7, label="empirical mean")
    theory = [(h, r.theory_prediction) for h, r in zip(hs, rows) if r.theory_prediction is not None]
    if theory:
        ax.plot(*zip(*theory), "rx--", markersize=9, label="limit mean")
    ax.set_xlabel("degree h")
    ax.set_ylabel("mean node count")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3, axis="y")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=130)
    plt.close(fig)
