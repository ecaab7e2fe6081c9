"""Figure rendering for the report-producing CLI paths.

Figures are written straight to files next to the delimited output; no
interactive backend is ever touched.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def save_region_figure(points, path: str, ylabel: str = "nats / unit time") -> None:
    """Rate and rate-equivocation bounds versus duty cycle."""
    alphas = [pt.alpha for pt in points]
    r = [pt.r_max for pt in points]
    rd = [pt.rd_max for pt in points]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(alphas, r, label="rate bound")
    ax.plot(alphas, rd, label="rate x equivocation bound")
    best = max(range(len(points)), key=lambda i: rd[i])
    ax.plot(alphas[best], rd[best], "k.", ms=8)
    ax.annotate(f"max {rd[best]:.4g}", (alphas[best], rd[best]),
                textcoords="offset points", xytext=(6, 4), fontsize=9)
    ax.set_xlabel("duty cycle")
    ax.set_ylabel(ylabel)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_experiment_figure(reports, path: str) -> None:
    """Error rate with confidence band and leakage per sweep row."""
    idx = list(range(len(reports)))
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.5, 4.0))

    pe = [r.pe for r in reports]
    lo = [r.pe - r.pe_lo if not math.isnan(r.pe) else 0.0 for r in reports]
    hi = [r.pe_hi - r.pe if not math.isnan(r.pe) else 0.0 for r in reports]
    ax1.errorbar(idx, pe, yerr=[lo, hi], fmt="o", capsize=3)
    ax1.set_xlabel("sweep row")
    ax1.set_ylabel("message error rate")
    ax1.set_ylim(bottom=0)

    ax2.plot(idx, [r.leakage_nats for r in reports], "o-", label="leakage (nats)")
    ax2.plot(idx, [r.fano_bound * r.config.horizon for r in reports], "s--",
             label="Fano bound (nats)")
    ax2.set_xlabel("sweep row")
    ax2.set_ylabel("nats")
    ax2.legend()

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
