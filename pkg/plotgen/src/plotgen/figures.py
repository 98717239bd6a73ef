"""Figure rendering.

Output is deterministic for a given input: fixed figure size, fixed marker
and color cycles, no timestamps (SVG metadata dates are suppressed).
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "plotgen"  # deterministic SVG ids
import matplotlib.pyplot as plt  # noqa: E402

from .tables import FractionTable, SweepTable  # noqa: E402

_FIGSIZE = (6.0, 4.0)
_SAVE_KW = {"dpi": 120, "metadata": {"Date": None}}


def _save(fig, out_path: str):
    if out_path.endswith(".png"):
        fig.savefig(out_path, dpi=_SAVE_KW["dpi"])
    else:
        fig.savefig(out_path, **_SAVE_KW)
    plt.close(fig)


def plot_delay(csv_path: str, out_path: str) -> str:
    """Delay-versus-rate curves from a sweep CSV, one series per policy.

    Stable rows are averaged over seeds on a log delay axis; rates where
    any seed went unstable are marked with open circles at the top.
    """
    table = SweepTable.read(csv_path)
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    top = 1.0
    for policy in table.policies():
        series = table.delay_series(policy)
        xs = [lam for lam, mean, _ in series if not math.isnan(mean)]
        ys = [mean for _, mean, _ in series if not math.isnan(mean)]
        if ys:
            top = max(top, max(ys))
        ax.plot(xs, ys, marker="o", label=policy)
    for policy in table.policies():
        bad = [(lam, n) for lam, _, n in table.delay_series(policy) if n]
        if bad:
            ax.plot(
                [lam for lam, _ in bad],
                [top * 2] * len(bad),
                linestyle="none",
                marker="o",
                markerfacecolor="none",
                color="gray",
            )
    ax.set_yscale("log")
    ax.set_xlabel("arrival rate (packets/slot)")
    ax.set_ylabel("mean delay (slots)")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    _save(fig, out_path)
    return out_path


def plot_fraction(csv_path: str, out_path: str) -> str:
    """Fraction-of-capacity-versus-K curves, one series per network."""
    table = FractionTable.read(csv_path)
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    for network in table.networks():
        series = table.series(network)
        ax.plot(
            [K for K, _ in series],
            [frac for _, frac in series],
            marker="s",
            label=network,
        )
    ax.set_xlabel("number of classes K")
    ax.set_ylabel("fraction of broadcast capacity")
    ax.set_ylim(0.0, 1.05)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    _save(fig, out_path)
    return out_path
