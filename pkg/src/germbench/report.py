"""Figures and tab-delimited tables written next to the CLI's JSON output."""

from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

from .groupoid import FiniteGroupoid  # noqa: E402

COLORS = {"source": "#1b1f8a", "target": "#941b22", "unit": "#444444"}


def _setup(width=8, height=None, ncols=1):
    height = height or width * (math.sqrt(5) - 1) / 2
    fig, axes = plt.subplots(1, ncols, figsize=(width, height), facecolor="w")
    return fig, axes


def plot_groupoid(G: FiniteGroupoid, path, title: str = "") -> Path:
    """Units on a circle; each non-unit arrow drawn d(γ) -> r(γ), isotropy as a loop count."""
    units = list(G.units)
    k = len(units)
    pos = {u: (math.cos(2 * math.pi * i / k), math.sin(2 * math.pi * i / k)) if k > 1 else (0.0, 0.0)
           for i, u in enumerate(units)}
    fig, ax = _setup(6, 6)
    seen: dict[tuple[int, int], int] = {}
    for g in G.arrows:
        if G.is_unit(g):
            continue
        a, b = G.d(g), G.r(g)
        n = seen[(a, b)] = seen.get((a, b), 0) + 1
        if a == b:
            continue
        ax.annotate(
            "", xy=pos[b], xytext=pos[a],
            arrowprops=dict(arrowstyle="-|>", color=COLORS["source"], lw=1,
                            shrinkA=12, shrinkB=12, connectionstyle=f"arc3,rad={0.12 * n}"),
        )
    for u in units:
        x, y = pos[u]
        loops = seen.get((u, u), 0)
        ax.plot([x], [y], "o", ms=14, color=COLORS["unit"])
        label = G.labels[u] + (f"\n+{loops} isotropy" if loops else "")
        ax.annotate(label, (x, y), textcoords="offset points", xytext=(0, -26), ha="center", fontsize=9)
    ax.set_xlim(-1.6, 1.6)
    ax.set_ylim(-1.6, 1.6)
    ax.set_aspect("equal")
    ax.axis("off")
    ax.set_title(title or f"{G.n_arrows} arrows, {k} units")
    path = Path(path)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_transfer(transfer, path) -> Path:
    """Left: fiber sums on G(α) and G(θ) per source unit. Right: per-arrow defects."""
    bundle, src, tgt = transfer.bundle, transfer.source_report, transfer.target_d_report
    if bundle is None or src is None:
        raise ValueError("transfer report has no pullback to plot")
    phi = bundle.hom.arrow_map
    Ga = bundle.source
    units = list(Ga.units)
    fig, (ax1, ax2) = _setup(10, 4, ncols=2)
    xs = list(range(len(units)))
    ax1.bar([x - 0.2 for x in xs], [float(src.unit_sums[-1][u]) for u in units], 0.4,
            color=COLORS["source"], label="pullback on G(α)")
    ax1.bar([x + 0.2 for x in xs], [float(tgt.unit_sums[-1][phi[u]]) for u in units], 0.4,
            color=COLORS["target"], label="certificate on G(θ)")
    ax1.set_xticks(xs)
    ax1.set_xticklabels([Ga.labels[u] for u in units], rotation=45, ha="right", fontsize=7)
    ax1.set_ylabel("source-fiber sum")
    ax1.legend(fontsize=8)
    arrows = list(Ga.arrows)
    ax2.plot(arrows, [float(v) for v in src.arrow_defects[-1]], "o", color=COLORS["source"], ms=4,
             label="arrow of G(α)")
    ax2.plot(arrows, [float(tgt.arrow_defects[-1][phi[g]]) for g in arrows], "x", color=COLORS["target"], ms=6,
             label="its image in G(θ)")
    ax2.xaxis.set_major_locator(MaxNLocator(integer=True))
    ax2.set_xlabel("arrow id")
    ax2.set_ylabel("invariance defect")
    ax2.legend(fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def write_fiber_table(transfer, path) -> Path:
    """One row per unit of G(α): point, ρ̃(unit), fiber sizes, fiber sums on both sides."""
    bundle, src, tgt = transfer.bundle, transfer.source_report, transfer.target_d_report
    Ga, Gt = bundle.source, bundle.target
    phi = bundle.hom.arrow_map
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(["unit", "point", "image", "source_fiber", "target_fiber", "source_sum", "target_sum"])
        for u in Ga.units:
            w.writerow([
                Ga.labels[u],
                bundle.action.points[Ga.point_of_unit[u]],
                Gt.labels[phi[u]],
                len(Ga.d_fiber(u)),
                len(Gt.d_fiber(phi[u])),
                src.unit_sums[-1][u],
                tgt.unit_sums[-1][phi[u]],
            ])
    return path


def write_transfer_artifacts(transfer, outdir) -> list[Path]:
    """Render figures and the fiber table for a completed transfer; [] if it stopped early."""
    if transfer.bundle is None or transfer.source_report is None:
        return []
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    return [
        plot_groupoid(transfer.bundle.source, outdir / "groupoid_alpha.png", "G(α)"),
        plot_groupoid(transfer.bundle.target, outdir / "groupoid_theta.png", "G(θ)"),
        plot_transfer(transfer, outdir / "transfer.png"),
        write_fiber_table(transfer, outdir / "fibers.tsv"),
    ]
