"""Matplotlib rendering of report tables to image files (Agg backend only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_radii(rows: list[dict], path: str) -> None:
    betas = [r["beta"] for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    for key, label in [
        ("mayer_radius", "activity radius"),
        ("lp_radius", "density radius (classical)"),
        ("virial_radius", "density radius (Basuev)"),
    ]:
        ax1.plot(betas, [r[key] for r in rows], marker="o", label=label)
    ax1.set_yscale("log")
    ax1.set_xlabel(r"$\beta$")
    ax1.set_ylabel("radius lower bound")
    ax1.legend(fontsize=8)
    ax2.plot(betas, [r["ratio_virial_to_lp"] for r in rows], marker="o", color="C3")
    ax2.set_yscale("log")
    ax2.set_xlabel(r"$\beta$")
    ax2.set_ylabel("virial / classical ratio")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_mayer(rows: list[dict], path: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 3.5))
    xs = range(len(rows))
    labels = [f"n={r['n']}, β={r['beta']}" for r in rows]
    ax.errorbar(
        xs,
        [abs(r["estimate"]) for r in rows],
        yerr=[3.0 * r["std_error"] for r in rows],
        fmt="o",
        label="|estimate| ± 3σ",
    )
    for key, marker in [
        ("bound_tree_basuev", "v"),
        ("bound_tree_stability", "s"),
        ("bound_penrose_ruelle", "^"),
    ]:
        ax.plot(xs, [r[key] for r in rows], marker, linestyle="none", label=key)
    ax.set_yscale("log")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=30, fontsize=7)
    ax.set_ylabel("|coefficient|")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_stability(rows: list[dict], path: str) -> None:
    est = [r for r in rows if r["kind"] == "estimate"]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot([r["n"] for r in est], [r["b_n"] for r in est], "o-", label="B_n")
    ax.plot([r["n"] for r in est], [r["bbar_n"] for r in est], "s-", label="Bbar_n")
    ax.set_xlabel("n")
    ax.set_ylabel("estimated constant")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_gfun(rows: list[dict], path: str) -> None:
    gain = [r for r in rows if r["kind"] == "gain"]
    tree = [r for r in rows if r["kind"] == "tree_function"]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    ax1.semilogx([r["input"] for r in gain], [r["value"] for r in gain], "o-")
    ax1.set_xlabel("u")
    ax1.set_ylabel("gain g(u)")
    ax2.plot([r["input"] for r in tree], [r["value"] for r in tree], "o-")
    ax2.set_xlabel("x")
    ax2.set_ylabel("tree function w(x)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
