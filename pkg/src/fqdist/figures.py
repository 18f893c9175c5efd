"""Figure rendering for suite reports.

Each renderer takes the in-memory payload of one suite and writes a PNG
next to the delimited output. Matplotlib is imported lazily with the Agg
backend so the package works headless and without matplotlib unless
figures are requested.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _plt():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _save(fig, path: Path) -> Path:
    fig.savefig(path, dpi=120, bbox_inches="tight")
    _plt().close(fig)
    return path


def render_identity_residuals(payload: dict, out: Path) -> Path:
    plt = _plt()
    residuals = np.array([max(c.residual, 1e-18) for c in payload["checks"]])
    tol = np.array([c.tolerance for c in payload["checks"]])
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.hist(np.log10(residuals), bins=40, color="#4878a8", edgecolor="black")
    ax.axvline(np.log10(tol.min()), color="red", linestyle="--",
               label="tightest tolerance")
    ax.set_xlabel("log10 residual")
    ax.set_ylabel("checks")
    ax.set_title("Identity residuals")
    ax.legend()
    return _save(fig, out / "identity_residuals.png")


def render_bound_ratios(payload: dict, out: Path, c_env: float) -> Path:
    plt = _plt()
    by_name: dict = {}
    for b in payload["bounds"]:
        by_name.setdefault(b.name, []).append(b.ratio)
    fig, ax = plt.subplots(figsize=(7, 4))
    names = sorted(by_name)
    for i, name in enumerate(names):
        vals = by_name[name]
        ax.scatter([i] * len(vals), vals, s=12, alpha=0.5)
    ax.axhline(1.0, color="gray", linestyle=":")
    ax.axhline(c_env, color="red", linestyle="--", label=f"envelope {c_env}")
    ax.set_xticks(range(len(names)), names)
    ax.set_ylabel("|sum| / envelope scale")
    ax.set_title("Exponential sum magnitudes against their envelopes")
    ax.legend()
    return _save(fig, out / "bound_ratios.png")


def render_decay_constants(payload: dict, out: Path, c_env: float) -> list:
    plt = _plt()
    files = []
    for attr, fname, title in (
            ("decay_constant", "decay_constants.png",
             "Sphere spectrum decay constants"),
            ("zero_mode_deviation", "zero_mode_deviation.png",
             "Zero mode deviation from 1/q")):
        fig, ax = plt.subplots(figsize=(7, 4))
        by_family: dict = {}
        for r in payload["reports"]:
            key = (r.spec.n, r.spec.d, r.hypothesis_ok)
            by_family.setdefault(key, []).append(
                (r.spec.q, getattr(r, attr)))
        for (n, d, ok), pts in sorted(by_family.items()):
            qs = [p[0] for p in pts]
            vals = [p[1] for p in pts]
            marker = "o" if ok else "x"
            label = f"n={n} d={d}" + ("" if ok else " (no claim)")
            ax.scatter(qs, vals, s=16, marker=marker, label=label, alpha=0.7)
        ax.axhline(c_env, color="red", linestyle="--",
                   label=f"envelope {c_env}")
        ax.set_xlabel("q")
        ax.set_ylabel(attr)
        ax.set_title(title)
        ax.legend(fontsize=7)
        files.append(_save(fig, out / fname))
    return files


def render_incidence_ratios(payload: dict, out: Path) -> Path:
    plt = _plt()
    fig, ax = plt.subplots(figsize=(7, 4))
    claimed = [a for a in payload["audits"] if a.hypothesis_ok]
    other = [a for a in payload["audits"] if not a.hypothesis_ok]
    for audits, marker, label in ((claimed, "o", "claimed"),
                                  (other, "x", "no claim")):
        if not audits:
            continue
        x = [np.sqrt(a.size_e * a.size_f) for a in audits]
        y = [a.max_ratio for a in audits]
        ax.scatter(x, y, s=10, alpha=0.4, marker=marker, label=label)
    ax.axhline(1.0, color="red", linestyle="--", label="bound")
    ax.set_xscale("log")
    ax.set_xlabel("sqrt(#E #F)")
    ax.set_ylabel("max over j of count / bound")
    ax.set_title("Pair counts against the incidence bound")
    ax.legend()
    return _save(fig, out / "incidence_ratios.png")


def render_coverage_fractions(payload: dict, out: Path) -> Path:
    plt = _plt()
    fig, ax = plt.subplots(figsize=(8, 4))
    one = [(f"q={r[0]} d={r[1]} n={r[2]}", r[6])
           for r in payload["summary_rows"]]
    two = [(f"q={r[0]} d={r[1]} n={r[2]}*", r[7])
           for r in payload["two_set_rows"]]
    labels = [t[0] for t in one] + [t[0] for t in two]
    vals = [t[1] for t in one] + [t[1] for t in two]
    colors = ["#4878a8"] * len(one) + ["#b8860b"] * len(two)
    ax.bar(range(len(vals)), vals, color=colors)
    ax.axhline(0.95, color="red", linestyle="--", label="0.95")
    ax.set_xticks(range(len(labels)), labels, rotation=75, fontsize=6)
    ax.set_ylabel("coverage fraction")
    ax.set_ylim(0, 1.05)
    ax.set_title("Full coverage fraction (starred bars: two-set)")
    ax.legend()
    return _save(fig, out / "coverage_fractions.png")


def render_all(payloads: dict, out: Path, c_env: float) -> list:
    """Render every figure the collected payloads support."""
    files: list = []
    if "identities" in payloads:
        p = payloads["identities"]
        if p["checks"]:
            files.append(render_identity_residuals(p, out))
        if p["bounds"]:
            files.append(render_bound_ratios(p, out, c_env))
    if "sphere-decay" in payloads:
        p = payloads["sphere-decay"]
        if p["reports"]:
            files.extend(render_decay_constants(p, out, c_env))
    if "incidence" in payloads:
        p = payloads["incidence"]
        if p["audits"]:
            files.append(render_incidence_ratios(p, out))
    if "coverage" in payloads:
        p = payloads["coverage"]
        if p["summary_rows"] or p["two_set_rows"]:
            files.append(render_coverage_fractions(p, out))
    return files
