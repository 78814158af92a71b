"""Figures written next to the text reports (``--plot FILE``)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .dynamics import DynamicsTrace  # noqa: E402
from .metrics import EfficiencyReport  # noqa: E402
from .model import SocialNetwork, social_welfare  # noqa: E402

# PNG metadata otherwise embeds the matplotlib version
_SAVE_KW = {"metadata": {"Software": None}, "dpi": 120}


def plot_trace(net: SocialNetwork, trace: DynamicsTrace, path) -> None:
    """Social welfare along the run, and each move's payoff gain."""
    welfare = [float(social_welfare(net, s)) for s in trace.states()]
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(6, 5), sharex=True)
    top.plot(range(len(welfare)), welfare, marker="o", color="tab:blue")
    top.set_ylabel("social welfare")
    top.set_title(f"{len(trace.steps)} steps, {trace.outcome}")
    if trace.steps:
        xs = range(1, len(trace.steps) + 1)
        bottom.bar(xs, [float(st.delta) for st in trace.steps], color="tab:orange")
        for x, st in zip(xs, trace.steps):
            bottom.annotate(st.mover, (x, float(st.delta)), ha="center", va="bottom", fontsize=7)
    bottom.set_xlabel("step")
    bottom.set_ylabel("mover's gain")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def plot_efficiency(report: EfficiencyReport, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 3.5))
    values = [float(w) for w in report.welfares]
    ax.bar(range(len(values)), values, color="tab:green", label="equilibria")
    ax.axhline(float(report.optimum), color="black", linestyle="--", label="optimum")
    ax.set_xlabel("equilibrium (canonical order)")
    ax.set_ylabel("social welfare")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)

