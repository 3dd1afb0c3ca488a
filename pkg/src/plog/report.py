"""Figure rendering for the report paths of the CLI.

Figures are written next to the delimited output, never shown
interactively, so the Agg backend is forced before pyplot is imported.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .induct import ConvergenceRow  # noqa: E402


def plot_convergence(rows: list[ConvergenceRow], path: str, title: str = "") -> None:
    """Convergence curves: prefix probability, posterior of the universal
    hypothesis and next-instance prediction against n."""
    ns = [r.n for r in rows]
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)

    top.plot(ns, [r.posterior_universal for r in rows], "o-", ms=3,
             label="posterior of universal hypothesis")
    top.plot(ns, [r.predictive for r in rows], "s--", ms=3,
             label="next-instance prediction")
    top.set_ylabel("probability")
    top.set_ylim(-0.05, 1.05)
    top.legend(loc="best", fontsize=8)
    top.grid(True, alpha=0.3)
    if title:
        top.set_title(title, fontsize=10)

    bottom.semilogy(ns, [max(r.prefix_prob, 1e-300) for r in rows], "o-", ms=3,
                    color="tab:green", label="all-true prefix probability")
    bottom.set_xlabel("observed positive instances n")
    bottom.set_ylabel("prefix probability")
    bottom.legend(loc="best", fontsize=8)
    bottom.grid(True, alpha=0.3)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
