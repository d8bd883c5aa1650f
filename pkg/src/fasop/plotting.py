"""Figures written next to the CSV/JSON output when ``--plot`` is given."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (6.4, 4.8),
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.6,
    "lines.markersize": 4,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}

MARKERS = {"approx": "o", "mc": "x", "closed-form": "s"}
LINESTYLES = {"asymptotic": ":", "mrc": "--"}


def plot_rows(rows, x, series, path, *, group=None, xlabel=None, title=None, floor=1e-12):
    """Semilog-y plot of ``series`` columns against ``x``, one line per group value.

    Values at or below ``floor`` are masked so log axes stay readable.
    """
    groups = sorted({row[group] for row in rows}) if group else [None]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for g in groups:
            subset = [row for row in rows if group is None or row[group] == g]
            xs = [row[x] for row in subset]
            for name in series:
                ys = [row[name] if row[name] > floor else float("nan") for row in subset]
                label = name if g is None else f"{name}, {group}={g}"
                ax.plot(
                    xs,
                    ys,
                    linestyle=LINESTYLES.get(name, "-" if name not in MARKERS else "none"),
                    marker=MARKERS.get(name),
                    label=label,
                )
        ax.set_yscale("log")
        ax.set_xlabel(xlabel or x)
        ax.set_ylabel("outage probability")
        if title:
            ax.set_title(title)
        ax.legend(fontsize="small", ncol=2 if len(groups) * len(series) > 6 else 1)
        fig.savefig(path)
        plt.close(fig)
    return path
