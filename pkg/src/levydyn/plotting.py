"""PNG rendering of tabulated series, one curve per time sample."""
from __future__ import annotations

import numpy as np


def render_series(path: str, x, t, y, xlabel: str, ylabel: str, title: str = "") -> str:
    import matplotlib

    matplotlib.use("Agg")
    from matplotlib import pyplot as plt

    x, t, y = (np.asarray(a, dtype=float) for a in (x, t, y))
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for tv in np.unique(t):
        sel = t == tv
        ax.plot(x[sel], y[sel], label=f"t = {tv:g}")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    # fixed metadata keeps repeated renders byte-identical
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path
