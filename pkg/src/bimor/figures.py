"""Figure rendering for the report paths: log output-error curves written
to PNG files next to the delimited output."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["render_error_curves"]

_FLOOR = 1e-300  # keeps log of an exactly-zero error finite


def render_error_curves(curves, path, title=None, xlabel="t (s)"):
    """Plot ln(||y - y_r||) against time for one or more ROMs.

    Parameters
    ----------
    curves : sequence of (label, times, err)
        ``err`` is the pointwise output-error norm.
    path : path-like
        Output PNG file.
    """
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for label, times, err in curves:
        err = np.maximum(np.asarray(err, dtype=float), _FLOOR)
        ax.plot(times, np.log(err), label=label, linewidth=1.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(r"ln(output error)")
    if title:
        ax.set_title(title)
    if curves:
        ax.legend(loc="best", fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
