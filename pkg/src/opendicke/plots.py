"""Render a ResultTable as a matplotlib figure file.

Used by the CLI report path: every value column is drawn against the first
column, with flagged (NaN sentinel) rows masked out so pole gaps show as
breaks rather than spikes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .tables import ResultTable


def render(table: ResultTable, path: str, dpi: int = 150) -> None:
    """Write a line plot of the table's value columns to `path`."""
    data = np.asarray(table.rows, dtype=float)
    if data.size == 0:
        raise ValueError("cannot plot an empty table")
    x = data[:, 0]
    try:
        flag_idx = table.columns.index("flag")
    except ValueError:
        flag_idx = None
    ok = np.ones(len(x), dtype=bool)
    if flag_idx is not None:
        ok = data[:, flag_idx] == 0.0

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for j, name in enumerate(table.columns):
        if j == 0 or j == flag_idx:
            continue
        y = np.where(ok, data[:, j], np.nan)
        ax.plot(x, y, label=name, lw=1.2)
    ax.set_xlabel(table.columns[0])
    title = str(table.metadata.get("quantity", ""))
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8, loc="best")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    try:
        fig.savefig(path, dpi=dpi)
    except OSError as exc:
        raise IOError(f"cannot write figure file {path!r}: {exc}") from exc
    finally:
        plt.close(fig)
