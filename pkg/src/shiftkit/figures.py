"""Matplotlib figure rendering for the report path.

Reports written as TSV get a PNG chart rendered alongside them (same stem,
``.png`` suffix). matplotlib is imported lazily so commands that emit no
report never pay for it.
"""

from __future__ import annotations

import io
from pathlib import Path

from .report import ROUGE_COLUMNS, atomic_write_bytes


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path: str | Path) -> None:
    buf = io.BytesIO()
    fig.savefig(buf, format="png", dpi=120, bbox_inches="tight")
    atomic_write_bytes(path, buf.getvalue())


def figure_path(report_path: str | Path) -> Path:
    return Path(report_path).with_suffix(".png")


def render_score_figure(header: list[str], rows: list[list[str]], path: str | Path, title: str) -> None:
    """Grouped bar chart of the ROUGE columns of a score report."""
    plt = _pyplot()
    systems = [row[0] for row in rows]
    columns = [c for c in ROUGE_COLUMNS if c in header]
    fig, ax = plt.subplots(figsize=(max(6.0, 1.8 * len(systems)), 4.0))
    width = 0.8 / max(1, len(columns))
    for ci, column in enumerate(columns):
        idx = header.index(column)
        values = [float(row[idx]) if row[idx] else 0.0 for row in rows]
        positions = [si + ci * width for si in range(len(systems))]
        ax.bar(positions, values, width=width, label=column)
    ax.set_xticks([si + 0.4 - width / 2 for si in range(len(systems))])
    ax.set_xticklabels(systems, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("score (x100)")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)


def render_stats_figure(rows: list[list[str]], path: str | Path, title: str) -> None:
    """Horizontal bar chart of the numeric statistics in a stats report."""
    plt = _pyplot()
    labels, values = [], []
    for name, value in rows:
        if name.startswith("lexicon_") or not value:
            continue
        try:
            number = float(value)
        except ValueError:
            continue
        if name.endswith("_count"):
            continue
        labels.append(name)
        values.append(number)
    fig, ax = plt.subplots(figsize=(8.0, max(3.0, 0.45 * len(labels))))
    ax.barh(range(len(labels)), values)
    ax.set_yticks(range(len(labels)))
    ax.set_yticklabels(labels, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("mean value")
    ax.set_title(title)
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)
