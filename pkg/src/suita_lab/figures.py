"""Render scan rows to image files (matplotlib, Agg backend)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .analysis import ScanRow  # noqa: E402
from .errors import ParameterError  # noqa: E402


def plot_rows(rows: Sequence[ScanRow], path, title: str | None = None) -> Path:
    """F against b, one curve per (family, m); continuation column dashed if present.

    The file format follows the suffix of ``path``. Metadata that would
    change between runs (creation date, software version) is stripped.
    """
    if not rows:
        raise ParameterError("nothing to plot")
    path = Path(path)
    groups = {}
    for r in rows:
        groups.setdefault((r.family, r.m), []).append(r)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for (family, m), rs in groups.items():
        bs = [r.b for r in rs]
        label = f"m = {m:g}" if family == "em" else family
        ax.plot(bs, [r.F for r in rs], lw=1.2, label=label)
        if any(r.F_b14 is not None for r in rs):
            ax.plot(bs, [r.F_b14 for r in rs], lw=1.0, ls="--",
                    label=f"{label}, continued b <= 1/4 formula")
    ax.axhline(1.0, color="0.6", lw=0.6)
    ax.set_xlabel("b")
    ax.set_ylabel("F")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    meta = {"png": {"Software": None}, "svg": {"Date": None, "Creator": None},
            "pdf": {"CreationDate": None, "Producer": None, "Creator": None}}
    # fixed salt keeps SVG element ids stable between runs
    with matplotlib.rc_context({"svg.hashsalt": "suita-lab"}):
        fig.savefig(path, metadata=meta.get(path.suffix.lstrip(".").lower()))
    plt.close(fig)
    return path
