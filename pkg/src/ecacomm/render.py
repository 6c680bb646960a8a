"""Space-time diagrams as portable bitmaps or figures, plus report plumbing."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def center_rows(rows):
    """Pad every row to the widest one with background 0, keeping it centered.

    Empty rows (an evolution that ran past exhaustion) are dropped.
    """
    rows = [r for r in rows if r]
    if not rows:
        raise ValueError("diagram has no nonempty rows")
    width = max(len(r) for r in rows)
    out = []
    for r in rows:
        left = (width - len(r)) // 2
        out.append("0" * left + r + "0" * (width - len(r) - left))
    return out


def as_grid(rows) -> np.ndarray:
    padded = center_rows(rows)
    return np.array([[int(c) for c in r] for r in padded], dtype=np.uint8)


def to_pbm(rows, binary: bool = False) -> bytes:
    """Encode a diagram as PBM, plain P1 by default or packed P4."""
    padded = center_rows(rows)
    h, w = len(padded), len(padded[0])
    if not binary:
        body = "\n".join(padded)
        return f"P1\n{w} {h}\n{body}\n".encode("ascii")
    head = f"P4\n{w} {h}\n".encode("ascii")
    packed = np.packbits(as_grid(rows), axis=1)
    return head + packed.tobytes()


def write_pbm(rows, path, binary: bool = False) -> None:
    with open(path, "wb") as fh:
        fh.write(to_pbm(rows, binary=binary))


def save_diagram_png(rows, path, title=None) -> None:
    grid = as_grid(rows)
    h, w = grid.shape
    fig, ax = plt.subplots(figsize=(min(10.0, max(2.0, w / 40)),
                                    min(10.0, max(2.0, h / 40))))
    ax.imshow(grid, cmap="binary", interpolation="nearest", aspect="equal")
    ax.set_xlabel("cell")
    ax.set_ylabel("step")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def save_line_plot(path, series, xlabel, ylabel, title=None) -> None:
    """One marked line per entry of series, a name -> (xs, ys) map."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, (xs, ys) in sorted(series.items()):
        ax.plot(xs, ys, marker="o", label=str(name))
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend(fontsize="small", ncol=2)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


@dataclass
class ReportDocument:
    """Machine-readable record of one CLI invocation."""

    version: str
    command: str
    parameters: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    timing: float = 0.0

    def to_json(self) -> str:
        payload = {
            "version": self.version,
            "command": self.command,
            "parameters": self.parameters,
            "results": self.results,
            "timing": self.timing,
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        data = json.loads(text)
        return cls(version=data["version"], command=data["command"],
                   parameters=data["parameters"], results=data["results"],
                   timing=data["timing"])
