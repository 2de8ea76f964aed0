"""Bipartite causal matrices between action dimensions and reward channels.

``CausalMatrix`` holds the binary n x m bi-adjacency matrix (entry (i, j)
set iff action dimension i drives reward channel j); ``CmiMatrix`` holds
the underlying non-negative conditional-mutual-information estimates that
the binary matrix is thresholded from.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["CausalMatrix", "CmiMatrix", "matrix_report"]


@dataclass
class CausalMatrix:
    entries: np.ndarray  # (n, m) of {0, 1}
    rows: list[str] = field(default_factory=list)  # action-dimension names
    cols: list[str] = field(default_factory=list)  # reward-channel names

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.int64)
        if self.entries.ndim != 2:
            raise ValueError("causal matrix must be 2-D")
        if not np.isin(self.entries, (0, 1)).all():
            raise ValueError("causal matrix entries must be 0 or 1")
        if not self.rows:
            self.rows = [f"a{i}" for i in range(self.entries.shape[0])]
        if not self.cols:
            self.cols = [f"r{j}" for j in range(self.entries.shape[1])]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def __eq__(self, other) -> bool:
        return isinstance(other, CausalMatrix) and self.entries.shape == other.entries.shape and bool(
            (self.entries == other.entries).all()
        )

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": self.entries.tolist()}

    @classmethod
    def from_json(cls, doc: dict) -> "CausalMatrix":
        return cls(entries=np.asarray(doc["entries"]), rows=list(doc["rows"]), cols=list(doc["cols"]))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "CausalMatrix":
        return cls.from_json(json.loads(Path(path).read_text()))


@dataclass
class CmiMatrix:
    entries: np.ndarray  # (n, m) non-negative floats
    rows: list[str] = field(default_factory=list)
    cols: list[str] = field(default_factory=list)
    epsilon: float | None = None  # threshold used to binarize, once applied
    k: int | None = None  # detection window length the estimates came from

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.float64)
        if self.entries.ndim != 2:
            raise ValueError("CMI matrix must be 2-D")
        if (self.entries < 0).any():
            raise ValueError("CMI entries must be non-negative (clip before construction)")
        if not self.rows:
            self.rows = [f"a{i}" for i in range(self.entries.shape[0])]
        if not self.cols:
            self.cols = [f"r{j}" for j in range(self.entries.shape[1])]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": self.entries.tolist(),
            "epsilon": self.epsilon,
            "k": self.k,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CmiMatrix":
        return cls(
            entries=np.asarray(doc["entries"]),
            rows=list(doc["rows"]),
            cols=list(doc["cols"]),
            epsilon=doc.get("epsilon"),
            k=doc.get("k"),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "CmiMatrix":
        return cls.from_json(json.loads(Path(path).read_text()))


def matrix_report(predicted: CausalMatrix, truth: CausalMatrix) -> dict:
    """Edge precision/recall of ``predicted`` against ``truth``.

    Returns precision, recall, exact_match, and a per-edge table of
    (action, channel, predicted, truth) rows. Precision and recall are
    1.0 when the predicted (resp. true) edge set is empty.
    """
    if predicted.shape != truth.shape:
        raise ValueError(f"shape mismatch: {predicted.shape} vs {truth.shape}")
    p = predicted.entries
    t = truth.entries
    true_pos = int((p & t).sum())
    pred_pos = int(p.sum())
    actual_pos = int(t.sum())
    precision = true_pos / pred_pos if pred_pos else 1.0
    recall = true_pos / actual_pos if actual_pos else 1.0
    table = [
        {"action": predicted.rows[i], "channel": predicted.cols[j], "predicted": int(p[i, j]), "truth": int(t[i, j])}
        for i in range(p.shape[0])
        for j in range(p.shape[1])
    ]
    return {
        "precision": precision,
        "recall": recall,
        "exact_match": bool((p == t).all()),
        "edges": table,
    }


def format_matrix(matrix: CausalMatrix | CmiMatrix, title: str = "") -> str:
    """Human-readable text table with row/column labels."""
    is_binary = isinstance(matrix, CausalMatrix)
    width = max([len(c) for c in matrix.cols] + [8])
    lines = []
    if title:
        lines.append(title)
    header = " " * 14 + "".join(f"{c:>{width + 2}}" for c in matrix.cols)
    lines.append(header)
    for i, rname in enumerate(matrix.rows):
        cells = []
        for j in range(len(matrix.cols)):
            v = matrix.entries[i, j]
            cells.append(f"{int(v):>{width + 2}d}" if is_binary else f"{v:>{width + 2}.4f}")
        lines.append(f"{rname:<14}" + "".join(cells))
    return "\n".join(lines)
