"""JSON-lines trajectory traces: one ``{t, s, a, r, done}`` record per step.

``t`` restarts at 0 on every episode; ``s`` is the observation at the
moment the action was chosen. Traces are the offline interchange format
for causal discovery.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterator

import numpy as np

__all__ = ["iter_trace", "write_trace"]


def write_trace(path: str | Path, records) -> int:
    """Write (t, obs, action, rewards, done) tuples; returns the count."""
    count = 0
    with open(path, "w") as fh:
        for t, obs, action, rewards, done in records:
            doc = {
                "t": int(t),
                "s": np.asarray(obs).tolist(),
                "a": np.asarray(action).tolist(),
                "r": np.asarray(rewards).tolist(),
                "done": bool(done),
            }
            fh.write(json.dumps(doc) + "\n")
            count += 1
    return count


def iter_trace(path: str | Path) -> Iterator[dict]:
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)
