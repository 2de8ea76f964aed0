"""Adam optimizer and global-norm gradient clipping."""

from __future__ import annotations

import numpy as np

from .tensor import NonFiniteError, Tensor

__all__ = ["Adam", "AdamState", "clip_global_norm", "global_norm"]


class AdamState:
    """Per-parameter first/second moments plus the shared step count."""

    def __init__(self, params: list[tuple[str, Tensor]]):
        self.step_count = 0
        self.m = {name: np.zeros_like(p.data) for name, p in params}
        self.v = {name: np.zeros_like(p.data) for name, p in params}


class Adam:
    """Standard Adam with bias correction.

    betas default to (0.9, 0.999) and epsilon to 1e-8; updates are
    deterministic given the gradient stream.
    """

    def __init__(
        self,
        params: list[tuple[str, Tensor]],
        lr: float,
        betas: tuple[float, float] = (0.9, 0.999),
        eps: float = 1e-8,
    ):
        self.params = params
        self.lr = lr
        self.beta1, self.beta2 = betas
        self.eps = eps
        self.state = AdamState(params)

    def step(self, grads: dict[str, np.ndarray] | None = None) -> None:
        """Apply one update from ``grads`` (or the accumulated .grad fields)."""
        st = self.state
        st.step_count += 1
        bc1 = 1.0 - self.beta1**st.step_count
        bc2 = 1.0 - self.beta2**st.step_count
        for name, p in self.params:
            g = grads[name] if grads is not None else p.grad
            if g is None:
                continue
            if not np.all(np.isfinite(g)):
                raise NonFiniteError(f"non-finite gradient for parameter {name}")
            m = st.m[name]
            v = st.v[name]
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * (g * g)
            p.data -= self.lr * (m / bc1) / (np.sqrt(v / bc2) + self.eps)


def global_norm(grads: dict[str, np.ndarray]) -> float:
    total = 0.0
    for g in grads.values():
        total += float(np.dot(g.ravel(), g.ravel()))
    return float(np.sqrt(total))


def clip_global_norm(grads: dict[str, np.ndarray], max_norm: float) -> dict[str, np.ndarray]:
    """Scale all gradients by max_norm/N when their joint L2 norm N exceeds max_norm."""
    if max_norm <= 0:
        raise ValueError("max_norm must be positive")
    norm = global_norm(grads)
    if not np.isfinite(norm):
        raise NonFiniteError("non-finite gradient norm")
    if norm > max_norm:
        scale = max_norm / norm
        grads = {name: g * scale for name, g in grads.items()}
    return grads
