"""Reverse-mode automatic differentiation over float64 numpy arrays.

A Tensor wraps an ndarray and records the primitive op that produced it,
forming a dynamic computation graph. Calling ``backward()`` on a scalar
loss walks the graph once in reverse topological order and accumulates
gradients into every tensor created with ``requires_grad=True``.

Everything is float64: the gradient checks and the mutual-information
thresholds downstream are tolerance-sensitive, so speed is traded for
reproducibility.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Tensor",
    "ShapeError",
    "NonFiniteError",
    "as_tensor",
    "concat",
    "conv2d",
    "gather",
    "log_softmax",
    "masked_elementwise_max",
    "maxpool2d",
    "minimum",
]


class ShapeError(ValueError):
    """Operands have incompatible shapes for the requested op."""


class NonFiniteError(FloatingPointError):
    """A forward value or gradient contains NaN or Inf."""


class Tensor:
    """Node in the computation graph: float64 data plus gradient plumbing."""

    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward")

    def __init__(self, data, requires_grad: bool = False):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad: np.ndarray | None = None
        self.requires_grad = requires_grad
        self._parents: tuple[Tensor, ...] = ()
        self._backward: Callable[[np.ndarray], None] | None = None

    # -- introspection -------------------------------------------------

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    def item(self) -> float:
        return float(self.data)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    # -- autograd core -------------------------------------------------

    def backward(self) -> None:
        """Accumulate gradients of this scalar into all reachable leaves.

        Visits each node exactly once (reverse topological order). Raises
        NonFiniteError if the loss itself is not finite; gradient
        finiteness is checked where gradients are consumed (optimizer /
        clipping) to keep the hot path cheap.
        """
        if self.data.size != 1:
            raise ShapeError(f"backward() requires a scalar, got shape {self.shape}")
        if not np.isfinite(self.data):
            raise NonFiniteError("backward() called on a non-finite loss")

        order: list[Tensor] = []
        seen: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if id(p) not in seen:
                    stack.append((p, False))

        self.grad = np.ones_like(self.data)
        for node in reversed(order):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)

    def _accumulate(self, g: np.ndarray) -> None:
        if self.grad is None:
            self.grad = g.copy() if isinstance(g, np.ndarray) else np.asarray(g)
        else:
            self.grad += g

    def zero_grad(self) -> None:
        self.grad = None

    def detach(self) -> "Tensor":
        return Tensor(self.data)

    # -- operators -----------------------------------------------------

    def __add__(self, other):
        return _add(self, as_tensor(other))

    def __radd__(self, other):
        return _add(as_tensor(other), self)

    def __sub__(self, other):
        return _add(self, _neg(as_tensor(other)))

    def __rsub__(self, other):
        return _add(as_tensor(other), _neg(self))

    def __mul__(self, other):
        return _mul(self, as_tensor(other))

    def __rmul__(self, other):
        return _mul(as_tensor(other), self)

    def __truediv__(self, other):
        return _div(self, as_tensor(other))

    def __rtruediv__(self, other):
        return _div(as_tensor(other), self)

    def __neg__(self):
        return _neg(self)

    def __matmul__(self, other):
        return matmul(self, as_tensor(other))

    # -- methods mirroring module-level ops ------------------------------

    def sum(self, axis=None, keepdims: bool = False) -> "Tensor":
        return tsum(self, axis=axis, keepdims=keepdims)

    def mean(self, axis=None, keepdims: bool = False) -> "Tensor":
        return tmean(self, axis=axis, keepdims=keepdims)

    def reshape(self, *shape) -> "Tensor":
        return reshape(self, shape if len(shape) > 1 else shape[0])

    def relu(self) -> "Tensor":
        return relu(self)

    def tanh(self) -> "Tensor":
        return tanh(self)

    def exp(self) -> "Tensor":
        return texp(self)

    def log(self) -> "Tensor":
        return tlog(self)

    def square(self) -> "Tensor":
        return square(self)

    def clamp(self, lo: float, hi: float) -> "Tensor":
        return clamp(self, lo, hi)

    def check_finite(self, what: str = "tensor") -> "Tensor":
        if not np.all(np.isfinite(self.data)):
            raise NonFiniteError(f"non-finite values in {what}")
        return self


def as_tensor(x) -> Tensor:
    """Wrap arrays and scalars as constant tensors; pass tensors through."""
    if isinstance(x, Tensor):
        return x
    return Tensor(x)


def _make(data: np.ndarray, parents: Sequence[Tensor], backward: Callable) -> Tensor:
    out = Tensor(data)
    if any(p.requires_grad or p._parents for p in parents):
        out.requires_grad = any(p.requires_grad for p in parents)
        out._parents = tuple(parents)
        out._backward = backward
    return out


def _unbroadcast(g: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Reduce a gradient back to the shape it was broadcast from."""
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, d in enumerate(shape) if d == 1 and g.shape[i] != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g


# -- elementwise arithmetic ---------------------------------------------


def _add(a: Tensor, b: Tensor) -> Tensor:
    def backward(g):
        a._accumulate(_unbroadcast(g, a.data.shape))
        b._accumulate(_unbroadcast(g, b.data.shape))

    return _make(a.data + b.data, (a, b), backward)


def _mul(a: Tensor, b: Tensor) -> Tensor:
    def backward(g):
        a._accumulate(_unbroadcast(g * b.data, a.data.shape))
        b._accumulate(_unbroadcast(g * a.data, b.data.shape))

    return _make(a.data * b.data, (a, b), backward)


def _div(a: Tensor, b: Tensor) -> Tensor:
    def backward(g):
        a._accumulate(_unbroadcast(g / b.data, a.data.shape))
        b._accumulate(_unbroadcast(-g * a.data / (b.data * b.data), b.data.shape))

    return _make(a.data / b.data, (a, b), backward)


def _neg(a: Tensor) -> Tensor:
    def backward(g):
        a._accumulate(-g)

    return _make(-a.data, (a,), backward)


def texp(a: Tensor) -> Tensor:
    out_data = np.exp(a.data)

    def backward(g):
        a._accumulate(g * out_data)

    return _make(out_data, (a,), backward)


def tlog(a: Tensor) -> Tensor:
    def backward(g):
        a._accumulate(g / a.data)

    return _make(np.log(a.data), (a,), backward)


def square(a: Tensor) -> Tensor:
    def backward(g):
        a._accumulate(g * (2.0 * a.data))

    return _make(a.data * a.data, (a,), backward)


def relu(a: Tensor) -> Tensor:
    mask = a.data > 0.0

    def backward(g):
        a._accumulate(g * mask)

    return _make(np.where(mask, a.data, 0.0), (a,), backward)


def tanh(a: Tensor) -> Tensor:
    out_data = np.tanh(a.data)

    def backward(g):
        a._accumulate(g * (1.0 - out_data * out_data))

    return _make(out_data, (a,), backward)


def clamp(a: Tensor, lo: float, hi: float) -> Tensor:
    # Gradient passes through wherever the input lies inside [lo, hi].
    mask = (a.data >= lo) & (a.data <= hi)

    def backward(g):
        a._accumulate(g * mask)

    return _make(np.clip(a.data, lo, hi), (a,), backward)


def minimum(a: Tensor, b: Tensor) -> Tensor:
    """Elementwise min; ties route the gradient to the first argument."""
    if a.data.shape != b.data.shape:
        raise ShapeError(f"minimum() shapes differ: {a.shape} vs {b.shape}")
    take_a = a.data <= b.data

    def backward(g):
        a._accumulate(g * take_a)
        b._accumulate(g * ~take_a)

    return _make(np.where(take_a, a.data, b.data), (a, b), backward)


# -- reductions and shaping -----------------------------------------------


def tsum(a: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    def backward(g):
        if axis is None:
            a._accumulate(np.broadcast_to(g, a.data.shape).copy())
        else:
            ge = np.expand_dims(g, axis) if not keepdims else g
            a._accumulate(np.broadcast_to(ge, a.data.shape).copy())

    return _make(a.data.sum(axis=axis, keepdims=keepdims), (a,), backward)


def tmean(a: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    if axis is None:
        count = a.data.size
    else:
        count = a.data.shape[axis]

    def backward(g):
        if axis is None:
            a._accumulate(np.broadcast_to(g / count, a.data.shape).copy())
        else:
            ge = np.expand_dims(g, axis) if not keepdims else g
            a._accumulate(np.broadcast_to(ge / count, a.data.shape).copy())

    return _make(a.data.mean(axis=axis, keepdims=keepdims), (a,), backward)


def reshape(a: Tensor, shape) -> Tensor:
    def backward(g):
        a._accumulate(g.reshape(a.data.shape))

    return _make(a.data.reshape(shape), (a,), backward)


def concat(tensors: Sequence[Tensor], axis: int = -1) -> Tensor:
    tensors = [as_tensor(t) for t in tensors]
    sizes = [t.data.shape[axis] for t in tensors]
    offsets = np.cumsum([0] + sizes)

    def backward(g):
        for t, lo, hi in zip(tensors, offsets[:-1], offsets[1:]):
            idx = [slice(None)] * g.ndim
            idx[axis] = slice(lo, hi)
            t._accumulate(g[tuple(idx)])

    return _make(np.concatenate([t.data for t in tensors], axis=axis), tensors, backward)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.data.ndim != 2 or b.data.ndim != 2:
        raise ShapeError("matmul() supports 2-D operands only")
    if a.data.shape[1] != b.data.shape[0]:
        raise ShapeError(f"matmul() inner dims differ: {a.shape} vs {b.shape}")

    def backward(g):
        a._accumulate(g @ b.data.T)
        b._accumulate(a.data.T @ g)

    return _make(a.data @ b.data, (a, b), backward)


def gather(a: Tensor, index: np.ndarray, axis: int = -1) -> Tensor:
    """Pick one entry per position along ``axis`` (take_along_axis)."""
    index = np.asarray(index)
    out_data = np.take_along_axis(a.data, index, axis=axis)

    def backward(g):
        ga = np.zeros_like(a.data)
        np.put_along_axis(ga, index, g, axis=axis)
        a._accumulate(ga)

    return _make(out_data, (a,), backward)


def log_softmax(a: Tensor, axis: int = -1) -> Tensor:
    shifted = a.data - a.data.max(axis=axis, keepdims=True)
    out_data = shifted - np.log(np.exp(shifted).sum(axis=axis, keepdims=True))
    softmax = np.exp(out_data)

    def backward(g):
        a._accumulate(g - softmax * g.sum(axis=axis, keepdims=True))

    return _make(out_data, (a,), backward)


# -- structured ops --------------------------------------------------------


def masked_elementwise_max(features: Sequence[Tensor], mask: Sequence[bool]) -> Tensor:
    """Elementwise max over feature slots, with masked slots removed.

    Masked slots are treated as -inf, so they can never win a coordinate
    and receive exactly zero gradient. Ties between unmasked slots break
    toward the lowest slot index, which keeps the backward pass
    deterministic.
    """
    features = [as_tensor(f) for f in features]
    mask = list(mask)
    if len(mask) != len(features):
        raise ShapeError("mask length must equal the number of feature slots")
    if all(mask):
        raise ValueError("masked_elementwise_max: all slots masked")
    base = features[0].data.shape
    for f in features[1:]:
        if f.data.shape != base:
            raise ShapeError("feature slots must share one shape")

    stacked = np.stack([f.data for f in features], axis=0)
    for s, m in enumerate(mask):
        if m:
            stacked[s] = -np.inf
    winner = stacked.argmax(axis=0)  # first max -> lowest slot on ties
    out_data = np.take_along_axis(stacked, winner[None], axis=0)[0]

    def backward(g):
        for s, f in enumerate(features):
            if not mask[s]:
                f._accumulate(g * (winner == s))

    return _make(out_data, features, backward)


def _windows(x: np.ndarray, k: int, stride: int) -> np.ndarray:
    """View of all k-by-k patches: (B, C, OH, OW, k, k)."""
    v = np.lib.stride_tricks.sliding_window_view(x, (k, k), axis=(2, 3))
    return v[:, :, ::stride, ::stride]


def conv2d(x: Tensor, weight: Tensor, bias: Tensor | None, stride: int = 1) -> Tensor:
    """2-D cross-correlation with valid padding.

    ``x``: (B, C, H, W); ``weight``: (O, C, k, k); output (B, O, OH, OW)
    with OH = (H - k) // stride + 1.
    """
    bsz, cin, h, w = x.data.shape
    cout, cw, k, k2 = weight.data.shape
    if cw != cin or k != k2:
        raise ShapeError(f"conv2d weight {weight.shape} does not match input {x.shape}")
    if h < k or w < k:
        raise ShapeError(f"conv2d input {x.shape} smaller than kernel {k}")
    oh = (h - k) // stride + 1
    ow = (w - k) // stride + 1

    cols = _windows(x.data, k, stride).transpose(0, 2, 3, 1, 4, 5).reshape(bsz, oh * ow, cin * k * k)
    wmat = weight.data.reshape(cout, cin * k * k)
    out_data = cols @ wmat.T
    if bias is not None:
        out_data = out_data + bias.data
    out_data = out_data.transpose(0, 2, 1).reshape(bsz, cout, oh, ow)

    def backward(g):
        g2 = g.reshape(bsz, cout, oh * ow).transpose(0, 2, 1)  # (B, OH*OW, O)
        gw = np.tensordot(g2, cols, axes=([0, 1], [0, 1]))  # (O, C*k*k)
        weight._accumulate(gw.reshape(weight.data.shape))
        if bias is not None:
            bias._accumulate(g2.sum(axis=(0, 1)))
        gcols = (g2 @ wmat).reshape(bsz, oh, ow, cin, k, k).transpose(0, 3, 1, 2, 4, 5)
        gx = np.zeros_like(x.data)
        for ki in range(k):
            for kj in range(k):
                gx[:, :, ki : ki + oh * stride : stride, kj : kj + ow * stride : stride] += gcols[..., ki, kj]
        x._accumulate(gx)

    parents = (x, weight) if bias is None else (x, weight, bias)
    return _make(out_data, parents, backward)


def maxpool2d(x: Tensor, size: int, stride: int = 1) -> Tensor:
    """Max pooling with valid windows; ties break to the lowest flat index."""
    bsz, c, h, w = x.data.shape
    if h < size or w < size:
        raise ShapeError(f"maxpool2d input {x.shape} smaller than window {size}")
    oh = (h - size) // stride + 1
    ow = (w - size) // stride + 1

    win = _windows(x.data, size, stride).reshape(bsz, c, oh, ow, size * size)
    winner = win.argmax(axis=-1)
    out_data = np.take_along_axis(win, winner[..., None], axis=-1)[..., 0]

    def backward(g):
        gx = np.zeros_like(x.data)
        for p in range(size * size):
            ki, kj = divmod(p, size)
            contrib = g * (winner == p)
            gx[:, :, ki : ki + oh * stride : stride, kj : kj + ow * stride : stride] += contrib
        x._accumulate(gx)

    return _make(out_data, (x,), backward)
