"""Network building blocks on top of the autodiff tensor core.

A ComputationGraph owns named parameters and exposes ``forward``; layers
are small containers that register their weights with dotted names so
checkpoints, optimizers, and gradient clipping can address every
parameter uniformly.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .tensor import Tensor, conv2d, matmul, maxpool2d, relu, reshape, tanh

__all__ = [
    "ComputationGraph",
    "Conv2d",
    "Dense",
    "GridFeatureExtractor",
    "MaxPool2d",
    "MlpExtractor",
    "uniform_fan_in",
]


def uniform_fan_in(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int) -> np.ndarray:
    """Weight init: uniform on [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero elsewhere."""
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


class ComputationGraph:
    """Base class for parameterized networks.

    Subclasses register child graphs and Parameters as attributes;
    ``parameters()`` yields (dotted_name, tensor) pairs in a stable
    order. Parameter snapshots are value copies, safe to hand to other
    threads.
    """

    def _children(self) -> Iterator[tuple[str, "ComputationGraph"]]:
        for name, value in vars(self).items():
            if isinstance(value, ComputationGraph):
                yield name, value
            elif isinstance(value, (list, tuple)):
                for i, item in enumerate(value):
                    if isinstance(item, ComputationGraph):
                        yield f"{name}.{i}", item

    def _own_params(self) -> Iterator[tuple[str, Tensor]]:
        for name, value in vars(self).items():
            if isinstance(value, Tensor) and value.requires_grad:
                yield name, value

    def parameters(self) -> list[tuple[str, Tensor]]:
        out = list(self._own_params())
        for cname, child in self._children():
            out.extend((f"{cname}.{pname}", p) for pname, p in child.parameters())
        return out

    def zero_grad(self) -> None:
        for _, p in self.parameters():
            p.zero_grad()

    def num_params(self) -> int:
        return sum(p.size for _, p in self.parameters())

    def state_dict(self) -> dict[str, np.ndarray]:
        return {name: p.data.copy() for name, p in self.parameters()}

    def load_state_dict(self, state: dict[str, np.ndarray]) -> None:
        params = dict(self.parameters())
        missing = set(params) - set(state)
        extra = set(state) - set(params)
        if missing or extra:
            raise KeyError(f"state mismatch: missing={sorted(missing)} extra={sorted(extra)}")
        for name, p in params.items():
            arr = np.asarray(state[name], dtype=np.float64)
            if arr.shape != p.data.shape:
                raise ValueError(f"shape mismatch for {name}: {arr.shape} vs {p.data.shape}")
            p.data = arr.copy()

    def forward(self, *args, **kwargs):
        raise NotImplementedError

    def __call__(self, *args, **kwargs):
        return self.forward(*args, **kwargs)


class Dense(ComputationGraph):
    """Affine layer y = x @ W + b."""

    def __init__(self, in_dim: int, out_dim: int, rng: np.random.Generator):
        self.weight = Tensor(uniform_fan_in(rng, (in_dim, out_dim), in_dim), requires_grad=True)
        self.bias = Tensor(np.zeros(out_dim), requires_grad=True)

    def forward(self, x: Tensor) -> Tensor:
        return matmul(x, self.weight) + self.bias


class Conv2d(ComputationGraph):
    """Valid-padding 2-D convolution, kernel k x k, given stride."""

    def __init__(self, in_ch: int, out_ch: int, kernel: int, stride: int, rng: np.random.Generator):
        fan_in = in_ch * kernel * kernel
        self.weight = Tensor(uniform_fan_in(rng, (out_ch, in_ch, kernel, kernel), fan_in), requires_grad=True)
        self.bias = Tensor(np.zeros(out_ch), requires_grad=True)
        self.stride = stride

    def forward(self, x: Tensor) -> Tensor:
        return conv2d(x, self.weight, self.bias, stride=self.stride)


class MaxPool2d(ComputationGraph):
    """Max pooling. Stride defaults to 1 so the grid conv stack keeps a
    consistent shape trace on 6x6 inputs under valid padding."""

    def __init__(self, size: int, stride: int = 1):
        self.size = size
        self.stride = stride

    def forward(self, x: Tensor) -> Tensor:
        return maxpool2d(x, self.size, self.stride)


class GridFeatureExtractor(ComputationGraph):
    """Conv stack for 2-channel grid images: C(16,2,1)-M(2)-C(32,2,1)-C(64,2,1)-L.

    ReLU follows every conv except the last; the flattened output feeds
    the downstream dense trunks. ``out_dim`` is fixed by tracing the
    declared layers over the input shape.
    """

    def __init__(self, rng: np.random.Generator, in_shape: tuple[int, int, int] = (2, 6, 6)):
        c, h, w = in_shape
        self.conv1 = Conv2d(c, 16, 2, 1, rng)
        self.pool = MaxPool2d(2, stride=1)
        self.conv2 = Conv2d(16, 32, 2, 1, rng)
        self.conv3 = Conv2d(32, 64, 2, 1, rng)
        h = h - 1  # conv1
        w = w - 1
        h = h - 1  # pool, stride 1
        w = w - 1
        h = h - 1  # conv2
        w = w - 1
        h = h - 1  # conv3
        w = w - 1
        self.out_dim = 64 * h * w

    def forward(self, x: Tensor) -> Tensor:
        h = relu(self.conv1(x))
        h = self.pool(h)
        h = relu(self.conv2(h))
        h = self.conv3(h)
        return reshape(h, (x.shape[0], self.out_dim))


class MlpExtractor(ComputationGraph):
    """Dense feature stack for flat observations; ReLU between layers,
    linear output."""

    def __init__(self, in_dim: int, widths: tuple[int, ...], rng: np.random.Generator):
        dims = (in_dim,) + tuple(widths)
        self.layers = [Dense(a, b, rng) for a, b in zip(dims[:-1], dims[1:])]
        self.out_dim = dims[-1]

    def forward(self, x: Tensor) -> Tensor:
        h = x
        for layer in self.layers[:-1]:
            h = relu(layer(h))
        return self.layers[-1](h)
