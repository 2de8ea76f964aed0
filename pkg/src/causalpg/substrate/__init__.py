"""Minimal float64 tensor, autodiff, and optimizer layer."""

from .checkpoint import CheckpointError, load_params, save_params
from .layers import (
    ComputationGraph,
    Conv2d,
    Dense,
    GridFeatureExtractor,
    MaxPool2d,
    MlpExtractor,
    uniform_fan_in,
)
from .optim import Adam, AdamState, clip_global_norm, global_norm
from .tensor import (
    NonFiniteError,
    ShapeError,
    Tensor,
    as_tensor,
    concat,
    conv2d,
    gather,
    log_softmax,
    masked_elementwise_max,
    maxpool2d,
    minimum,
    relu,
    tanh,
)

__all__ = [
    "Adam",
    "AdamState",
    "CheckpointError",
    "ComputationGraph",
    "Conv2d",
    "Dense",
    "GridFeatureExtractor",
    "MaxPool2d",
    "MlpExtractor",
    "NonFiniteError",
    "ShapeError",
    "Tensor",
    "as_tensor",
    "clip_global_norm",
    "concat",
    "conv2d",
    "gather",
    "global_norm",
    "load_params",
    "log_softmax",
    "masked_elementwise_max",
    "maxpool2d",
    "minimum",
    "relu",
    "save_params",
    "tanh",
    "uniform_fan_in",
]
