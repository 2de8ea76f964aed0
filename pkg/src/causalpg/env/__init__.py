"""Factored-reward environments: grid mobile-manipulation domain, its
sparse-reward variant, and a continuous-action toy domain."""

from .config import EnvConfig, GridParams, SparseParams, ToyParams, make_env
from .gridworld import (
    ACTION_DIMS,
    REWARD_CHANNELS,
    TILE_BLUE,
    TILE_EMPTY,
    TILE_GOAL,
    TILE_GREEN,
    TILE_ORANGE,
    EpisodeDone,
    GridWorld,
    LayoutError,
    ground_truth_causal_matrix,
)
from .sparse import SparseGridWorld
from .toy import ContinuousToyEnv
from .trace import iter_trace, write_trace

__all__ = [
    "ACTION_DIMS",
    "ContinuousToyEnv",
    "EnvConfig",
    "EpisodeDone",
    "GridParams",
    "GridWorld",
    "LayoutError",
    "REWARD_CHANNELS",
    "SparseGridWorld",
    "SparseParams",
    "TILE_BLUE",
    "TILE_EMPTY",
    "TILE_GOAL",
    "TILE_GREEN",
    "TILE_ORANGE",
    "ToyParams",
    "ground_truth_causal_matrix",
    "iter_trace",
    "make_env",
    "write_trace",
]
