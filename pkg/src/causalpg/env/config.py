"""Environment configuration: JSON-loadable, with per-domain parameter blocks."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .gridworld import GridWorld
from .sparse import SparseGridWorld
from .toy import ContinuousToyEnv

__all__ = ["EnvConfig", "GridParams", "SparseParams", "ToyParams", "make_env"]


@dataclass
class GridParams:
    width: int = 6
    height: int = 6
    n_orange: int = 4
    n_green: int = 3
    n_blue: int = 3
    max_steps: int = 100


@dataclass
class SparseParams:
    mode: str = "immediate"
    episode_length: int = 5
    goal_distance: int = 1
    terminal_reward: float = 10.0
    required_arm_value: int = 1


@dataclass
class ToyParams:
    size: float = 10.0
    max_steps: int = 50
    obstacles: list = field(default_factory=lambda: [[3.0, 5.0, 1.5], [7.0, 4.0, 1.5]])


def _from_dict(cls, doc: dict):
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown {cls.__name__} keys: {sorted(unknown)}")
    return cls(**doc)


@dataclass
class EnvConfig:
    domain: str = "minigrid"  # minigrid | minigrid_sparse | toy
    grid: GridParams = field(default_factory=GridParams)
    sparse: SparseParams = field(default_factory=SparseParams)
    toy: ToyParams = field(default_factory=ToyParams)

    @classmethod
    def from_dict(cls, doc: dict) -> "EnvConfig":
        doc = dict(doc)
        grid = _from_dict(GridParams, doc.pop("grid", {}))
        sparse = _from_dict(SparseParams, doc.pop("sparse", {}))
        toy = _from_dict(ToyParams, doc.pop("toy", {}))
        domain = doc.pop("domain", "minigrid")
        if doc:
            raise ValueError(f"unknown env config keys: {sorted(doc)}")
        if domain not in ("minigrid", "minigrid_sparse", "toy"):
            raise ValueError(f"unknown domain {domain!r}")
        return cls(domain=domain, grid=grid, sparse=sparse, toy=toy)

    @classmethod
    def load(cls, path: str | Path) -> "EnvConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def make_env(cfg: EnvConfig):
    if cfg.domain == "minigrid":
        g = cfg.grid
        return GridWorld(
            width=g.width,
            height=g.height,
            n_orange=g.n_orange,
            n_green=g.n_green,
            n_blue=g.n_blue,
            max_steps=g.max_steps,
        )
    if cfg.domain == "minigrid_sparse":
        s = cfg.sparse
        return SparseGridWorld(
            mode=s.mode,
            width=cfg.grid.width,
            height=cfg.grid.height,
            episode_length=s.episode_length,
            goal_distance=s.goal_distance,
            terminal_reward=s.terminal_reward,
            required_arm_value=s.required_arm_value,
        )
    if cfg.domain == "toy":
        t = cfg.toy
        return ContinuousToyEnv(size=t.size, max_steps=t.max_steps, obstacles=t.obstacles)
    raise ValueError(f"unknown domain {cfg.domain!r}")
