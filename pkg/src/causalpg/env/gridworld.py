"""Grid mobile-manipulation domain with a five-channel factored reward.

The agent occupies one cell of a (default 6x6) grid and acts with a
4-dimensional discrete action each step: vertical move, horizontal move,
and two virtual arm dimensions, each taking one of three values. Both
movement dimensions apply simultaneously (diagonal steps are possible)
and are clamped at the grid boundary; movement values decode as
``delta = value - 1`` (0 = up/left, 1 = stay, 2 = down/right).

Reward channels, all emitted every step:

* ``up_down`` / ``left_right``: +1 when the vertical / horizontal
  distance to the goal shrinks, -1 when it grows, 0 otherwise.
* ``orange``: -5 on arriving at an orange cell (non-terminal).
* ``green`` / ``blue``: -5 for any step taken while standing on a
  green-wave / blue-wave cell unless the matching arm dimension emits
  that cell's required value. The required value is the number of empty
  8-neighbors of the cell, mod 3.

The wave penalty depends only on the occupied cell and the arm
dimension, never on the movement dimensions, so the ground-truth causal
matrix couples each arm to exactly one channel and the movement
dimensions to the navigation and orange channels only.

Layouts are procedural: the goal sits in the corner farthest from the
agent spawn and its free neighbors are wave tiles, so every route to the
goal ends with a step off a wave tile; remaining wave tiles and the
orange tiles scatter uniformly. A layout is accepted only if the goal is
reachable without touching orange (8-connected BFS).
"""

from __future__ import annotations

from collections import deque

import numpy as np

from ..matrix import CausalMatrix

__all__ = [
    "ACTION_DIMS",
    "EpisodeDone",
    "GridWorld",
    "LayoutError",
    "REWARD_CHANNELS",
    "TILE_BLUE",
    "TILE_EMPTY",
    "TILE_GOAL",
    "TILE_GREEN",
    "TILE_ORANGE",
    "ground_truth_causal_matrix",
]

TILE_EMPTY = 0
TILE_GOAL = 1
TILE_ORANGE = 2
TILE_GREEN = 3
TILE_BLUE = 4
_NUM_TILE_KINDS = 5

ACTION_DIMS = ("a_up_down", "a_left_right", "a_arm1", "a_arm2")
REWARD_CHANNELS = ("r_up_down", "r_left_right", "r_orange", "r_green", "r_blue")

_NEIGHBORS_8 = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]


class LayoutError(RuntimeError):
    """No admissible layout found within the retry budget."""


class EpisodeDone(RuntimeError):
    """step() called after the episode terminated."""


class GridWorld:
    """Factored-reward grid domain. ``reset(seed)`` is fully deterministic."""

    n_action_dims = 4
    n_action_values = 3
    action_space = "discrete"
    action_dims = ACTION_DIMS
    reward_channels = REWARD_CHANNELS
    n_channels = 5

    def __init__(
        self,
        width: int = 6,
        height: int = 6,
        n_orange: int = 4,
        n_green: int = 3,
        n_blue: int = 3,
        max_steps: int = 100,
    ):
        if n_green + n_blue < 3:
            raise ValueError("need at least 3 wave tiles to ring a corner goal")
        self.width = width
        self.height = height
        self.n_orange = n_orange
        self.n_green = n_green
        self.n_blue = n_blue
        self.max_steps = max_steps
        self.observation_shape = (2, height, width)
        self.tiles = np.zeros((height, width), dtype=np.int64)
        self.agent_pos = (0, 0)
        self.goal_pos = (height - 1, width - 1)
        self.steps = 0
        self.done = True

    # -- layout ----------------------------------------------------------

    @classmethod
    def from_layout(cls, tiles: np.ndarray, agent_pos: tuple[int, int], max_steps: int = 100) -> "GridWorld":
        """Build an episode-ready instance from an explicit tile grid."""
        tiles = np.asarray(tiles, dtype=np.int64)
        goals = np.argwhere(tiles == TILE_GOAL)
        if len(goals) != 1:
            raise ValueError("layout must contain exactly one goal tile")
        env = cls(width=tiles.shape[1], height=tiles.shape[0], max_steps=max_steps)
        env.tiles = tiles.copy()
        env.agent_pos = tuple(agent_pos)
        env.goal_pos = tuple(goals[0])
        env.steps = 0
        env.done = False
        return env

    def _in_bounds(self, r: int, c: int) -> bool:
        return 0 <= r < self.height and 0 <= c < self.width

    def _generate_layout(self, rng: np.random.Generator) -> None:
        for _ in range(200):
            agent = (int(rng.integers(self.height)), int(rng.integers(self.width)))
            corners = [(0, 0), (0, self.width - 1), (self.height - 1, 0), (self.height - 1, self.width - 1)]
            dists = [abs(agent[0] - r) + abs(agent[1] - c) for r, c in corners]
            best = max(dists)
            goal = corners[int(rng.choice([i for i, d in enumerate(dists) if d == best]))]

            tiles = np.zeros((self.height, self.width), dtype=np.int64)
            tiles[goal] = TILE_GOAL
            ring = [
                (goal[0] + dr, goal[1] + dc)
                for dr, dc in _NEIGHBORS_8
                if self._in_bounds(goal[0] + dr, goal[1] + dc)
            ]
            wave_kinds = [TILE_GREEN] * self.n_green + [TILE_BLUE] * self.n_blue
            rng.shuffle(wave_kinds)
            for cell, kind in zip(ring, wave_kinds):
                tiles[cell] = kind
            scatter_kinds = wave_kinds[len(ring) :] + [TILE_ORANGE] * self.n_orange

            free = [
                (r, c)
                for r in range(self.height)
                for c in range(self.width)
                if tiles[r, c] == TILE_EMPTY and (r, c) != agent
            ]
            if len(free) < len(scatter_kinds):
                continue
            picks = rng.choice(len(free), size=len(scatter_kinds), replace=False)
            for idx, kind in zip(picks, scatter_kinds):
                tiles[free[int(idx)]] = kind

            if tiles[agent] == TILE_EMPTY and self._path_exists(tiles, agent, goal):
                self.tiles = tiles
                self.agent_pos = agent
                self.goal_pos = goal
                return
        raise LayoutError("no layout with an orange-free path after 200 attempts")

    def _path_exists(self, tiles: np.ndarray, start: tuple[int, int], goal: tuple[int, int]) -> bool:
        """8-connected BFS over non-orange cells."""
        seen = {start}
        queue = deque([start])
        while queue:
            r, c = queue.popleft()
            if (r, c) == goal:
                return True
            for dr, dc in _NEIGHBORS_8:
                nxt = (r + dr, c + dc)
                if nxt not in seen and self._in_bounds(*nxt) and tiles[nxt] != TILE_ORANGE:
                    seen.add(nxt)
                    queue.append(nxt)
        return False

    # -- dynamics ----------------------------------------------------------

    def reset(self, seed: int) -> np.ndarray:
        self._generate_layout(np.random.default_rng(seed))
        self.steps = 0
        self.done = False
        return self._observation()

    def _observation(self) -> np.ndarray:
        obs = np.zeros(self.observation_shape, dtype=np.float64)
        obs[0][self.agent_pos] = 1.0
        obs[1] = self.tiles / (_NUM_TILE_KINDS - 1)
        return obs

    def required_arm_value(self, cell: tuple[int, int]) -> int:
        """Empty 8-neighbor count of ``cell``, mod 3; off-grid never counts."""
        count = 0
        for dr, dc in _NEIGHBORS_8:
            r, c = cell[0] + dr, cell[1] + dc
            if self._in_bounds(r, c) and self.tiles[r, c] == TILE_EMPTY:
                count += 1
        return count % 3

    def step(self, action: np.ndarray) -> tuple[np.ndarray, np.ndarray, bool]:
        if self.done:
            raise EpisodeDone("step() after episode end; call reset()")
        action = np.asarray(action, dtype=np.int64)
        if action.shape != (4,) or (action < 0).any() or (action >= 3).any():
            raise ValueError(f"action must be 4 values in {{0,1,2}}, got {action}")

        old = self.agent_pos
        new_r = min(max(old[0] + int(action[0]) - 1, 0), self.height - 1)
        new_c = min(max(old[1] + int(action[1]) - 1, 0), self.width - 1)
        new = (new_r, new_c)

        rewards = np.zeros(5, dtype=np.float64)
        old_dv = abs(old[0] - self.goal_pos[0])
        new_dv = abs(new[0] - self.goal_pos[0])
        rewards[0] = float(np.sign(old_dv - new_dv))
        old_dh = abs(old[1] - self.goal_pos[1])
        new_dh = abs(new[1] - self.goal_pos[1])
        rewards[1] = float(np.sign(old_dh - new_dh))
        if new != old and self.tiles[new] == TILE_ORANGE:
            rewards[2] = -5.0
        if self.tiles[old] == TILE_GREEN and int(action[2]) != self.required_arm_value(old):
            rewards[3] = -5.0
        if self.tiles[old] == TILE_BLUE and int(action[3]) != self.required_arm_value(old):
            rewards[4] = -5.0

        self.agent_pos = new
        self.steps += 1
        self.done = new == self.goal_pos or self.steps >= self.max_steps
        return self._observation(), rewards, self.done

    def ground_truth(self) -> CausalMatrix:
        return ground_truth_causal_matrix(self)


def ground_truth_causal_matrix(env) -> CausalMatrix:
    """Hand-derivable action-to-channel dependency matrix for an env."""
    if isinstance(env, GridWorld):
        entries = np.array(
            [
                [1, 0, 1, 0, 0],
                [0, 1, 1, 0, 0],
                [0, 0, 0, 1, 0],
                [0, 0, 0, 0, 1],
            ]
        )
        return CausalMatrix(entries, rows=list(ACTION_DIMS), cols=list(REWARD_CHANNELS))
    if hasattr(env, "ground_truth"):
        return env.ground_truth()
    raise TypeError(f"no ground-truth causal matrix for {type(env).__name__}")
