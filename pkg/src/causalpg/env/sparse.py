"""Sparse-reward grid variant: a single terminal reward channel.

State and action spaces match the dense grid domain, but every dense
channel is removed. Episodes run a fixed number of steps (the goal does
not terminate early) and the single channel pays the terminal bonus on
the last step iff the agent finishes on the goal AND the required arm1
value was emitted at the required time:

* ``immediate`` mode: the arm1 value on the final step must match.
* ``delayed`` mode: the arm1 value on the *first* step must match; the
  payout still happens at the end, so no single-step window can see both
  the cause and the effect.

The goal spawns at a fixed Chebyshev distance from the agent so that
random exploration finishes on the goal often enough for discovery to
have signal within one episode-length window.
"""

from __future__ import annotations

import numpy as np

from ..matrix import CausalMatrix
from .gridworld import ACTION_DIMS, TILE_GOAL, EpisodeDone

__all__ = ["SparseGridWorld"]


class SparseGridWorld:
    n_action_dims = 4
    n_action_values = 3
    action_space = "discrete"
    action_dims = ACTION_DIMS
    reward_channels = ("r_terminal",)
    n_channels = 1

    def __init__(
        self,
        mode: str = "immediate",
        width: int = 6,
        height: int = 6,
        episode_length: int = 5,
        goal_distance: int = 1,
        terminal_reward: float = 10.0,
        required_arm_value: int = 1,
    ):
        if mode not in ("immediate", "delayed"):
            raise ValueError(f"mode must be 'immediate' or 'delayed', got {mode!r}")
        self.mode = mode
        self.width = width
        self.height = height
        self.episode_length = episode_length
        self.max_steps = episode_length
        self.goal_distance = goal_distance
        self.terminal_reward = terminal_reward
        self.required_arm_value = required_arm_value
        self.observation_shape = (2, height, width)
        self.tiles = np.zeros((height, width), dtype=np.int64)
        self.agent_pos = (0, 0)
        self.goal_pos = (0, 0)
        self.steps = 0
        self.done = True
        self._first_arm_ok = False

    def reset(self, seed: int) -> np.ndarray:
        rng = np.random.default_rng(seed)
        d = self.goal_distance
        while True:
            agent = (int(rng.integers(self.height)), int(rng.integers(self.width)))
            offsets = [
                (dr, dc)
                for dr in range(-d, d + 1)
                for dc in range(-d, d + 1)
                if max(abs(dr), abs(dc)) == d
                and 0 <= agent[0] + dr < self.height
                and 0 <= agent[1] + dc < self.width
            ]
            if offsets:
                dr, dc = offsets[int(rng.integers(len(offsets)))]
                goal = (agent[0] + dr, agent[1] + dc)
                break
        self.tiles = np.zeros((self.height, self.width), dtype=np.int64)
        self.tiles[goal] = TILE_GOAL
        self.agent_pos = agent
        self.goal_pos = goal
        self.steps = 0
        self.done = False
        self._first_arm_ok = False
        return self._observation()

    def _observation(self) -> np.ndarray:
        obs = np.zeros(self.observation_shape, dtype=np.float64)
        obs[0][self.agent_pos] = 1.0
        obs[1] = self.tiles / 4.0
        return obs

    def step(self, action: np.ndarray) -> tuple[np.ndarray, np.ndarray, bool]:
        if self.done:
            raise EpisodeDone("step() after episode end; call reset()")
        action = np.asarray(action, dtype=np.int64)
        if action.shape != (4,) or (action < 0).any() or (action >= 3).any():
            raise ValueError(f"action must be 4 values in {{0,1,2}}, got {action}")

        if self.steps == 0:
            self._first_arm_ok = int(action[2]) == self.required_arm_value

        old = self.agent_pos
        new_r = min(max(old[0] + int(action[0]) - 1, 0), self.height - 1)
        new_c = min(max(old[1] + int(action[1]) - 1, 0), self.width - 1)
        self.agent_pos = (new_r, new_c)
        self.steps += 1
        self.done = self.steps >= self.episode_length

        reward = np.zeros(1, dtype=np.float64)
        if self.done and self.agent_pos == self.goal_pos:
            if self.mode == "immediate":
                arm_ok = int(action[2]) == self.required_arm_value
            else:
                arm_ok = self._first_arm_ok
            if arm_ok:
                reward[0] = self.terminal_reward
        return self._observation(), reward, self.done

    def ground_truth(self) -> CausalMatrix:
        # Navigation steers whether the episode ends on the goal; arm1
        # gates the payout; arm2 never matters.
        entries = np.array([[1], [1], [1], [0]])
        return CausalMatrix(entries, rows=list(ACTION_DIMS), cols=list(self.reward_channels))
