"""Continuous-action toy domain with four causally separated reward channels.

A point agent moves on a bounded plane with a wrist angle and a gripper.
Actions are 4-D in [-1, 1]: planar velocity (vx, vy), wrist rate, and
grip. Channels are built so each one reads only its driver dimensions
plus the state, giving an exact ground-truth causal matrix:

* ``r_reach``      <- (vx, vy): potential shaping, distance-to-goal decrease.
* ``r_collision``  <- (vx, vy): -1 when the new position is inside any disc.
* ``r_wrist``      <- wrist rate: negative distance of the new wrist angle
  to the episode's target angle.
* ``r_grip``       <- grip: +/-0.2 for matching the state-required grip
  sign (closed near the goal, open away from it).
"""

from __future__ import annotations

import numpy as np

from ..matrix import CausalMatrix

__all__ = ["ContinuousToyEnv"]

ACTION_DIMS = ("a_vx", "a_vy", "a_wrist", "a_grip")
REWARD_CHANNELS = ("r_reach", "r_collision", "r_wrist", "r_grip")


def _wrap_angle(theta: float) -> float:
    return float((theta + np.pi) % (2.0 * np.pi) - np.pi)


class ContinuousToyEnv:
    n_action_dims = 4
    action_space = "continuous"
    action_dims = ACTION_DIMS
    reward_channels = REWARD_CHANNELS
    n_channels = 4

    def __init__(
        self,
        size: float = 10.0,
        max_steps: int = 50,
        move_scale: float = 0.5,
        wrist_scale: float = 0.3,
        grip_radius: float = 2.0,
        goal_radius: float = 0.3,
        obstacles: list[tuple[float, float, float]] | None = None,
    ):
        self.size = size
        self.max_steps = max_steps
        self.move_scale = move_scale
        self.wrist_scale = wrist_scale
        self.grip_radius = grip_radius
        self.goal_radius = goal_radius
        self.obstacles = [tuple(map(float, o)) for o in (obstacles or [(3.0, 5.0, 1.5), (7.0, 4.0, 1.5)])]
        self.observation_shape = (6 + 3 * len(self.obstacles),)
        self.pos = np.zeros(2)
        self.wrist = 0.0
        self.goal = np.zeros(2)
        self.target_wrist = 0.0
        self.steps = 0
        self.done = True

    def reset(self, seed: int) -> np.ndarray:
        rng = np.random.default_rng(seed)
        while True:
            self.pos = rng.uniform(0.0, self.size, size=2)
            self.goal = rng.uniform(0.0, self.size, size=2)
            if np.linalg.norm(self.pos - self.goal) > 2.0 * self.goal_radius and not self._in_obstacle(self.pos):
                break
        self.wrist = float(rng.uniform(-np.pi, np.pi))
        self.target_wrist = float(rng.uniform(-np.pi, np.pi))
        self.steps = 0
        self.done = False
        return self._observation()

    def _in_obstacle(self, pos: np.ndarray) -> bool:
        return any(np.hypot(pos[0] - cx, pos[1] - cy) <= r for cx, cy, r in self.obstacles)

    def _observation(self) -> np.ndarray:
        parts = [
            self.pos / self.size,
            [self.wrist / np.pi],
            self.goal / self.size,
            [self.target_wrist / np.pi],
        ]
        for cx, cy, r in self.obstacles:
            parts.append([cx / self.size, cy / self.size, r / self.size])
        return np.concatenate([np.asarray(p, dtype=np.float64) for p in parts])

    def step(self, action: np.ndarray) -> tuple[np.ndarray, np.ndarray, bool]:
        if self.done:
            raise RuntimeError("step() after episode end; call reset()")
        action = np.clip(np.asarray(action, dtype=np.float64), -1.0, 1.0)
        if action.shape != (4,):
            raise ValueError(f"action must have 4 dimensions, got shape {action.shape}")

        old_pos = self.pos.copy()
        new_pos = np.clip(old_pos + self.move_scale * action[:2], 0.0, self.size)
        new_wrist = _wrap_angle(self.wrist + self.wrist_scale * float(action[2]))

        rewards = np.zeros(4, dtype=np.float64)
        rewards[0] = np.linalg.norm(old_pos - self.goal) - np.linalg.norm(new_pos - self.goal)
        rewards[1] = -1.0 if self._in_obstacle(new_pos) else 0.0
        rewards[2] = -abs(_wrap_angle(new_wrist - self.target_wrist)) * 0.25
        require_closed = np.linalg.norm(old_pos - self.goal) <= self.grip_radius
        grip_closed = float(action[3]) > 0.0
        rewards[3] = 0.2 if grip_closed == require_closed else -0.2

        self.pos = new_pos
        self.wrist = new_wrist
        self.steps += 1
        reached = np.linalg.norm(new_pos - self.goal) <= self.goal_radius
        self.done = reached or self.steps >= self.max_steps
        return self._observation(), rewards, self.done

    def ground_truth(self) -> CausalMatrix:
        entries = np.array(
            [
                [1, 1, 0, 0],
                [1, 1, 0, 0],
                [0, 0, 1, 0],
                [0, 0, 0, 1],
            ]
        )
        return CausalMatrix(entries, rows=list(ACTION_DIMS), cols=list(REWARD_CHANNELS))
