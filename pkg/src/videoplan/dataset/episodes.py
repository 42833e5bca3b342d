"""Episode record type and oracle corpus generation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..environment import (
    EnvConfig,
    Instruction,
    check_success,
    oracle_policy,
    render,
    rollout,
    sample_task,
)
from .vocab import Vocabulary


@dataclass
class Episode:
    """One demonstrated trajectory: frames x_0..x_H, actions a_0..a_{H-1}."""

    frames: np.ndarray      # (H+1, side, side, 3) float32 in [-1, 1]
    actions: np.ndarray     # (H, 3) float32
    tokens: np.ndarray      # (n_tokens,) uint16, unpadded
    template_id: int
    success: bool
    seed: int

    @property
    def horizon(self) -> int:
        return self.actions.shape[0]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Episode)
            and np.array_equal(self.frames, other.frames)
            and np.array_equal(self.actions, other.actions)
            and np.array_equal(self.tokens, other.tokens)
            and self.template_id == other.template_id
            and self.success == other.success
            and self.seed == other.seed
        )


def make_episode(seed: int, state, instruction: Instruction, actions,
                 cfg: EnvConfig, vocab: Vocabulary) -> Episode:
    states = rollout(state, actions)
    frames = np.stack([render(s, cfg) for s in states])
    acts = np.stack([a.as_array() for a in actions])
    success = check_success(states[-1], instruction)
    return Episode(
        frames=frames,
        actions=acts,
        tokens=vocab.encode(instruction.text),
        template_id=instruction.template_id,
        success=success,
        seed=seed,
    )


def generate_episodes(n_episodes: int, seed: int, instructions: list[Instruction],
                      cfg: EnvConfig, horizon: int = 24,
                      vocab: Vocabulary | None = None) -> list[Episode]:
    """n oracle-successful episodes; episode i uses task seed seed^i."""
    vocab = vocab or Vocabulary()
    episodes = []
    for i in range(n_episodes):
        ep_seed = seed ^ i
        state, instruction, actions = sample_task(ep_seed, instructions, cfg, horizon)
        ep = make_episode(ep_seed, state, instruction, actions, cfg, vocab)
        if not ep.success:
            raise RuntimeError(f"oracle episode {i} (seed {ep_seed}) failed its own task")
        episodes.append(ep)
    return episodes
