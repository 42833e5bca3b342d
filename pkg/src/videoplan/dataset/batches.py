"""Seeded batch iteration with frame-stride views over a corpus."""

from __future__ import annotations

import numpy as np

from .episodes import Episode
from .vocab import MAX_TOKENS, Vocabulary


def stride_indices(window: int, stride: int) -> np.ndarray:
    """Frame indices {0, s, 2s, ...} inside the first `window` frames."""
    if stride < 1 or window < 1:
        raise ValueError(f"stride {stride} and window {window} must be positive")
    if (window - 1) % stride:
        raise ValueError(f"stride {stride} does not divide the window span {window - 1}")
    return np.arange(0, window, stride)


def episode_tokens_padded(episodes: list[Episode], vocab: Vocabulary) -> np.ndarray:
    return np.stack([vocab.pad(ep.tokens, MAX_TOKENS) for ep in episodes])


def iterate_batches(episodes: list[Episode], batch_size: int, seed: int,
                    stride: int = 1, window: int | None = None,
                    shuffle: bool = True, epochs: int | None = 1,
                    vocab: Vocabulary | None = None):
    """Yield batches of (frames, actions, tokens, x0) as a dict.

    frames: (B, n_view, h, w, 3) at the requested stride view; x0: (B, h, w, 3);
    tokens are padded to the corpus-wide max. The final partial batch of an
    epoch is yielded. epochs=None repeats forever with per-epoch reshuffles.
    """
    if not episodes:
        raise ValueError("iterate_batches: empty corpus")
    vocab = vocab or Vocabulary()
    horizon = episodes[0].horizon
    window = window or (horizon + 1)
    if window > horizon + 1:
        raise ValueError(f"window {window} exceeds horizon+1 = {horizon + 1}")
    view = stride_indices(window, stride)

    all_frames = np.stack([ep.frames for ep in episodes])
    all_actions = np.stack([ep.actions for ep in episodes])
    all_tokens = episode_tokens_padded(episodes, vocab)

    epoch = 0
    while epochs is None or epoch < epochs:
        if shuffle:
            rng = np.random.default_rng(np.random.SeedSequence([seed, epoch]))
            order = rng.permutation(len(episodes))
        else:
            order = np.arange(len(episodes))
        for start in range(0, len(episodes), batch_size):
            idx = order[start:start + batch_size]
            yield {
                "frames": all_frames[idx][:, view],
                "actions": all_actions[idx],
                "tokens": all_tokens[idx],
                "x0": all_frames[idx][:, 0],
                "episode_indices": idx,
            }
        epoch += 1
