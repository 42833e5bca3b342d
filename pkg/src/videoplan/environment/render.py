"""Rasterize world states to small float images in [-1, 1].

The palette is chosen on the u8 grid (value = u8/127.5 - 1) so frames
survive the corpus u8 round-trip bit-exactly. Unpainted blocks use an
off-white so the pure-white gripper overlay stays visible on top of them.
Overlay shape encodes grip state: main-diagonal pixels while empty,
anti-diagonal pixels while holding.
"""

from __future__ import annotations

import numpy as np

from .world import EnvConfig, WorldState

_U8 = {
    "background": (0, 0, 0),
    "plate": (128, 128, 128),
    "white": (230, 230, 230),
    "red": (255, 0, 0),
    "cyan": (0, 255, 255),
    "green": (0, 255, 0),
    "yellow": (255, 255, 0),
    "blue": (0, 0, 255),
    "magenta": (255, 0, 255),
    "gripper": (255, 255, 255),
}


def _f32(u8_triple) -> np.ndarray:
    return (np.array(u8_triple, dtype=np.float32) / 127.5) - 1.0


PALETTE = {name: _f32(v) for name, v in _U8.items()}
# Bowl border pixels: the bowl color at half intensity, still on the u8 grid.
DARK_PALETTE = {name: _f32(tuple(v // 2 for v in u8)) for name, u8 in _U8.items()}


def image_size(cfg: EnvConfig) -> int:
    return cfg.grid_size * cfg.patch_size


def render(state: WorldState, cfg: EnvConfig) -> np.ndarray:
    """WorldState -> (side, side, 3) float32 image, side = grid_size * patch_size."""
    p = cfg.patch_size
    side = state.grid_size * p
    img = np.empty((side, side, 3), dtype=np.float32)
    img[...] = PALETTE["background"]

    def cell(row, col):
        return img[row * p:(row + 1) * p, col * p:(col + 1) * p]

    for r, c in state.plate_cells:
        cell(r, c)[...] = PALETTE["plate"]
    for bowl in state.bowls:
        patch = cell(bowl.row, bowl.col)
        patch[...] = PALETTE[bowl.color]
        patch[0, 0] = DARK_PALETTE[bowl.color]  # darkened border pixel
    for blk in state.blocks:
        cell(blk.row, blk.col)[...] = PALETTE[blk.color]

    gr, gc = state.gripper
    patch = cell(gr, gc)
    idx = np.arange(p)
    if state.held is None:
        patch[idx, idx] = PALETTE["gripper"]
    else:
        patch[idx, p - 1 - idx] = PALETTE["gripper"]
    return img


def frames_to_u8(frames: np.ndarray) -> np.ndarray:
    """[-1, 1] float frames -> u8, exact inverse of u8_to_frames on palette values."""
    return np.clip(np.rint((frames + 1.0) * 127.5), 0, 255).astype(np.uint8)


def u8_to_frames(raw: np.ndarray) -> np.ndarray:
    return (raw.astype(np.float32) / 127.5) - 1.0
