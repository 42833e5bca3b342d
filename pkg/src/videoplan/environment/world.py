"""Deterministic block-manipulation world on a small grid.

Positions are (row, col). An action's dx moves the column (+1 = right),
dy moves the row (+1 = down), and grip is a real in [0, 1] thresholded
at 0.5. The gripper hovers: it may pass over any cell. A held block is
airborne and co-located with the gripper.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

WHITE = "white"
PAINT_COLORS = ("red", "cyan", "green", "yellow", "blue", "magenta")
GRIP_THRESHOLD = 0.5


@dataclass(frozen=True)
class Block:
    row: int
    col: int
    color: str


@dataclass(frozen=True)
class Bowl:
    row: int
    col: int
    color: str


@dataclass(frozen=True)
class Action:
    dx: float
    dy: float
    grip: float

    def as_array(self) -> np.ndarray:
        return np.array([self.dx, self.dy, self.grip], dtype=np.float32)


ZERO_ACTION = Action(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class WorldState:
    grid_size: int
    blocks: tuple[Block, ...]
    bowls: tuple[Bowl, ...]
    plate_cells: tuple[tuple[int, int], ...]
    gripper: tuple[int, int]
    held: int | None = None

    def block_at(self, row: int, col: int, ignore: int | None = None) -> int | None:
        for i, blk in enumerate(self.blocks):
            if i != ignore and i != self.held and (blk.row, blk.col) == (row, col):
                return i
        return None

    def bowl_at(self, row: int, col: int) -> Bowl | None:
        for bowl in self.bowls:
            if (bowl.row, bowl.col) == (row, col):
                return bowl
        return None


@dataclass(frozen=True)
class EnvConfig:
    grid_size: int = 8
    n_blocks: int = 3
    n_bowls: int = 6
    plate_size: int = 2
    patch_size: int = 2

    def __post_init__(self):
        if self.n_bowls > len(PAINT_COLORS):
            raise ValueError(f"at most {len(PAINT_COLORS)} bowls supported, got {self.n_bowls}")

    @property
    def paint_colors(self) -> tuple[str, ...]:
        return PAINT_COLORS[: self.n_bowls]


def _round_step(v: float) -> int:
    return int(np.clip(np.rint(v), -1, 1))


def step(state: WorldState, action: Action) -> WorldState:
    """Apply one action: move the gripper, then resolve grip transitions."""
    n = state.grid_size
    dr = _round_step(action.dy)
    dc = _round_step(action.dx)
    row = min(max(state.gripper[0] + dr, 0), n - 1)
    col = min(max(state.gripper[1] + dc, 0), n - 1)

    blocks = list(state.blocks)
    held = state.held
    if held is not None:
        blk = blocks[held]
        blocks[held] = replace(blk, row=row, col=col)

    closed = action.grip >= GRIP_THRESHOLD
    if closed and held is None:
        held = _nearest_block(state, blocks, row, col)
        if held is not None:
            blocks[held] = replace(blocks[held], row=row, col=col)
    elif not closed and held is not None:
        moved = WorldState(n, tuple(blocks), state.bowls, state.plate_cells, (row, col), held)
        if moved.block_at(row, col, ignore=held) is None:
            blk = blocks[held]
            bowl = state.bowl_at(row, col)
            if bowl is not None and blk.color == WHITE:
                blocks[held] = replace(blk, color=bowl.color)
            held = None
        # else: the cell is occupied by another block; the release is a no-op.

    return WorldState(n, tuple(blocks), state.bowls, state.plate_cells, (row, col), held)


def _nearest_block(state: WorldState, blocks: list[Block], row: int, col: int) -> int | None:
    """Closest block within Chebyshev distance 1; ties break row-major then by index."""
    best = None
    best_key = None
    for i, blk in enumerate(blocks):
        d = max(abs(blk.row - row), abs(blk.col - col))
        if d <= 1:
            key = (d, blk.row, blk.col, i)
            if best_key is None or key < best_key:
                best, best_key = i, key
    return best


def occupied_cells(state: WorldState) -> set[tuple[int, int]]:
    cells = {(b.row, b.col) for i, b in enumerate(state.blocks) if i != state.held}
    cells |= {(b.row, b.col) for b in state.bowls}
    cells |= set(state.plate_cells)
    return cells


def state_vector(state: WorldState, cfg: EnvConfig) -> np.ndarray:
    """Flatten a WorldState to a fixed-size float vector (state-based baselines)."""
    n = float(state.grid_size - 1)
    parts = []
    color_index = {WHITE: 0}
    for i, c in enumerate(PAINT_COLORS):
        color_index[c] = i + 1
    for blk in state.blocks:
        onehot = np.zeros(len(PAINT_COLORS) + 1, dtype=np.float32)
        onehot[color_index[blk.color]] = 1.0
        parts.append(np.array([blk.row / n, blk.col / n], dtype=np.float32))
        parts.append(onehot)
    for bowl in state.bowls:
        onehot = np.zeros(len(PAINT_COLORS) + 1, dtype=np.float32)
        onehot[color_index[bowl.color]] = 1.0
        parts.append(np.array([bowl.row / n, bowl.col / n], dtype=np.float32))
        parts.append(onehot)
    pr, pc = state.plate_cells[0]
    parts.append(np.array([pr / n, pc / n], dtype=np.float32))
    parts.append(np.array([state.gripper[0] / n, state.gripper[1] / n], dtype=np.float32))
    held = np.zeros(cfg.n_blocks + 1, dtype=np.float32)
    held[cfg.n_blocks if state.held is None else state.held] = 1.0
    parts.append(held)
    return np.concatenate(parts)


def state_vector_dim(cfg: EnvConfig) -> int:
    per_obj = 2 + len(PAINT_COLORS) + 1
    return cfg.n_blocks * per_obj + cfg.n_bowls * per_obj + 2 + 2 + cfg.n_blocks + 1
