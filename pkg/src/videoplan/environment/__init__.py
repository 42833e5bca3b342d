"""Block-manipulation world: dynamics, language tasks, oracle, renderer."""

from .world import (
    GRIP_THRESHOLD,
    PAINT_COLORS,
    WHITE,
    ZERO_ACTION,
    Action,
    Block,
    Bowl,
    EnvConfig,
    WorldState,
    occupied_cells,
    state_vector,
    state_vector_dim,
    step,
)
from .instructions import (
    PLACE,
    RELATION,
    RELATION_OFFSETS,
    RELATIONS,
    Instruction,
    check_success,
    instruction_universe,
    split_instructions,
)
from .oracle import (
    FEASIBILITY_RETRIES,
    InfeasibleTask,
    oracle_policy,
    rollout,
    sample_task,
)
from .render import PALETTE, frames_to_u8, image_size, render, u8_to_frames

__all__ = [
    "GRIP_THRESHOLD", "PAINT_COLORS", "WHITE", "ZERO_ACTION",
    "Action", "Block", "Bowl", "EnvConfig", "WorldState",
    "occupied_cells", "state_vector", "state_vector_dim", "step",
    "PLACE", "RELATION", "RELATION_OFFSETS", "RELATIONS",
    "Instruction", "check_success", "instruction_universe", "split_instructions",
    "FEASIBILITY_RETRIES", "InfeasibleTask", "oracle_policy", "rollout", "sample_task",
    "PALETTE", "frames_to_u8", "image_size", "render", "u8_to_frames",
]
