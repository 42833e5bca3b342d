"""Scripted demonstrator and task sampling.

Routes are greedy Manhattan (row-first, then column). Candidate choices
(which white block, which plate cell, round order) minimize total path
length with row-major tie-breaking. A pick is issued from the block's own
cell; painting happens by releasing a white block on its color's bowl.
"""

from __future__ import annotations

import numpy as np

from .instructions import (
    PLACE,
    RELATION,
    RELATION_OFFSETS,
    Instruction,
    check_success,
)
from .world import (
    WHITE,
    Action,
    Block,
    Bowl,
    EnvConfig,
    WorldState,
    ZERO_ACTION,
    occupied_cells,
    step,
)


class InfeasibleTask(RuntimeError):
    """The task cannot be demonstrated within the horizon from this state."""


def _dist(a: tuple[int, int], b: tuple[int, int]) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def _route(src: tuple[int, int], dst: tuple[int, int], grip: float) -> list[Action]:
    actions = []
    dr = dst[0] - src[0]
    dc = dst[1] - src[1]
    actions.extend([Action(0.0, float(np.sign(dr)), grip)] * abs(dr))
    actions.extend([Action(float(np.sign(dc)), 0.0, grip)] * abs(dc))
    return actions


def _round_length(gripper, block_cell, bowl_cell, target_cell) -> int:
    return (_dist(gripper, block_cell) + _dist(block_cell, bowl_cell)
            + _dist(bowl_cell, target_cell) + 4)


def _round_actions(gripper, block_cell, bowl_cell, target_cell) -> list[Action]:
    """fetch -> pick -> carry to bowl -> paint -> re-pick -> carry to target -> release."""
    actions = _route(gripper, block_cell, 0.0)
    actions.append(Action(0.0, 0.0, 1.0))
    actions.extend(_route(block_cell, bowl_cell, 1.0))
    actions.append(Action(0.0, 0.0, 0.0))
    actions.append(Action(0.0, 0.0, 1.0))
    actions.extend(_route(bowl_cell, target_cell, 1.0))
    actions.append(Action(0.0, 0.0, 0.0))
    return actions


def _bowl_cell(state: WorldState, color: str) -> tuple[int, int]:
    for bowl in state.bowls:
        if bowl.color == color:
            return (bowl.row, bowl.col)
    raise InfeasibleTask(f"no {color} bowl in the scene")


def _white_blocks(state: WorldState) -> list[tuple[int, Block]]:
    return [(i, b) for i, b in enumerate(state.blocks) if b.color == WHITE and i != state.held]


def _free_plate_cells(state: WorldState) -> list[tuple[int, int]]:
    return [cell for cell in state.plate_cells if state.block_at(*cell) is None]


def _best_single_round(state, gripper, color, targets, exclude_block=None):
    """Cheapest (length, block_idx, block_cell, target) to paint-and-place one block."""
    bowl = _bowl_cell(state, color)
    best = None
    for i, blk in _white_blocks(state):
        if i == exclude_block:
            continue
        bc = (blk.row, blk.col)
        for tgt in targets:
            length = _round_length(gripper, bc, bowl, tgt)
            key = (length, bc[0], bc[1], tgt[0], tgt[1])
            if best is None or key < best[0]:
                best = (key, i, bc, bowl, tgt)
    if best is None:
        raise InfeasibleTask(f"no spare white block for a {color} round")
    return best


def _relation_targets(state: WorldState, rel: str) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """(ref_cell, placed_cell) pairs inside the plate for the given relation."""
    dr, dc = RELATION_OFFSETS[rel]
    plate = set(state.plate_cells)
    free = set(_free_plate_cells(state))
    pairs = []
    for q in sorted(plate):
        qa = (q[0] + dr, q[1] + dc)
        if qa in plate and q in free and qa in free:
            pairs.append((q, qa))
    return pairs


def oracle_policy(state: WorldState, instruction: Instruction, horizon: int = 24) -> list[Action]:
    """Action sequence of exactly `horizon` steps achieving the instruction.

    Raises InfeasibleTask when no demonstration fits the horizon.
    """
    if check_success(state, instruction):
        return [ZERO_ACTION] * horizon

    gripper = state.gripper
    if instruction.template_id == PLACE:
        color = instruction.args[0]
        targets = _free_plate_cells(state)
        if not targets:
            raise InfeasibleTask("no free plate cell")
        _, _, bc, bowl, tgt = _best_single_round(state, gripper, color, targets)
        actions = _round_actions(gripper, bc, bowl, tgt)
    else:
        c1, rel, c2 = instruction.args
        pairs = _relation_targets(state, rel)
        if not pairs:
            raise InfeasibleTask(f"plate cannot host a '{rel}' pair")
        best = None
        for q_ref, q_placed in pairs:
            # Either paint/place the reference block (c2) first or the related one (c1).
            for first_color, first_tgt, second_color, second_tgt in (
                (c2, q_ref, c1, q_placed),
                (c1, q_placed, c2, q_ref),
            ):
                try:
                    key1, i1, bc1, bowl1, _ = _best_single_round(
                        state, gripper, first_color, [first_tgt])
                    key2, _, bc2, bowl2, _ = _best_single_round(
                        state, first_tgt, second_color, [second_tgt], exclude_block=i1)
                except InfeasibleTask:
                    continue
                total = (key1[0] + key2[0], key1, key2)
                plan = (first_tgt, bc1, bowl1, second_tgt, bc2, bowl2)
                if best is None or total < best[0]:
                    best = (total, plan)
        if best is None:
            raise InfeasibleTask("relation task needs two spare white blocks")
        first_tgt, bc1, bowl1, second_tgt, bc2, bowl2 = best[1]
        actions = _round_actions(gripper, bc1, bowl1, first_tgt)
        actions += _round_actions(first_tgt, bc2, bowl2, second_tgt)

    if len(actions) > horizon:
        raise InfeasibleTask(f"demonstration needs {len(actions)} steps > horizon {horizon}")
    actions += [ZERO_ACTION] * (horizon - len(actions))
    return actions


def rollout(state: WorldState, actions: list[Action]) -> list[WorldState]:
    """All visited states including the start: len(actions) + 1 entries."""
    states = [state]
    for act in actions:
        state = step(state, act)
        states.append(state)
    return states


# -- task sampling -------------------------------------------------------------

PLACEMENT_RETRIES = 100
FEASIBILITY_RETRIES = 2000


def _sample_layout(rng: np.random.Generator, cfg: EnvConfig) -> WorldState:
    n = cfg.grid_size
    p = cfg.plate_size
    pr = int(rng.integers(0, n - p + 1))
    pc = int(rng.integers(0, n - p + 1))
    plate = tuple((pr + i, pc + j) for i in range(p) for j in range(p))
    taken = set(plate)

    def draw_cell():
        for _ in range(PLACEMENT_RETRIES):
            cell = (int(rng.integers(0, n)), int(rng.integers(0, n)))
            if cell not in taken:
                taken.add(cell)
                return cell
        raise RuntimeError(f"placement failed after {PLACEMENT_RETRIES} retries: grid too crowded")

    bowls = tuple(Bowl(*draw_cell(), color) for color in cfg.paint_colors)
    blocks = tuple(Block(*draw_cell(), WHITE) for _ in range(cfg.n_blocks))
    gripper = draw_cell()
    return WorldState(n, blocks, bowls, plate, gripper, None)


def sample_task(seed: int, instructions: list[Instruction], cfg: EnvConfig,
                horizon: int = 24) -> tuple[WorldState, Instruction, list[Action]]:
    """Draw (state, instruction, demo actions); deterministic in seed.

    Layouts are resampled until the scripted demonstration fits the horizon.
    """
    if not instructions:
        raise ValueError("sample_task: empty instruction split")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x7A5C]))
    instruction = instructions[int(rng.integers(len(instructions)))]
    for color in instruction.args:
        if color in RELATION_OFFSETS:
            continue
        if color not in cfg.paint_colors:
            raise InfeasibleTask(f"instruction color {color} has no bowl under this config")
    needed = 2 if instruction.template_id == RELATION else 1
    if cfg.n_blocks < needed:
        raise InfeasibleTask(f"{cfg.n_blocks} blocks cannot satisfy the instruction")

    for _ in range(FEASIBILITY_RETRIES):
        state = _sample_layout(rng, cfg)
        try:
            actions = oracle_policy(state, instruction, horizon)
        except InfeasibleTask:
            continue
        return state, instruction, actions
    raise InfeasibleTask(
        f"no feasible layout for '{instruction.text}' within {FEASIBILITY_RETRIES} resamples")
