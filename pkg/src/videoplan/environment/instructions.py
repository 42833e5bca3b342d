"""Templated language tasks over the block world and the 70/30 split."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .world import PAINT_COLORS, WorldState

PLACE = 0
RELATION = 1

RELATIONS = ("left", "right", "above", "below")

# rel -> (drow, dcol) offset of block A relative to reference block B.
RELATION_OFFSETS = {
    "left": (0, -1),
    "right": (0, 1),
    "above": (-1, 0),
    "below": (1, 0),
}


@dataclass(frozen=True)
class Instruction:
    template_id: int
    args: tuple[str, ...]

    @property
    def text(self) -> str:
        if self.template_id == PLACE:
            return f"put a {self.args[0]} block in the plate"
        c1, rel, c2 = self.args
        return f"put a {c1} block {rel} of a {c2} block"

    @property
    def tokens(self) -> tuple[str, ...]:
        return tuple(self.text.split())


def instruction_universe(colors=PAINT_COLORS, relations=RELATIONS) -> list[Instruction]:
    """Every PLACE instruction plus every ordered-distinct-color RELATION instruction."""
    universe = [Instruction(PLACE, (c,)) for c in colors]
    for c1 in colors:
        for c2 in colors:
            if c1 == c2:
                continue
            for rel in relations:
                universe.append(Instruction(RELATION, (c1, rel, c2)))
    return universe


def split_instructions(seed: int, colors=PAINT_COLORS, relations=RELATIONS,
                       seen_fraction: float = 0.7) -> tuple[list[Instruction], list[Instruction]]:
    """Deterministic per-template partition into (seen, novel)."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x5EED]))
    seen: list[Instruction] = []
    novel: list[Instruction] = []
    universe = instruction_universe(colors, relations)
    for template in (PLACE, RELATION):
        group = [ins for ins in universe if ins.template_id == template]
        order = rng.permutation(len(group))
        cut = int(round(seen_fraction * len(group)))
        seen.extend(group[i] for i in order[:cut])
        novel.extend(group[i] for i in order[cut:])
    return seen, novel


def check_success(state: WorldState, instruction: Instruction) -> bool:
    """Final-state task adjudication. Held blocks are airborne and do not count."""
    plate = set(state.plate_cells)
    placed = [b for i, b in enumerate(state.blocks)
              if i != state.held and (b.row, b.col) in plate]
    if instruction.template_id == PLACE:
        color = instruction.args[0]
        return any(b.color == color for b in placed)
    c1, rel, c2 = instruction.args
    dr, dc = RELATION_OFFSETS[rel]
    for a in placed:
        if a.color != c1:
            continue
        for b in placed:
            if b.color == c2 and (a.row, a.col) == (b.row + dr, b.col + dc):
                return True
    return False
