"""Fixed closed vocabulary for the templated instructions. Pad id is 0."""

from __future__ import annotations

import numpy as np

from ..environment.instructions import RELATIONS
from ..environment.world import PAINT_COLORS

PAD = "<pad>"

TOKENS: tuple[str, ...] = (
    PAD,
    "put", "a", "block", "in", "the", "plate", "of",
    *RELATIONS,
    *PAINT_COLORS,
)

MAX_TOKENS = 9  # longest template: put a <c> block <rel> of a <c> block


class Vocabulary:
    """Bijection between token strings and ids with deterministic ordering."""

    def __init__(self, tokens: tuple[str, ...] = TOKENS):
        self.tokens = tuple(tokens)
        self.index = {tok: i for i, tok in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise ValueError("duplicate tokens in vocabulary")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def pad_id(self) -> int:
        return 0

    def encode(self, text: str) -> np.ndarray:
        try:
            ids = [self.index[tok] for tok in text.split()]
        except KeyError as err:
            raise KeyError(f"token {err.args[0]!r} not in vocabulary") from None
        return np.asarray(ids, dtype=np.uint16)

    def decode(self, ids) -> str:
        return " ".join(self.tokens[int(i)] for i in ids if int(i) != self.pad_id)

    def pad(self, ids, length: int = MAX_TOKENS) -> np.ndarray:
        ids = np.asarray(ids, dtype=np.int64)
        if ids.shape[0] > length:
            raise ValueError(f"token sequence of length {ids.shape[0]} exceeds pad length {length}")
        out = np.zeros(length, dtype=np.int64)
        out[: ids.shape[0]] = ids
        return out
