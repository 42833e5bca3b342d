"""Binary checkpoint container for named parameter tensors.

Layout: magic "UPT1", then per parameter (sorted by name):
name length (u32 LE), UTF-8 name, rank (u32), dims (u32 each),
raw little-endian float32 data.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .tensor import Tensor

MAGIC = b"UPT1"


class CheckpointError(ValueError):
    pass


def save_checkpoint(path, params: dict[str, Tensor]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(MAGIC)
        for name in sorted(params):
            data = np.ascontiguousarray(params[name].data, dtype="<f4")
            encoded = name.encode("utf-8")
            f.write(struct.pack("<I", len(encoded)))
            f.write(encoded)
            f.write(struct.pack("<I", data.ndim))
            f.write(struct.pack(f"<{data.ndim}I", *data.shape))
            f.write(data.tobytes())


def load_checkpoint(path, requires_grad: bool = False) -> dict[str, Tensor]:
    path = Path(path)
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != MAGIC:
            raise CheckpointError(f"{path}: unknown checkpoint magic {magic!r}")
        params: dict[str, Tensor] = {}
        while True:
            header = f.read(4)
            if not header:
                break
            (name_len,) = struct.unpack("<I", header)
            name = f.read(name_len).decode("utf-8")
            (rank,) = struct.unpack("<I", f.read(4))
            dims = struct.unpack(f"<{rank}I", f.read(4 * rank)) if rank else ()
            count = int(np.prod(dims)) if dims else 1
            raw = f.read(4 * count)
            if len(raw) != 4 * count:
                raise CheckpointError(f"{path}: truncated data for parameter '{name}'")
            arr = np.frombuffer(raw, dtype="<f4").reshape(dims).astype(np.float32)
            params[name] = Tensor(arr, requires_grad=requires_grad)
    return params
