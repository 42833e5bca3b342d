"""Binary corpus container ("UPD1") plus a JSON sidecar manifest.

Layout: magic "UPD1", version u32, episode_count u32, H u32, image height
u32, image width u32; then per episode: seed u64, template_id u16,
token_count u16, tokens u16[], success u8, frames as u8 RGB
(value = round((v+1)*127.5)), actions as f32 LE triples. All little-endian.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from ..environment.render import frames_to_u8, u8_to_frames
from .episodes import Episode
from .vocab import Vocabulary

MAGIC = b"UPD1"
VERSION = 1


class CorpusError(ValueError):
    pass


def manifest_path(path) -> Path:
    return Path(str(path) + ".manifest.json")


def write_corpus(path, episodes: list[Episode], split_name: str, generator_seed: int,
                 vocab: Vocabulary | None = None) -> None:
    vocab = vocab or Vocabulary()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if not episodes:
        raise CorpusError("refusing to write an empty corpus")
    horizon = episodes[0].horizon
    height, width = episodes[0].frames.shape[1:3]

    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<IIIII", VERSION, len(episodes), horizon, height, width))
        for i, ep in enumerate(episodes):
            if ep.horizon != horizon or ep.frames.shape[1:3] != (height, width):
                raise CorpusError(f"episode {i}: inconsistent horizon or image size")
            f.write(struct.pack("<QHH", ep.seed, ep.template_id, len(ep.tokens)))
            f.write(np.ascontiguousarray(ep.tokens, dtype="<u2").tobytes())
            f.write(struct.pack("<B", 1 if ep.success else 0))
            f.write(frames_to_u8(ep.frames).tobytes())
            f.write(np.ascontiguousarray(ep.actions, dtype="<f4").tobytes())

    manifest = {
        "episode_count": len(episodes),
        "horizon": horizon,
        "image_height": height,
        "image_width": width,
        "split": split_name,
        "generator_seed": generator_seed,
        "template_counts": {
            "place": sum(1 for e in episodes if e.template_id == 0),
            "relation": sum(1 for e in episodes if e.template_id == 1),
        },
        "vocabulary": list(vocab.tokens),
    }
    with open(manifest_path(path), "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


def read_corpus(path) -> tuple[list[Episode], dict]:
    path = Path(path)
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != MAGIC:
            raise CorpusError(f"{path}: unknown corpus magic {magic!r}")
        version, count, horizon, height, width = struct.unpack("<IIIII", f.read(20))
        if version != VERSION:
            raise CorpusError(f"{path}: unsupported corpus version {version}")
        frame_bytes = (horizon + 1) * height * width * 3
        episodes = []
        for i in range(count):
            try:
                seed, template_id, n_tokens = struct.unpack("<QHH", f.read(12))
                tokens = np.frombuffer(f.read(2 * n_tokens), dtype="<u2").astype(np.uint16)
                (success,) = struct.unpack("<B", f.read(1))
                raw = f.read(frame_bytes)
                if len(raw) != frame_bytes:
                    raise ValueError("truncated frames")
                frames = u8_to_frames(
                    np.frombuffer(raw, dtype=np.uint8).reshape(horizon + 1, height, width, 3))
                acts = np.frombuffer(f.read(12 * horizon), dtype="<f4").reshape(horizon, 3)
                if acts.shape != (horizon, 3):
                    raise ValueError("truncated actions")
            except (struct.error, ValueError) as err:
                raise CorpusError(f"{path}: corrupt record at episode {i}: {err}") from err
            episodes.append(Episode(
                frames=frames,
                actions=acts.astype(np.float32),
                tokens=tokens,
                template_id=int(template_id),
                success=bool(success),
                seed=int(seed),
            ))
        trailing = f.read(1)
        if trailing:
            raise CorpusError(f"{path}: trailing bytes after episode {count - 1}")

    mpath = manifest_path(path)
    manifest = json.loads(mpath.read_text()) if mpath.exists() else {}
    return episodes, manifest
