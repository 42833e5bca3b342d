"""Corpus generation, binary serialization, and batch views."""

from .vocab import MAX_TOKENS, PAD, TOKENS, Vocabulary
from .episodes import Episode, generate_episodes, make_episode
from .container import CorpusError, manifest_path, read_corpus, write_corpus
from .batches import episode_tokens_padded, iterate_batches, stride_indices

__all__ = [
    "MAX_TOKENS", "PAD", "TOKENS", "Vocabulary",
    "Episode", "generate_episodes", "make_episode",
    "CorpusError", "manifest_path", "read_corpus", "write_corpus",
    "episode_tokens_padded", "iterate_batches", "stride_indices",
]
