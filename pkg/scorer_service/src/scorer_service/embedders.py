"""Embedding backends for the scorer service.

The default backend hashes token unigrams and character trigrams into a
fixed-width vector. It is deterministic across processes (no seeded Python
hashing), needs no model download, and gives well-behaved cosines for
tests and offline development. A sentence-transformers backend can be
selected via ARGSUM_SBERT_MODEL when a real checkpoint is available; it
must load at startup or the service refuses to start.
"""

from __future__ import annotations

import hashlib
import os
from typing import Protocol, Sequence

import numpy as np

SBERT_MODEL_ENV = "ARGSUM_SBERT_MODEL"


class Embedder(Protocol):
    name: str
    dimension: int

    def embed(self, texts: Sequence[str]) -> np.ndarray: ...


def _bucket(token: str, dimension: int) -> int:
    digest = hashlib.sha256(token.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % dimension


class HashedFeatureEmbedder:
    """Deterministic bag-of-features embedding, L2-normalized."""

    def __init__(self, dimension: int = 256) -> None:
        self.name = f"hashed-features-{dimension}"
        self.dimension = dimension

    def _features(self, text: str) -> dict[int, float]:
        counts: dict[int, float] = {}
        tokens = text.casefold().split()
        for token in tokens:
            counts[_bucket("w:" + token, self.dimension)] = (
                counts.get(_bucket("w:" + token, self.dimension), 0.0) + 1.0
            )
            padded = f"#{token}#"
            for i in range(len(padded) - 2):
                gram = padded[i : i + 3]
                key = _bucket("c:" + gram, self.dimension)
                counts[key] = counts.get(key, 0.0) + 0.5
        return counts

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dimension))
        for row, text in enumerate(texts):
            for key, value in self._features(text).items():
                out[row, key] += value
            norm = np.linalg.norm(out[row])
            if norm == 0.0:
                out[row, 0] = 1.0  # canonical unit vector for empty input
            else:
                out[row] /= norm
        return out


class SbertEmbedder:
    """sentence-transformers backend; loads eagerly, normalizes embeddings."""

    def __init__(self, model_name: str) -> None:
        from sentence_transformers import SentenceTransformer

        self._model = SentenceTransformer(model_name)
        self._model.eval()
        self.name = f"sbert:{model_name}"
        probe = self._model.encode(["probe"], normalize_embeddings=True)
        self.dimension = int(probe.shape[1])

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        vectors = self._model.encode(
            list(texts), normalize_embeddings=True, show_progress_bar=False
        )
        return np.asarray(vectors, dtype=np.float64)


def build_embedder() -> Embedder:
    """Backend selection: a checkpoint when configured, hashing otherwise."""
    model_name = os.environ.get(SBERT_MODEL_ENV, "").strip()
    if model_name:
        return SbertEmbedder(model_name)
    return HashedFeatureEmbedder()
