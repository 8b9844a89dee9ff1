"""Quality and Match scorer backends.

A backend answers two questions, both on a [0, 1] scale: how good is a
single argument (quality), and how well do two texts express the same
statement (match). Pipelines only see this interface, so tests can run on
the deterministic lexical mock while production points at the HTTP scorer
service. Scores must arrive in [0, 1]; anything else raises instead of
being clamped, because silent clamping hides broken remote contracts.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from pathlib import Path
from typing import Iterable, Protocol, Sequence

import numpy as np
import requests

from argsum.core.types import Argument, TopicStance
from argsum.errors import (
    CacheMissError,
    ScoreContractError,
    ScorerTransportError,
    ValidationError,
)

DEFAULT_ENDPOINT_ENV = "ARGSUM_SCORER_URL"
_BATCH = 128


class ScorerBackend(Protocol):
    identifier: str

    def quality(self, arg: Argument) -> float: ...

    def match(self, arg_text: str, summary_text: str) -> float: ...


def _check_score(value: float, source: str) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise ScoreContractError(f"{source} returned score {value} outside [0, 1]")
    return value


def quality_key(ts: TopicStance, text: str) -> str:
    material = "\x1f".join(("quality", ts.topic, str(int(ts.stance)), text))
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


def match_key(arg_text: str, summary_text: str) -> str:
    # Ordered pair: quality scorers and asymmetric match scorers care.
    material = "\x1f".join(("match", arg_text, summary_text))
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


def match_matrix(
    backend: ScorerBackend, texts_a: Sequence[str], texts_b: Sequence[str]
) -> np.ndarray:
    """Matrix of match(a_i, b_j); batched where the backend supports it."""
    if not texts_a or not texts_b:
        raise ValidationError("match_matrix requires two non-empty text lists")
    pairs = [(a, b) for a in texts_a for b in texts_b]
    if hasattr(backend, "match_many"):
        scores = backend.match_many(pairs)
    else:
        scores = [backend.match(a, b) for a, b in pairs]
    return np.asarray(scores, dtype=np.float64).reshape(len(texts_a), len(texts_b))


def quality_scores(backend: ScorerBackend, args: Sequence[Argument]) -> list[float]:
    if hasattr(backend, "quality_many"):
        return backend.quality_many(args)
    return [backend.quality(a) for a in args]


class MockLexicalScorer:
    """Pure, seedless stand-in: token-count quality and Jaccard match."""

    identifier = "mock-lexical"

    @staticmethod
    def _tokens(text: str) -> frozenset[str]:
        return frozenset(text.casefold().split())

    def quality(self, arg: Argument) -> float:
        return min(1.0, len(arg.text.split()) / 20.0)

    def match(self, arg_text: str, summary_text: str) -> float:
        a, b = self._tokens(arg_text), self._tokens(summary_text)
        if not a and not b:
            return 1.0
        union = a | b
        return len(a & b) / len(union)


class ScoreCache:
    """In-memory score cache with JSONL persistence.

    Keys are (backend identifier, SHA-256 of the ordered inputs). Reads are
    lock-free once loaded; writes are serialized.
    """

    def __init__(self) -> None:
        self._entries: dict[tuple[str, str], float] = {}
        self._lock = threading.Lock()
        self.dirty = False

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, backend_id: str, key: str) -> float | None:
        return self._entries.get((backend_id, key))

    def put(self, backend_id: str, key: str, score: float) -> None:
        with self._lock:
            self._entries[(backend_id, key)] = score
            self.dirty = True

    def save(self, path: str | Path) -> None:
        with self._lock:
            lines = [
                json.dumps({"backend": b, "key": k, "score": s}, sort_keys=True)
                for (b, k), s in sorted(self._entries.items())
            ]
            Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), "utf-8")
            self.dirty = False

    @classmethod
    def load(cls, path: str | Path) -> "ScoreCache":
        cache = cls()
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    rec = json.loads(line)
                    cache._entries[(rec["backend"], rec["key"])] = float(rec["score"])
        return cache


class CachingScorer:
    """Read-through cache wrapper around any backend."""

    def __init__(self, inner: ScorerBackend, cache: ScoreCache | None = None) -> None:
        self.inner = inner
        self.cache = cache if cache is not None else ScoreCache()
        self.identifier = inner.identifier

    def quality(self, arg: Argument) -> float:
        key = quality_key(arg.topic_stance, arg.text)
        hit = self.cache.get(self.identifier, key)
        if hit is not None:
            return hit
        score = self.inner.quality(arg)
        self.cache.put(self.identifier, key, score)
        return score

    def match(self, arg_text: str, summary_text: str) -> float:
        key = match_key(arg_text, summary_text)
        hit = self.cache.get(self.identifier, key)
        if hit is not None:
            return hit
        score = self.inner.match(arg_text, summary_text)
        self.cache.put(self.identifier, key, score)
        return score

    def match_many(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        out: list[float | None] = []
        misses: list[tuple[int, tuple[str, str]]] = []
        for idx, (a, b) in enumerate(pairs):
            hit = self.cache.get(self.identifier, match_key(a, b))
            out.append(hit)
            if hit is None:
                misses.append((idx, (a, b)))
        if misses:
            if hasattr(self.inner, "match_many"):
                fresh = self.inner.match_many([p for _, p in misses])
            else:
                fresh = [self.inner.match(a, b) for _, (a, b) in misses]
            for (idx, (a, b)), score in zip(misses, fresh):
                self.cache.put(self.identifier, match_key(a, b), score)
                out[idx] = score
        return out  # type: ignore[return-value]


class CachedFileScorer:
    """Replay-only backend: serves a recorded cache file, no inner backend."""

    def __init__(self, cache_path: str | Path, backend_id: str | None = None) -> None:
        self.cache = ScoreCache.load(cache_path)
        if backend_id is None:
            ids = {b for (b, _k) in self.cache._entries}
            if len(ids) != 1:
                raise ValidationError(
                    f"cache file holds {len(ids)} backend ids; pass backend_id explicitly"
                )
            backend_id = next(iter(ids))
        self.identifier = backend_id

    def quality(self, arg: Argument) -> float:
        hit = self.cache.get(self.identifier, quality_key(arg.topic_stance, arg.text))
        if hit is None:
            raise CacheMissError(f"no cached quality score for argument {arg.id!r}")
        return hit

    def match(self, arg_text: str, summary_text: str) -> float:
        hit = self.cache.get(self.identifier, match_key(arg_text, summary_text))
        if hit is None:
            raise CacheMissError("no cached match score for pair")
        return hit


def _post_json(url: str, payload: dict, timeout: float) -> dict:
    try:
        resp = requests.post(url, json=payload, timeout=timeout)
    except requests.RequestException as exc:
        raise ScorerTransportError(f"POST {url} failed: {exc}") from exc
    if resp.status_code >= 400:
        detail = ""
        try:
            detail = resp.json().get("error", "")
        except ValueError:
            pass
        raise ScorerTransportError(f"POST {url} -> HTTP {resp.status_code} {detail}".strip())
    return resp.json()


class RemoteServiceScorer:
    """Client for the HTTP scorer service (/v1/match, /v1/quality)."""

    def __init__(self, endpoint: str | None = None, timeout: float = 30.0) -> None:
        endpoint = endpoint or os.environ.get(DEFAULT_ENDPOINT_ENV)
        if not endpoint:
            raise ValidationError(
                f"remote scorer needs an endpoint (flag or {DEFAULT_ENDPOINT_ENV})"
            )
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.identifier = f"remote:{self.endpoint}"

    def match(self, arg_text: str, summary_text: str) -> float:
        return self.match_many([(arg_text, summary_text)])[0]

    def match_many(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        scores: list[float] = []
        for start in range(0, len(pairs), _BATCH):
            chunk = pairs[start : start + _BATCH]
            try:
                body = _post_json(
                    f"{self.endpoint}/v1/match",
                    {"pairs": [[a, b] for a, b in chunk]},
                    self.timeout,
                )
            except ScorerTransportError as exc:
                raise ScorerTransportError(
                    f"{exc} (pairs {start}..{start + len(chunk) - 1})"
                ) from exc
            got = body.get("scores")
            if not isinstance(got, list) or len(got) != len(chunk):
                raise ScoreContractError("match response does not align with request")
            scores.extend(_check_score(s, self.identifier) for s in got)
        return scores

    def quality(self, arg: Argument) -> float:
        return self.quality_many([arg])[0]

    def quality_many(self, args: Sequence[Argument]) -> list[float]:
        if not args:
            return []
        scores: list[float | None] = [None] * len(args)
        for ts, group in _group_by_ts(list(enumerate(args))):
            body = _post_json(
                f"{self.endpoint}/v1/quality",
                {
                    "topic": ts.topic,
                    "stance": int(ts.stance),
                    "arguments": [a.text for _i, a in group],
                },
                self.timeout,
            )
            got = body.get("scores")
            if not isinstance(got, list) or len(got) != len(group):
                raise ScoreContractError("quality response does not align with request")
            for (i, _a), s in zip(group, got):
                scores[i] = _check_score(s, self.identifier)
        return scores  # type: ignore[return-value]


class EmbeddingCosineScorer:
    """Match via embedding cosine mapped to [0, 1]; symmetric by construction.

    Quality falls back to topic affinity (cosine between argument and topic
    text) since a plain embedding endpoint has no quality head.
    """

    def __init__(self, endpoint: str | None = None, timeout: float = 30.0) -> None:
        endpoint = endpoint or os.environ.get(DEFAULT_ENDPOINT_ENV)
        if not endpoint:
            raise ValidationError(
                f"embedding scorer needs an endpoint (flag or {DEFAULT_ENDPOINT_ENV})"
            )
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.identifier = f"embed-cosine:{self.endpoint}"

    def _embed(self, texts: Sequence[str]) -> np.ndarray:
        vectors: list[list[float]] = []
        for start in range(0, len(texts), _BATCH):
            body = _post_json(
                f"{self.endpoint}/v1/embed",
                {"texts": list(texts[start : start + _BATCH])},
                self.timeout,
            )
            got = body.get("vectors")
            if not isinstance(got, list) or len(got) != len(texts[start : start + _BATCH]):
                raise ScoreContractError("embed response does not align with request")
            vectors.extend(got)
        mat = np.asarray(vectors, dtype=np.float64)
        norms = np.linalg.norm(mat, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        return mat / norms

    @staticmethod
    def _to_unit_interval(cosine: np.ndarray) -> np.ndarray:
        scaled = (cosine + 1.0) / 2.0
        # Guard float drift only; genuine violations are impossible after
        # normalization.
        return np.clip(scaled, 0.0, 1.0)

    def match(self, arg_text: str, summary_text: str) -> float:
        return self.match_many([(arg_text, summary_text)])[0]

    def match_many(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        texts: list[str] = []
        index: dict[str, int] = {}
        for a, b in pairs:
            for t in (a, b):
                if t not in index:
                    index[t] = len(texts)
                    texts.append(t)
        emb = self._embed(texts)
        out = []
        for a, b in pairs:
            cos = float(emb[index[a]] @ emb[index[b]])
            out.append(float(self._to_unit_interval(np.asarray(cos))))
        return out

    def quality(self, arg: Argument) -> float:
        return self.match(arg.text, arg.topic_stance.topic)


def build_scorer(
    kind: str,
    endpoint: str | None = None,
    cache_path: str | Path | None = None,
) -> ScorerBackend:
    """Instantiate a backend from its config name."""
    if kind == "mock":
        backend: ScorerBackend = MockLexicalScorer()
    elif kind == "remote":
        backend = RemoteServiceScorer(endpoint)
    elif kind == "embedding":
        backend = EmbeddingCosineScorer(endpoint)
    elif kind == "cached":
        if cache_path is None:
            raise ValidationError("cached scorer requires a cache path")
        return CachedFileScorer(cache_path)
    else:
        raise ValidationError(f"unknown scorer kind {kind!r}")
    if cache_path is not None and Path(cache_path).exists():
        return CachingScorer(backend, ScoreCache.load(cache_path))
    if cache_path is not None:
        return CachingScorer(backend)
    return backend


def _group_by_ts(
    indexed: Sequence[tuple[int, Argument]],
) -> Iterable[tuple[TopicStance, list[tuple[int, Argument]]]]:
    groups: dict[TopicStance, list[tuple[int, Argument]]] = {}
    for i, a in indexed:
        groups.setdefault(a.topic_stance, []).append((i, a))
    return groups.items()
