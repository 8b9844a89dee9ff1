"""Chat-completion backends: live HTTP providers, a replay store and mocks.

Every request is reduced to a fingerprint (SHA-256 over model, messages,
sampling parameters and an optional caller tag). The replay store keys
recorded transcripts by that fingerprint so any run can be re-executed
offline; the mock backend serves canned text for known fingerprints or
defers to a deterministic responder function.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol

import requests

from argsum.errors import LlmTransportError, ValidationError

log = logging.getLogger(__name__)

OPENAI_KEY_ENV = "ARGSUM_OPENAI_KEY"
OPENROUTER_KEY_ENV = "ARGSUM_OPENROUTER_KEY"
OPENAI_URL = "https://api.openai.com/v1/chat/completions"
OPENROUTER_URL = "https://openrouter.ai/api/v1/chat/completions"


@dataclass(frozen=True)
class LlmParams:
    model: str = "mock"
    temperature: float = 1.0
    max_output_tokens: int = 2048
    retries: int = 2
    timeout: float = 60.0

    def __post_init__(self) -> None:
        if self.retries < 0:
            raise ValidationError("retries must be >= 0")
        if self.temperature < 0:
            raise ValidationError("temperature must be >= 0")


@dataclass(frozen=True)
class ChatRequest:
    model: str
    messages: tuple[dict[str, str], ...]
    temperature: float
    max_tokens: int
    tag: str | None = None

    def fingerprint(self) -> str:
        material = json.dumps(
            {
                "model": self.model,
                "messages": list(self.messages),
                "temperature": self.temperature,
                "max_tokens": self.max_tokens,
                "tag": self.tag,
            },
            sort_keys=True,
            ensure_ascii=False,
        )
        return hashlib.sha256(material.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class LlmTranscript:
    fingerprint: str
    raw_text: str


class ChatBackend(Protocol):
    def send(self, request: ChatRequest) -> str: ...


def build_messages(system: str | None, user: str) -> tuple[dict[str, str], ...]:
    messages: list[dict[str, str]] = []
    if system is not None:
        messages.append({"role": "system", "content": system})
    messages.append({"role": "user", "content": user})
    return tuple(messages)


def complete(
    backend: ChatBackend,
    system: str | None,
    user: str,
    params: LlmParams,
    tag: str | None = None,
) -> LlmTranscript:
    """One chat completion with retry + exponential backoff on transport errors."""
    request = ChatRequest(
        model=params.model,
        messages=build_messages(system, user),
        temperature=params.temperature,
        max_tokens=params.max_output_tokens,
        tag=tag,
    )
    last_error: Exception | None = None
    for attempt in range(params.retries + 1):
        try:
            text = backend.send(request)
            return LlmTranscript(fingerprint=request.fingerprint(), raw_text=text)
        except LlmTransportError as exc:
            last_error = exc
            if attempt < params.retries:
                delay = min(2.0**attempt, 30.0)
                log.warning("completion attempt %d failed (%s); retrying", attempt + 1, exc)
                time.sleep(delay)
    raise LlmTransportError(
        f"completion failed after {params.retries + 1} attempts: {last_error}"
    )


class MockChatBackend:
    """Deterministic backend: canned text by fingerprint, else a responder."""

    def __init__(
        self,
        canned: dict[str, str] | None = None,
        responder: Callable[[ChatRequest], str] | None = None,
    ) -> None:
        self.canned = dict(canned or {})
        self.responder = responder
        self.calls = 0

    def send(self, request: ChatRequest) -> str:
        self.calls += 1
        fp = request.fingerprint()
        if fp in self.canned:
            return self.canned[fp]
        if self.responder is not None:
            return self.responder(request)
        raise LlmTransportError(f"mock backend has no response for fingerprint {fp[:12]}")


class FlakyBackend:
    """Test helper: fail with transport errors n times, then delegate."""

    def __init__(self, inner: ChatBackend, failures: int) -> None:
        self.inner = inner
        self.remaining = failures

    def send(self, request: ChatRequest) -> str:
        if self.remaining > 0:
            self.remaining -= 1
            raise LlmTransportError("synthetic transport failure")
        return self.inner.send(request)


class ReplayStore:
    """Directory of recorded transcripts, one JSON file per fingerprint."""

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, fingerprint: str) -> Path:
        return self.root / f"{fingerprint}.json"

    def get(self, fingerprint: str) -> str | None:
        path = self._path(fingerprint)
        if not path.exists():
            return None
        return json.loads(path.read_text("utf-8"))["raw_text"]

    def put(self, request: ChatRequest, raw_text: str) -> None:
        record = {
            "fingerprint": request.fingerprint(),
            "request": {
                "model": request.model,
                "messages": list(request.messages),
                "temperature": request.temperature,
                "max_tokens": request.max_tokens,
                "tag": request.tag,
            },
            "raw_text": raw_text,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        }
        tmp = self._path(request.fingerprint()).with_suffix(".tmp")
        tmp.write_text(json.dumps(record, indent=2, ensure_ascii=False), "utf-8")
        tmp.replace(self._path(request.fingerprint()))

    def fingerprints(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.json"))


class ReplayBackend:
    """Serve recorded transcripts; optionally record misses from a live backend."""

    def __init__(self, store: ReplayStore, live: ChatBackend | None = None) -> None:
        self.store = store
        self.live = live

    def send(self, request: ChatRequest) -> str:
        hit = self.store.get(request.fingerprint())
        if hit is not None:
            return hit
        if self.live is None:
            raise LlmTransportError(
                f"no recorded transcript for fingerprint {request.fingerprint()[:12]} "
                "and no live backend configured"
            )
        text = self.live.send(request)
        self.store.put(request, text)
        return text


class HttpChatBackend:
    """Provider-neutral chat-completions client (OpenAI-style wire format)."""

    def __init__(
        self,
        url: str,
        api_key: str | None,
        extra_headers: dict[str, str] | None = None,
        timeout: float = 60.0,
    ) -> None:
        self.url = url
        self.api_key = api_key
        self.extra_headers = extra_headers or {}
        self.timeout = timeout

    def send(self, request: ChatRequest) -> str:
        headers = {"Content-Type": "application/json", **self.extra_headers}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = {
            "model": request.model,
            "messages": list(request.messages),
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        try:
            resp = requests.post(self.url, json=payload, headers=headers, timeout=self.timeout)
        except requests.RequestException as exc:
            raise LlmTransportError(f"POST {self.url} failed: {exc}") from exc
        if resp.status_code == 429 or resp.status_code >= 500:
            raise LlmTransportError(f"HTTP {resp.status_code} from {self.url}")
        if resp.status_code >= 400:
            raise ValidationError(f"HTTP {resp.status_code} from {self.url}: {resp.text[:200]}")
        body = resp.json()
        try:
            if "choices" in body:
                return body["choices"][0]["message"]["content"]
            return body["text"]
        except (KeyError, IndexError, TypeError) as exc:
            raise LlmTransportError(f"unexpected response shape from {self.url}") from exc


def openai_backend(timeout: float = 60.0) -> HttpChatBackend:
    key = os.environ.get(OPENAI_KEY_ENV)
    if not key:
        raise ValidationError(f"{OPENAI_KEY_ENV} is not set")
    return HttpChatBackend(OPENAI_URL, key, timeout=timeout)


def openrouter_backend(timeout: float = 60.0) -> HttpChatBackend:
    key = os.environ.get(OPENROUTER_KEY_ENV)
    if not key:
        raise ValidationError(f"{OPENROUTER_KEY_ENV} is not set")
    return HttpChatBackend(OPENROUTER_URL, key, timeout=timeout)
