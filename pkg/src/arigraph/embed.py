"""Text embedders and a dot-product scorer.

:class:`HashEmbedder` is the offline, reproducible default: a signed
feature-hashing bag of tokens. :class:`RemoteEmbedder` talks to an
OpenAI-compatible ``/embeddings`` endpoint.
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
import threading
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np
import requests

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"[a-z0-9]+")
_HASH_KEY = b"arigraph-embed-v1"


class EmbedUnavailable(RuntimeError):
    """The remote embedding service could not be reached or answered badly."""


class Embedder(Protocol):
    def embed(self, text: str) -> np.ndarray: ...

    def dimension(self) -> int: ...


def tokenize(text: str) -> list[str]:
    # ASCII-only lowering keeps tokenization locale independent
    lowered = text.translate(_ASCII_LOWER)
    return _TOKEN.findall(lowered)


_ASCII_LOWER = str.maketrans("ABCDEFGHIJKLMNOPQRSTUVWXYZ", "abcdefghijklmnopqrstuvwxyz")


def _token_slot(token: str, dim: int) -> tuple[int, float]:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8, key=_HASH_KEY).digest()
    h = int.from_bytes(digest, "little")
    return h % dim, (-1.0 if h >> 63 else 1.0)


class HashEmbedder:
    """Deterministic bag-of-tokens embedder, L2-normalized."""

    def __init__(self, dim: int = 256):
        if dim < 1:
            raise ValueError("dim must be positive")
        self._dim = dim

    def dimension(self) -> int:
        return self._dim

    def embed(self, text: str) -> np.ndarray:
        vec = np.zeros(self._dim, dtype=np.float64)
        for token in tokenize(text):
            idx, sign = _token_slot(token, self._dim)
            vec[idx] += sign
        norm = float(np.sqrt(np.dot(vec, vec)))
        if norm > 0.0:
            vec /= norm
        return vec


class RemoteEmbedder:
    """Client for an OpenAI-compatible embeddings endpoint."""

    def __init__(self, endpoint: str, model: str, api_key: str | None = None, timeout: float = 30.0):
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.timeout = timeout
        self._dim: int | None = None

    def embed_many(self, texts: Sequence[str]) -> list[np.ndarray]:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            response = requests.post(
                self.endpoint,
                headers=headers,
                json={"input": list(texts), "model": self.model},
                timeout=self.timeout,
            )
            response.raise_for_status()
            data = response.json()["data"]
            vectors = [np.asarray(item["embedding"], dtype=np.float64) for item in data]
        except (requests.RequestException, KeyError, TypeError, ValueError) as exc:
            raise EmbedUnavailable(str(exc)) from exc
        if len(vectors) != len(texts):
            raise EmbedUnavailable(f"asked for {len(texts)} embeddings, got {len(vectors)}")
        for v in vectors:
            if not np.all(np.isfinite(v)):
                raise EmbedUnavailable("non-finite embedding component")
        if vectors:
            self._dim = len(vectors[0])
        return vectors

    def embed(self, text: str) -> np.ndarray:
        return self.embed_many([text])[0]

    def dimension(self) -> int:
        if self._dim is None:
            self.embed("dimension probe")
        return self._dim  # type: ignore[return-value]


class CachedEmbedder:
    """Memoizes another embedder by exact text; optionally persisted as JSONL."""

    def __init__(self, inner: Embedder, path: str | Path | None = None):
        self.inner = inner
        self.path = Path(path) if path else None
        self._cache: dict[str, np.ndarray] = {}
        self._lock = threading.Lock()
        if self.path and self.path.exists():
            with self.path.open(encoding="utf-8") as fh:
                for line in fh:
                    rec = json.loads(line)
                    self._cache[rec["text"]] = np.asarray(rec["vector"], dtype=np.float64)

    def dimension(self) -> int:
        return self.inner.dimension()

    def embed(self, text: str) -> np.ndarray:
        hit = self._cache.get(text)
        if hit is not None:
            return hit
        vec = self.inner.embed(text)
        vec.setflags(write=False)
        with self._lock:
            self._cache.setdefault(text, vec)
        return self._cache[text]

    def __len__(self) -> int:
        return len(self._cache)

    def flush(self) -> None:
        if self.path is None:
            return
        with self.path.open("w", encoding="utf-8") as fh:
            for text, vec in self._cache.items():
                fh.write(json.dumps({"text": text, "vector": vec.tolist()}) + "\n")


def score(a: np.ndarray, b: np.ndarray, normalized: bool = False) -> float:
    """Dot-product similarity; ``normalized=True`` gives cosine (0 for zero vectors)."""
    dot = float(np.dot(a, b))
    if not normalized:
        return dot
    denom = float(np.linalg.norm(a) * np.linalg.norm(b))
    return dot / denom if denom > 0 else 0.0
