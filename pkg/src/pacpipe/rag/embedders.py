"""Embedding backends: deterministic lexical hashing and a remote HTTP API.

The lexical backend makes the whole pipeline runnable and testable with no
network: terms are lowercased, split on non-alphanumerics, hashed into a
fixed 1024-dimensional term-frequency vector, then L2-normalized. Cosine
similarity on these vectors is the retrieval score for both backends.
"""

from __future__ import annotations

import hashlib
import os
import re

import numpy as np
import requests

from ..errors import EmbeddingError

LEXICAL_DIM = 1024
_TERM_RE = re.compile(r"[a-z0-9]+")


class LexicalEmbedder:
    """Hashed term-frequency embedder; identical text gives identical vectors."""

    name = f"lexical-tf-{LEXICAL_DIM}"
    dim = LEXICAL_DIM

    def embed(self, text: str) -> np.ndarray:
        if not text:
            raise ValueError("cannot embed empty text")
        vec = np.zeros(self.dim, dtype=np.float64)
        for term in _TERM_RE.findall(text.lower()):
            vec[_term_slot(term, self.dim)] += 1.0
        norm = float(np.linalg.norm(vec))
        if norm > 0.0:
            vec /= norm
        return vec


def _term_slot(term: str, dim: int) -> int:
    digest = hashlib.sha256(term.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % dim


class RemoteEmbedder:
    """Client for the de-facto embeddings wire protocol.

    POSTs ``{model, input: [text]}`` to ``{base_url}/v1/embeddings`` and
    reads ``{data: [{embedding: [...]}]}``. The API key comes from the
    environment variable named by ``api_key_env`` (never from flags).
    """

    def __init__(
        self,
        base_url: str,
        model: str,
        dim: int,
        api_key_env: str | None = None,
        timeout_s: float = 30.0,
        session: requests.Session | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.dim = dim
        self.name = f"remote:{model}"
        self.api_key_env = api_key_env
        self.timeout_s = timeout_s
        self._session = session or requests.Session()

    def embed(self, text: str) -> np.ndarray:
        if not text:
            raise ValueError("cannot embed empty text")
        headers = {"Content-Type": "application/json"}
        if self.api_key_env:
            key = os.environ.get(self.api_key_env)
            if not key:
                raise EmbeddingError(
                    f"environment variable {self.api_key_env!r} is not set"
                )
            headers["Authorization"] = f"Bearer {key}"
        try:
            resp = self._session.post(
                f"{self.base_url}/v1/embeddings",
                json={"model": self.model, "input": [text]},
                headers=headers,
                timeout=self.timeout_s,
            )
        except (requests.ConnectionError, requests.Timeout) as exc:
            raise EmbeddingError(f"embeddings endpoint unreachable: {exc}", retriable=True)
        if resp.status_code != 200:
            raise EmbeddingError(
                f"embeddings endpoint returned HTTP {resp.status_code}",
                retriable=resp.status_code >= 500,
            )
        try:
            values = resp.json()["data"][0]["embedding"]
        except (KeyError, IndexError, ValueError) as exc:
            raise EmbeddingError(f"malformed embeddings response: {exc}")
        vec = np.asarray(values, dtype=np.float64)
        if vec.shape != (self.dim,):
            raise EmbeddingError(
                f"embedding has dimension {vec.shape[0]}, expected {self.dim}"
            )
        if not np.all(np.isfinite(vec)):
            raise EmbeddingError("embedding contains non-finite values")
        norm = float(np.linalg.norm(vec))
        if norm > 0.0:
            vec = vec / norm
        return vec


def embedder_from_name(name: str):
    """Reconstruct a persisted index's embedder from its recorded name."""
    if name == LexicalEmbedder.name:
        return LexicalEmbedder()
    return None
