"""Embedding providers: hermetic hash vectors, remote service, file cache.

All providers expose the same three-member surface: ``dim``,
``embed_text(text)`` returning one vector, and ``embed_tokens(text)``
returning one vector per word token of the text, in token order.
Vectors are numpy float64 arrays.
"""

from __future__ import annotations

import hashlib
import json
import threading
from pathlib import Path
from typing import Iterable, Protocol, runtime_checkable

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyInput,
    MalformedCache,
    MissingEmbedding,
    ProtocolError,
    TransportError,
    ZeroVector,
)
from .textproc import word_tokens


@runtime_checkable
class EmbeddingProvider(Protocol):
    dim: int

    def embed_text(self, text: str) -> np.ndarray: ...

    def embed_tokens(self, text: str) -> list[tuple[str, np.ndarray]]: ...


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity, clamped into [-1, 1]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"vector dims differ: {a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("cosine undefined for zero vectors")
    value = float(np.dot(a, b) / (na * nb))
    return max(-1.0, min(1.0, value))


def _normalized_mean(vectors: list[np.ndarray]) -> np.ndarray:
    mean = np.mean(np.stack(vectors), axis=0)
    norm = float(np.linalg.norm(mean))
    if norm < 1e-12:
        # Degenerate cancellation; fall back to the first vector.
        return vectors[0]
    return mean / norm


class HashProvider:
    """Deterministic pseudo-random unit vectors keyed by word identity.

    Each distinct word (lowercased, 'ё' folded) gets a fixed unit
    vector drawn from a generator seeded by a keyed hash of the word,
    so equal words always embed identically and different seeds give
    unrelated spaces. Text vectors are normalized token means.
    """

    def __init__(self, dim: int = 64, seed: int = 42):
        if dim < 2:
            raise ValueError("dim must be >= 2")
        self.dim = dim
        self.seed = seed
        self._cache: dict[str, np.ndarray] = {}
        self._lock = threading.Lock()

    def _word_vector(self, word: str) -> np.ndarray:
        key = word.lower().replace("ё", "е")
        with self._lock:
            vec = self._cache.get(key)
        if vec is not None:
            return vec
        digest = hashlib.blake2b(
            key.encode("utf-8"), digest_size=8, salt=str(self.seed).encode()[:16]
        ).digest()
        rng = np.random.default_rng(int.from_bytes(digest, "big"))
        raw = rng.standard_normal(self.dim)
        norm = float(np.linalg.norm(raw))
        if norm < 1e-12:
            raw = np.zeros(self.dim)
            raw[0] = 1.0
            norm = 1.0
        vec = raw / norm
        with self._lock:
            self._cache[key] = vec
        return vec

    def embed_tokens(self, text: str) -> list[tuple[str, np.ndarray]]:
        return [(t.surface, self._word_vector(t.surface)) for t in word_tokens(text)]

    def embed_text(self, text: str) -> np.ndarray:
        toks = word_tokens(text)
        if not toks:
            raise EmptyInput("no word tokens to embed")
        return _normalized_mean([self._word_vector(t.surface) for t in toks])


class RemoteProvider:
    """Client for an embedding service speaking the documented protocol.

    POSTs ``{"mode": ..., "inputs": [...]}`` to ``{endpoint}/embed`` and
    expects ``{"dim": d, "vectors": [...]}`` for text mode or
    ``{"dim": d, "token_vectors": [...]}`` for token mode. Responses
    are cached in memory by exact input string; the dimension is probed
    once at construction with an empty-inputs request.
    """

    def __init__(self, endpoint: str, timeout: float = 30.0, session=None):
        import requests

        self._url = endpoint.rstrip("/") + "/embed"
        self._timeout = timeout
        self._session = session or requests.Session()
        self._lock = threading.Lock()
        self._text_cache: dict[str, np.ndarray] = {}
        self._token_cache: dict[str, list[np.ndarray]] = {}
        self.dim = int(self._post("text", [])["dim"])

    def _post(self, mode: str, inputs: list[str]) -> dict:
        import requests

        try:
            resp = self._session.post(
                self._url,
                json={"mode": mode, "inputs": inputs},
                timeout=self._timeout,
            )
        except requests.RequestException as exc:
            raise TransportError(f"embedding request failed: {exc}") from exc
        if resp.status_code != 200:
            raise TransportError(f"embedding service returned HTTP {resp.status_code}")
        try:
            body = resp.json()
        except ValueError as exc:
            raise ProtocolError("response is not valid JSON") from exc
        if not isinstance(body, dict) or "dim" not in body:
            raise ProtocolError("response missing 'dim'")
        return body

    def _check_dim(self, vec: list) -> np.ndarray:
        arr = np.asarray(vec, dtype=np.float64)
        if arr.ndim != 1 or arr.shape[0] != self.dim:
            raise ProtocolError(
                f"vector of dim {arr.shape} does not match provider dim {self.dim}"
            )
        return arr

    def embed_texts(self, texts: Iterable[str]) -> list[np.ndarray]:
        texts = list(texts)
        with self._lock:
            missing = [t for t in texts if t not in self._text_cache]
            missing = list(dict.fromkeys(missing))
        if missing:
            body = self._post("text", missing)
            vectors = body.get("vectors")
            if not isinstance(vectors, list) or len(vectors) != len(missing):
                raise ProtocolError(
                    f"expected {len(missing)} vectors, got "
                    f"{len(vectors) if isinstance(vectors, list) else 'none'}"
                )
            checked = [self._check_dim(v) for v in vectors]
            with self._lock:
                for text, vec in zip(missing, checked):
                    self._text_cache[text] = vec
        with self._lock:
            return [self._text_cache[t] for t in texts]

    def embed_text(self, text: str) -> np.ndarray:
        return self.embed_texts([text])[0]

    def embed_tokens(self, text: str) -> list[tuple[str, np.ndarray]]:
        surfaces = [t.surface for t in word_tokens(text)]
        if not surfaces:
            return []
        with self._lock:
            cached = self._token_cache.get(text)
        if cached is None:
            body = self._post("tokens", [text])
            tv = body.get("token_vectors")
            if not isinstance(tv, list) or len(tv) != 1:
                raise ProtocolError("expected token_vectors for exactly 1 input")
            rows = tv[0]
            if not isinstance(rows, list) or len(rows) != len(surfaces):
                raise ProtocolError(
                    f"expected {len(surfaces)} token vectors, got "
                    f"{len(rows) if isinstance(rows, list) else 'none'}"
                )
            cached = [self._check_dim(v) for v in rows]
            with self._lock:
                self._token_cache[text] = cached
        return list(zip(surfaces, cached))


class CacheProvider:
    """Offline provider backed by a precomputed vector file.

    Strict: a key absent from the file raises MissingEmbedding, so a
    cached run either reproduces exactly or fails loudly.
    """

    def __init__(self, path: str | Path):
        path = Path(path)
        self._text: dict[str, np.ndarray] = {}
        self._tokens: dict[str, list[np.ndarray]] = {}
        dim: int | None = None
        with path.open(encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise MalformedCache(f"line {line_no}: invalid JSON") from exc
                if (
                    not isinstance(obj, dict)
                    or not isinstance(obj.get("key"), str)
                    or obj.get("mode") not in ("text", "tokens")
                    or not isinstance(obj.get("vectors"), list)
                    or not obj["vectors"]
                ):
                    raise MalformedCache(f"line {line_no}: bad record shape")
                rows = []
                for vec in obj["vectors"]:
                    arr = np.asarray(vec, dtype=np.float64)
                    if arr.ndim != 1 or arr.size == 0:
                        raise MalformedCache(f"line {line_no}: bad vector")
                    if dim is None:
                        dim = int(arr.shape[0])
                    elif arr.shape[0] != dim:
                        raise MalformedCache(
                            f"line {line_no}: dim {arr.shape[0]} != {dim}"
                        )
                    rows.append(arr)
                if obj["mode"] == "text":
                    if len(rows) != 1:
                        raise MalformedCache(
                            f"line {line_no}: text entry must hold exactly 1 vector"
                        )
                    self._text[obj["key"]] = rows[0]
                else:
                    self._tokens[obj["key"]] = rows
        if dim is None:
            raise MalformedCache("cache file holds no vectors")
        self.dim = dim

    def embed_text(self, text: str) -> np.ndarray:
        try:
            return self._text[text]
        except KeyError:
            raise MissingEmbedding(text, "text") from None

    def embed_tokens(self, text: str) -> list[tuple[str, np.ndarray]]:
        surfaces = [t.surface for t in word_tokens(text)]
        if not surfaces:
            # wordless keys are never written, so don't require them
            return []
        try:
            rows = self._tokens[text]
        except KeyError:
            raise MissingEmbedding(text, "tokens") from None
        if len(rows) != len(surfaces):
            raise MalformedCache(
                f"cache holds {len(rows)} token vectors for a "
                f"{len(surfaces)}-word text"
            )
        return list(zip(surfaces, rows))


def write_cache_file(
    path: str | Path,
    provider: EmbeddingProvider,
    text_keys: Iterable[str] = (),
    token_keys: Iterable[str] = (),
) -> None:
    """Precompute vectors for the given keys into a cache file."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for key in text_keys:
            record = {
                "key": key,
                "mode": "text",
                "vectors": [provider.embed_text(key).tolist()],
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
        for key in token_keys:
            vecs = [v.tolist() for _, v in provider.embed_tokens(key)]
            if not vecs:
                continue
            record = {"key": key, "mode": "tokens", "vectors": vecs}
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
