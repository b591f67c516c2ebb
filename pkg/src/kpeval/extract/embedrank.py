"""Embedding-similarity extractor with optional diversity re-ranking."""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from ..corpus import Document
from ..embed import EmbeddingProvider, cosine
from ..errors import EmptyDocument
from ..textproc import Normalizer, word_tokens
from .candidates import Candidate, ExtractionResult, generate_candidates


def _candidate_vectors(
    provider: EmbeddingProvider, candidates: list[Candidate]
) -> list[np.ndarray]:
    texts = [c.surface for c in candidates]
    batched = getattr(provider, "embed_texts", None)
    if callable(batched):
        return list(batched(texts))
    return [provider.embed_text(t) for t in texts]


def extract_embedrank(
    doc: Document,
    k: int,
    max_len: int = 3,
    provider: EmbeddingProvider = None,
    diversity: float = 0.0,
    lang: str = "ru",
    normalizer: Normalizer | None = None,
    stopwords: frozenset[str] | None = None,
) -> ExtractionResult:
    """Rank candidates by cosine similarity to the whole document.

    diversity = 0 sorts by relevance; otherwise greedy
    maximal-marginal-relevance with objective
    (1 - diversity) * relevance - diversity * max cosine to the
    already-selected set. Recorded scores are the objective values at
    selection time, so they are non-increasing down the ranking.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if provider is None:
        raise ValueError("embedding provider required")
    if not 0.0 <= diversity < 1.0:
        raise ValueError("diversity must be in [0, 1)")
    if not word_tokens(doc.text):
        raise EmptyDocument(doc.id)

    candidates = generate_candidates(
        doc.text, max_len=max_len, lang=lang, normalizer=normalizer,
        stopwords=stopwords,
    )
    if not candidates:
        return ExtractionResult("embedrank", (), "higher_better")

    doc_vec = provider.embed_text(doc.text)
    vectors = _candidate_vectors(provider, candidates)
    relevance = [cosine(v, doc_vec) for v in vectors]

    if diversity == 0.0:
        order = sorted(
            range(len(candidates)),
            key=lambda i: (-relevance[i], candidates[i].token_span[0]),
        )[:k]
        ranking = tuple(
            replace(candidates[i], score=relevance[i]) for i in order
        )
        return ExtractionResult("embedrank", ranking, "higher_better")

    remaining = list(range(len(candidates)))
    selected: list[int] = []
    ranking_list: list[Candidate] = []
    while remaining and len(selected) < k:
        best_idx = None
        best_obj = None
        for i in remaining:
            redundancy = max(
                (cosine(vectors[i], vectors[j]) for j in selected), default=0.0
            )
            obj = (1.0 - diversity) * relevance[i] - diversity * redundancy
            key = (-obj, candidates[i].token_span[0])
            if best_obj is None or key < best_obj:
                best_obj = key
                best_idx = i
        selected.append(best_idx)
        remaining.remove(best_idx)
        ranking_list.append(replace(candidates[best_idx], score=-best_obj[0]))
    return ExtractionResult("embedrank", tuple(ranking_list), "higher_better")
