"""Frequency-based extractor with rule-normalized output forms."""

from __future__ import annotations

from collections import Counter
from dataclasses import replace

from ..corpus import Document
from ..errors import EmptyDocument
from ..textproc import Normalizer, word_tokens
from .candidates import Candidate, ExtractionResult, generate_candidates


def extract_termfreq(
    doc: Document,
    k: int,
    n: Normalizer,
    max_len: int = 3,
    lang: str = "ru",
    stopwords: frozenset[str] | None = None,
) -> ExtractionResult:
    """Score candidates by summed within-document token frequency.

    score = (sum of each phrase token's normalized-token frequency in
    the document) * phrase length; ties go to the earlier occurrence.
    Returned surfaces are the normalized forms themselves, standing in
    for dictionary-form normalization.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    words = word_tokens(doc.text)
    if not words:
        raise EmptyDocument(doc.id)
    freq = Counter(n.normalize(t.surface) for t in words)

    scored: list[Candidate] = []
    for cand in generate_candidates(
        doc.text, max_len=max_len, lang=lang, normalizer=n, stopwords=stopwords
    ):
        parts = cand.normalized.split(" ")
        score = float(sum(freq[p] for p in parts) * len(parts))
        # The normalized form becomes the output surface.
        scored.append(replace(cand, surface=cand.normalized, score=score))

    scored.sort(key=lambda c: (-c.score, c.token_span[0]))
    return ExtractionResult("termfreq", tuple(scored[:k]), "higher_better")
