"""Shared candidate-generation stage for all extractors.

Candidates are contiguous word-token sequences that contain no
stopword and no number token and never cross a sentence boundary.
Spans index into the full token stream of the text.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..textproc import (
    Normalizer,
    TokenKind,
    default_normalizer,
    is_stopword,
    sentence_index_for,
    split_sentences,
    tokenize,
)


@dataclass(frozen=True)
class Candidate:
    surface: str
    normalized: str
    token_span: tuple[int, int]  # (start index in token stream, length)
    score: float = 0.0


@dataclass(frozen=True)
class ExtractionResult:
    extractor: str
    ranking: tuple[Candidate, ...]
    direction: str  # "lower_better" | "higher_better"


def _word_blocks(
    text: str,
    lang: str,
    stopwords: frozenset[str] | None,
) -> list[list[tuple[int, str]]]:
    """Maximal stopword-free word runs, each within one sentence.

    Returns blocks of (token_stream_index, surface) pairs.
    """
    tokens = tokenize(text)
    spans = split_sentences(text)

    def stop(word: str) -> bool:
        if stopwords is not None:
            return word.lower() in stopwords
        return is_stopword(word, lang)

    blocks: list[list[tuple[int, str]]] = []
    current: list[tuple[int, str]] = []
    current_sentence = -1
    for idx, tok in enumerate(tokens):
        if tok.kind is not TokenKind.WORD or stop(tok.surface):
            if current:
                blocks.append(current)
                current = []
            continue
        sent = sentence_index_for(spans, tok.start)
        if current and sent != current_sentence:
            blocks.append(current)
            current = []
        current.append((idx, tok.surface))
        current_sentence = sent
    if current:
        blocks.append(current)
    return blocks


def generate_candidates(
    doc_text: str,
    max_len: int = 3,
    lang: str = "ru",
    normalizer: Normalizer | None = None,
    stopwords: frozenset[str] | None = None,
    dedup: bool = True,
) -> list[Candidate]:
    """Enumerate candidate phrases of 1..max_len tokens.

    With dedup (the default), candidates sharing a normalized form are
    merged keeping the first occurrence's surface; dedup=False yields
    one Candidate per span so callers can count phrase occurrences.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    n = normalizer or default_normalizer()
    out: list[Candidate] = []
    seen: set[str] = set()
    for block in _word_blocks(doc_text, lang, stopwords):
        for i in range(len(block)):
            for length in range(1, max_len + 1):
                if i + length > len(block):
                    break
                words = block[i : i + length]
                surface = " ".join(w for _, w in words)
                normalized = " ".join(n.normalize(w) for _, w in words)
                if dedup:
                    if normalized in seen:
                        continue
                    seen.add(normalized)
                out.append(Candidate(surface, normalized, (words[0][0], length)))
    return out
