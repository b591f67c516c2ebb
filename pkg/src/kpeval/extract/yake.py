"""Statistical single-document extractor over YAKE-style term features.

Term importance combines casing, position, frequency, context
relatedness, and sentence spread; phrase scores divide the product of
term scores by occurrence count times the sum. Lower scores are
better. Near-duplicate phrases are pruned by normalized Levenshtein
similarity, keeping the better-scored phrase.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

from ..corpus import Document
from ..errors import EmptyDocument
from ..textproc import (
    LowercaseNormalizer,
    TokenKind,
    is_stopword,
    sentence_index_for,
    split_sentences,
    tokenize,
)
from .candidates import Candidate, ExtractionResult, generate_candidates


@dataclass(frozen=True)
class TermFeatures:
    term: str
    tf: int
    wcase: float
    wpos: float
    wfreq: float
    wrel: float
    wsent: float
    score: float


def levenshtein_similarity(a: str, b: str) -> float:
    """1 - edit_distance / max(len); 1.0 for two empty strings."""
    if not a and not b:
        return 1.0
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return 1.0 - prev[-1] / max(len(a), len(b))


def yake_term_features(
    text: str,
    window: int = 1,
    lang: str = "ru",
    stopwords: frozenset[str] | None = None,
) -> dict[str, TermFeatures]:
    """Per-term feature table over lowercased word tokens."""
    spans = split_sentences(text)
    total_sentences = max(len(spans), 1)

    # (term, surface, sentence index, word position within sentence)
    occs: list[tuple[str, str, int, int]] = []
    sent_word_pos = -1
    prev_sent = -1
    for tok in tokenize(text):
        if tok.kind is not TokenKind.WORD:
            continue
        sent = sentence_index_for(spans, tok.start)
        if sent != prev_sent:
            sent_word_pos = 0
            prev_sent = sent
        else:
            sent_word_pos += 1
        occs.append((tok.surface.lower().replace("ё", "е"), tok.surface, sent, sent_word_pos))
    if not occs:
        return {}

    def is_stop(term: str) -> bool:
        if stopwords is not None:
            return term in stopwords
        return is_stopword(term, lang)

    tf: dict[str, int] = {}
    upper: dict[str, int] = {}
    proper: dict[str, int] = {}
    sent_sets: dict[str, set[int]] = {}
    for term, surface, sent, pos in occs:
        tf[term] = tf.get(term, 0) + 1
        sent_sets.setdefault(term, set()).add(sent)
        if len(surface) > 1 and surface.isupper():
            upper[term] = upper.get(term, 0) + 1
        elif surface[0].isupper() and pos != 0:
            proper[term] = proper.get(term, 0) + 1
    max_tf = max(tf.values())

    nonstop_tfs = [count for term, count in tf.items() if not is_stop(term)]
    if not nonstop_tfs:
        nonstop_tfs = list(tf.values())
    mean_tf = statistics.fmean(nonstop_tfs)
    std_tf = statistics.pstdev(nonstop_tfs)

    left: dict[str, list[str]] = {t: [] for t in tf}
    right: dict[str, list[str]] = {t: [] for t in tf}
    for i, (term, _, sent, _) in enumerate(occs):
        for off in range(1, window + 1):
            if i - off >= 0 and occs[i - off][2] == sent:
                left[term].append(occs[i - off][0])
            if i + off < len(occs) and occs[i + off][2] == sent:
                right[term].append(occs[i + off][0])

    features: dict[str, TermFeatures] = {}
    for term, count in tf.items():
        wcase = max(upper.get(term, 0), proper.get(term, 0)) / (1.0 + math.log(count))
        median_sent = statistics.median(sorted(sent_sets[term]))
        wpos = math.log(math.log(3.0 + median_sent))
        wfreq = count / (mean_tf + std_tf)
        dl = len(set(left[term])) / len(left[term]) if left[term] else 0.0
        dr = len(set(right[term])) / len(right[term]) if right[term] else 0.0
        wrel = 1.0 + (dl + dr) * count / max_tf
        wsent = len(sent_sets[term]) / total_sentences
        score = (wrel * wpos) / (wcase + wfreq / wrel + wsent / wrel)
        features[term] = TermFeatures(
            term, count, wcase, wpos, wfreq, wrel, wsent, score
        )
    return features


def extract_yake(
    doc: Document,
    k: int,
    max_len: int = 3,
    window: int = 1,
    lang: str = "ru",
    stopwords: frozenset[str] | None = None,
    dedup_threshold: float = 0.8,
) -> ExtractionResult:
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 1 <= max_len <= 4:
        raise ValueError("max_len must be in 1..4")
    if window < 1:
        raise ValueError("window must be >= 1")
    features = yake_term_features(doc.text, window=window, lang=lang, stopwords=stopwords)
    if not features:
        raise EmptyDocument(doc.id)

    spans = generate_candidates(
        doc.text,
        max_len=max_len,
        lang=lang,
        normalizer=LowercaseNormalizer(),
        stopwords=stopwords,
        dedup=False,
    )
    count: dict[str, int] = {}
    first: dict[str, Candidate] = {}
    for cand in spans:
        count[cand.normalized] = count.get(cand.normalized, 0) + 1
        first.setdefault(cand.normalized, cand)

    scored: list[Candidate] = []
    for normalized, cand in first.items():
        terms = normalized.split(" ")
        prod = 1.0
        total = 0.0
        for t in terms:
            s = features[t].score
            prod *= s
            total += s
        score = prod / (count[normalized] * (1.0 + total))
        scored.append(
            Candidate(cand.surface, normalized, cand.token_span, score)
        )
    scored.sort(key=lambda c: (c.score, c.token_span[0]))

    kept: list[Candidate] = []
    for cand in scored:
        duplicate = any(
            levenshtein_similarity(cand.normalized, other.normalized)
            > dedup_threshold
            for other in kept
        )
        if not duplicate:
            kept.append(cand)
    return ExtractionResult("yake", tuple(kept[:k]), "lower_better")
