"""Evaluation metrics over keyphrase lists.

ROUGE-1 and full-match F1 operate on normalized (stemmed or
lemmatized) forms; the embedding-similarity score deliberately does
not normalize, matching tokens of the raw comma-joined strings by
maximum cosine similarity.
"""

from __future__ import annotations

import statistics
import warnings
from collections import Counter
from dataclasses import dataclass

from .embed import EmbeddingProvider, cosine
from .errors import EmptyInput
from .corpus import phrase_appears_in
from .textproc import Normalizer, normalize_phrase, word_tokens


@dataclass(frozen=True)
class MetricScore:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_pr(cls, precision: float, recall: float) -> "MetricScore":
        if precision + recall > 0:
            f1 = 2 * precision * recall / (precision + recall)
        else:
            f1 = 0.0
        return cls(precision, recall, f1)


ZERO_SCORE = MetricScore(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class TopKConfig:
    cutoffs: tuple[int, ...] = (5, 10, 15)
    untruncated: bool = False

    def __post_init__(self):
        if any(k < 1 for k in self.cutoffs):
            raise ValueError("cutoffs must be >= 1")
        if any(a >= b for a, b in zip(self.cutoffs, self.cutoffs[1:])):
            raise ValueError("cutoffs must be strictly increasing")


def join_keyphrases(phrases: list[str]) -> str:
    """Comma-joined string form used by string-level metrics and export."""
    return ", ".join(phrases)


def _unigram_keys(phrases: list[str], n: Normalizer) -> list[str]:
    return [n.normalize(t.surface) for t in word_tokens(join_keyphrases(phrases))]


def rouge1(
    candidates: list[str], references: list[str], n: Normalizer
) -> MetricScore:
    """Clipped unigram overlap of the joined, normalized phrase strings."""
    cand = _unigram_keys(candidates, n)
    ref = _unigram_keys(references, n)
    if not cand and not ref:
        warnings.warn("rouge1: both sides empty, scoring 0", stacklevel=2)
        return ZERO_SCORE
    if not cand or not ref:
        return ZERO_SCORE
    overlap = sum((Counter(cand) & Counter(ref)).values())
    return MetricScore.from_pr(overlap / len(cand), overlap / len(ref))


def fullmatch_f1(
    candidates: list[str], references: list[str], n: Normalizer
) -> MetricScore:
    """Exact-match precision/recall on normalized phrase sets."""
    cand = {normalize_phrase(p, n) for p in candidates}
    ref = {normalize_phrase(p, n) for p in references}
    if not cand and not ref:
        warnings.warn("fullmatch_f1: both sides empty, scoring 1", stacklevel=2)
        return MetricScore(1.0, 1.0, 1.0)
    if not cand or not ref:
        return ZERO_SCORE
    matches = len(cand & ref)
    return MetricScore.from_pr(matches / len(cand), matches / len(ref))


def bertscore(
    candidates: list[str], references: list[str], provider: EmbeddingProvider
) -> MetricScore:
    """Greedy token matching by maximum cosine over joined strings."""
    cand_vecs = [v for _, v in provider.embed_tokens(join_keyphrases(candidates))]
    ref_vecs = [v for _, v in provider.embed_tokens(join_keyphrases(references))]
    if not cand_vecs or not ref_vecs:
        return ZERO_SCORE
    sims = [[cosine(c, r) for r in ref_vecs] for c in cand_vecs]
    precision = sum(max(row) for row in sims) / len(cand_vecs)
    recall = sum(max(sims[i][j] for i in range(len(cand_vecs)))
                 for j in range(len(ref_vecs))) / len(ref_vecs)
    return MetricScore.from_pr(precision, recall)


def truncate_topk(phrases: list[str], k: int) -> list[str]:
    if k < 1:
        raise ValueError("k must be >= 1")
    return list(phrases[:k])


def abstractness(
    predictions: list[str], doc_text: str, n: Normalizer
) -> float:
    """Fraction of predicted phrases never appearing in the text."""
    if not predictions:
        return 0.0
    absent = sum(
        1 for p in predictions if not phrase_appears_in(p, doc_text, n)
    )
    return absent / len(predictions)


def aggregate(per_doc: list):
    """Field-wise arithmetic mean of scores, or mean of plain reals."""
    if not per_doc:
        raise EmptyInput("nothing to aggregate")
    if isinstance(per_doc[0], MetricScore):
        return MetricScore(
            statistics.fmean(s.precision for s in per_doc),
            statistics.fmean(s.recall for s in per_doc),
            statistics.fmean(s.f1 for s in per_doc),
        )
    return statistics.fmean(per_doc)
