"""Corpus loading, validation, and dataset statistics.

Documents arrive as UTF-8 line-delimited JSON records with fields
``id``, ``text``, ``keyphrases``, ``domain``, ``split``; unknown fields
are ignored. Statistics are computed over train and test splits
combined, with population standard deviations.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass
from pathlib import Path

from .errors import DuplicateId, EmptyCorpus, MalformedRecord
from .textproc import Normalizer, TokenKind, normalize_phrase, split_sentences, tokenize

_SPLITS = ("train", "test")


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    keyphrases: tuple[str, ...]
    domain: str
    split: str


@dataclass(frozen=True)
class Corpus:
    name: str
    documents: tuple[Document, ...]

    def __post_init__(self):
        if not self.documents:
            raise EmptyCorpus(f"corpus {self.name!r} has no documents")
        seen = set()
        for doc in self.documents:
            if doc.id in seen:
                raise DuplicateId(doc.id)
            seen.add(doc.id)

    def split_documents(self, split: str) -> tuple[Document, ...]:
        return tuple(d for d in self.documents if d.split == split)

    def by_id(self) -> dict[str, Document]:
        return {d.id: d for d in self.documents}


@dataclass(frozen=True)
class MeanStd:
    mean: float
    std: float


@dataclass(frozen=True)
class CorpusStats:
    train_size: int
    test_size: int
    avg_sentences: MeanStd
    avg_tokens: MeanStd
    avg_keyphrases: MeanStd
    absent_pct: float


def _parse_record(obj: object, line_no: int) -> Document:
    if not isinstance(obj, dict):
        raise MalformedRecord(line_no, "record is not an object")
    for key in ("id", "text", "keyphrases", "domain", "split"):
        if key not in obj:
            raise MalformedRecord(line_no, f"missing field {key!r}")
    doc_id, text, domain, split = obj["id"], obj["text"], obj["domain"], obj["split"]
    keys = obj["keyphrases"]
    if not isinstance(doc_id, str) or not doc_id:
        raise MalformedRecord(line_no, "id must be a non-empty string")
    if not isinstance(text, str) or not text.strip():
        raise MalformedRecord(line_no, "text must be a non-empty string")
    if not isinstance(domain, str):
        raise MalformedRecord(line_no, "domain must be a string")
    if split not in _SPLITS:
        raise MalformedRecord(line_no, f"split must be one of {_SPLITS}")
    if not isinstance(keys, list) or not keys:
        raise MalformedRecord(line_no, "keyphrases must be a non-empty array")
    cleaned = []
    for kp in keys:
        if not isinstance(kp, str) or not kp.strip():
            raise MalformedRecord(line_no, "keyphrases must be non-empty strings")
        cleaned.append(kp.strip())
    return Document(doc_id, text, tuple(cleaned), domain, split)


def load_corpus(path: str | Path, name: str | None = None) -> Corpus:
    """Load and validate a line-delimited corpus file.

    Blank lines are skipped. Raises MalformedRecord with the 1-based
    line number on the first invalid record, DuplicateId on repeated
    ids, EmptyCorpus when no records survive.
    """
    path = Path(path)
    docs: list[Document] = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(line_no, f"invalid JSON: {exc.msg}") from exc
            docs.append(_parse_record(obj, line_no))
    return Corpus(name or path.stem, tuple(docs))


def text_token_keys(text: str, n: Normalizer) -> list[str]:
    """Normalized matching keys of a text: words normalized, numbers kept."""
    keys = []
    for tok in tokenize(text):
        if tok.kind is TokenKind.WORD:
            keys.append(n.normalize(tok.surface))
        elif tok.kind is TokenKind.NUMBER:
            keys.append(tok.surface)
    return keys


def phrase_appears_in(phrase: str, text: str, n: Normalizer) -> bool:
    """Contiguous normalized-token containment of phrase in text."""
    key = normalize_phrase(phrase, n)
    if not key:
        return False
    needle = key.split(" ")
    hay = text_token_keys(text, n)
    m, k = len(hay), len(needle)
    if k > m:
        return False
    first = needle[0]
    for i in range(m - k + 1):
        if hay[i] == first and hay[i : i + k] == needle:
            return True
    return False


def _mean_std(values: list[float]) -> MeanStd:
    return MeanStd(statistics.fmean(values), statistics.pstdev(values))


def corpus_stats(c: Corpus, n: Normalizer) -> CorpusStats:
    """Dataset characteristics over all documents of the corpus.

    Token counts include punctuation tokens (the token stream as a
    whole is the counting unit); absent_pct is the share of reference
    keyphrases that never occur contiguously, after normalization, in
    their document's text.
    """
    token_counts: list[float] = []
    sentence_counts: list[float] = []
    keyphrase_counts: list[float] = []
    absent = 0
    total_keys = 0
    for doc in c.documents:
        token_counts.append(float(len(tokenize(doc.text))))
        sentence_counts.append(float(len(split_sentences(doc.text))))
        keyphrase_counts.append(float(len(doc.keyphrases)))
        for kp in doc.keyphrases:
            total_keys += 1
            if not phrase_appears_in(kp, doc.text, n):
                absent += 1
    return CorpusStats(
        train_size=len(c.split_documents("train")),
        test_size=len(c.split_documents("test")),
        avg_sentences=_mean_std(sentence_counts),
        avg_tokens=_mean_std(token_counts),
        avg_keyphrases=_mean_std(keyphrase_counts),
        absent_pct=100.0 * absent / total_keys,
    )
