"""Word normalizers and phrase canonicalization.

A Normalizer maps one word to its canonical matching form. The default
is the rule-based Russian stemmer; a plain lowercase normalizer and a
table-driven lemmatizer (word TAB lemma file) are provided for
experiments with other normalization schemes.
"""

from __future__ import annotations

from pathlib import Path
from typing import Protocol, runtime_checkable

from .russian_stem import stem_ru
from .tokens import TokenKind, tokenize


@runtime_checkable
class Normalizer(Protocol):
    name: str

    def normalize(self, word: str) -> str: ...


class LowercaseNormalizer:
    """Lowercase with 'ё' folded to 'е'; no suffix stripping."""

    name = "lowercase"

    def normalize(self, word: str) -> str:
        return word.lower().replace("ё", "е")


class RussianStemNormalizer:
    """Default: lowercase + rule-based Russian suffix stripping."""

    name = "stemmer"

    def normalize(self, word: str) -> str:
        return stem_ru(word)


class LemmaTableNormalizer:
    """Lookup normalizer backed by a word<TAB>lemma table file.

    Words absent from the table are lowercased unchanged. Lemma values
    are themselves lowercased on load so the idempotence contract holds.
    """

    name = "external"

    def __init__(self, path: str | Path):
        table: dict[str, str] = {}
        for raw in Path(path).read_text(encoding="utf-8").splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            word, _, lemma = line.partition("\t")
            word = word.strip().lower()
            lemma = lemma.strip().lower()
            if word and lemma:
                table[word] = lemma
        self._table = table

    def normalize(self, word: str) -> str:
        w = word.lower()
        return self._table.get(w, w)


def normalize_phrase(phrase: str, n: Normalizer) -> str:
    """Canonical matching key of a phrase.

    Word tokens are normalized, number tokens kept verbatim, everything
    else dropped; parts join with single spaces. An all-punctuation
    phrase normalizes to the empty string.
    """
    parts = []
    for tok in tokenize(phrase):
        if tok.kind is TokenKind.WORD:
            parts.append(n.normalize(tok.surface))
        elif tok.kind is TokenKind.NUMBER:
            parts.append(tok.surface)
    return " ".join(parts)


def default_normalizer() -> Normalizer:
    return RussianStemNormalizer()
