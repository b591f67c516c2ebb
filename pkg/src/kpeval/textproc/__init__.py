"""Deterministic text processing: tokens, sentences, stemming, stopwords."""

from .normalize import (
    LemmaTableNormalizer,
    LowercaseNormalizer,
    Normalizer,
    RussianStemNormalizer,
    default_normalizer,
    normalize_phrase,
)
from .russian_stem import stem_ru
from .stopwords import bundled_stopwords, is_stopword, load_stopwords
from .tokens import (
    SentenceSpan,
    Token,
    TokenKind,
    sentence_index_for,
    split_sentences,
    tokenize,
    word_tokens,
)

__all__ = [
    "LemmaTableNormalizer",
    "LowercaseNormalizer",
    "Normalizer",
    "RussianStemNormalizer",
    "SentenceSpan",
    "Token",
    "TokenKind",
    "bundled_stopwords",
    "default_normalizer",
    "is_stopword",
    "load_stopwords",
    "normalize_phrase",
    "sentence_index_for",
    "split_sentences",
    "stem_ru",
    "tokenize",
    "word_tokens",
]
