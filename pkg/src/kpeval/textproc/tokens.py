"""Offset-preserving tokenizer and sentence splitter.

Tokens carry their exact character span in the source string so that
``text[tok.start:tok.end] == tok.surface`` always holds and the original
text can be reconstructed from the token stream plus the gaps between
spans. This is the counting unit used for corpus statistics and the
input representation for all extractors.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class TokenKind(str, Enum):
    WORD = "word"
    NUMBER = "number"
    PUNCT = "punctuation"


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int
    kind: TokenKind


@dataclass(frozen=True)
class SentenceSpan:
    start: int
    end: int
    index: int


_SENTENCE_TERMINATORS = ".!?"


def _is_word_char(ch: str) -> bool:
    # Words are runs of Latin or Cyrillic letters; everything else
    # (Greek, CJK, symbols) is treated as punctuation.
    o = ord(ch)
    if 0x41 <= o <= 0x5A or 0x61 <= o <= 0x7A:
        return True
    if 0x0400 <= o <= 0x04FF or 0x0500 <= o <= 0x052F:
        return True
    if 0xC0 <= o <= 0x24F:
        return ch.isalpha()
    return False


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into word, number, and punctuation tokens.

    Word tokens are maximal runs of Latin/Cyrillic letters, optionally
    joined by word-internal hyphens ("веб-сервис" stays one token).
    Number tokens are maximal digit runs. Any other non-whitespace
    character becomes a single punctuation token. Whitespace separates
    tokens and is never emitted.
    """
    tokens: list[Token] = []
    n = len(text)
    i = 0
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if _is_word_char(ch):
            j = i + 1
            while j < n:
                if _is_word_char(text[j]):
                    j += 1
                elif (
                    text[j] == "-"
                    and j + 1 < n
                    and _is_word_char(text[j + 1])
                ):
                    j += 2  # hyphen glued between letters, plus the letter
                else:
                    break
            tokens.append(Token(text[i:j], i, j, TokenKind.WORD))
            i = j
        elif ch.isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token(text[i:j], i, j, TokenKind.NUMBER))
            i = j
        else:
            tokens.append(Token(ch, i, i + 1, TokenKind.PUNCT))
            i += 1
    return tokens


def word_tokens(text: str) -> list[Token]:
    """Only the word tokens of :func:`tokenize`, in order."""
    return [t for t in tokenize(text) if t.kind is TokenKind.WORD]


def _is_boundary(text: str, i: int) -> bool:
    """True when the terminator at position ``i`` ends a sentence."""
    ch = text[i]
    if ch == ".":
        # Abbreviation guard: a single-letter word before the period
        # ("A. Пример", "т. е.") does not end the sentence.
        if i >= 1 and _is_word_char(text[i - 1]):
            if i == 1 or not _is_word_char(text[i - 2]):
                return False
    j = i + 1
    n = len(text)
    while j < n and text[j].isspace():
        j += 1
    if j == n:
        return True
    return j > i + 1 and text[j].isupper()


def split_sentences(text: str) -> list[SentenceSpan]:
    """Sentence spans over ``text``, trimmed of surrounding whitespace.

    A boundary is placed after '.', '!' or '?' when it is followed by
    whitespace and an uppercase letter, or by the end of the text.
    Text without any terminator is a single sentence. Returned spans
    cover every word token of the text.
    """
    cuts = []
    for i, ch in enumerate(text):
        if ch in _SENTENCE_TERMINATORS and _is_boundary(text, i):
            cuts.append(i + 1)
    if not cuts or cuts[-1] != len(text):
        cuts.append(len(text))

    spans: list[SentenceSpan] = []
    seg_start = 0
    for cut in cuts:
        start, end = seg_start, cut
        while start < end and text[start].isspace():
            start += 1
        while end > start and text[end - 1].isspace():
            end -= 1
        if start < end:
            spans.append(SentenceSpan(start, end, len(spans)))
        seg_start = cut
    return spans


def sentence_index_for(spans: list[SentenceSpan], offset: int) -> int:
    """Index of the sentence span containing character ``offset``.

    Offsets that fall between spans (inter-sentence punctuation or
    whitespace) are assigned to the preceding sentence.
    """
    idx = 0
    for span in spans:
        if offset < span.start:
            break
        idx = span.index
        if offset < span.end:
            return span.index
    return idx
