"""Bundled stopword lists with file-based overrides."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

_BUNDLED = {"ru": "stopwords_ru.txt", "en": "stopwords_en.txt"}


def parse_stopword_file(content: str) -> frozenset[str]:
    """Parse stopword file content: one word per line, '#' comments."""
    words = set()
    for line in content.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.add(line.lower())
    return frozenset(words)


def load_stopwords(path: str | Path) -> frozenset[str]:
    return parse_stopword_file(Path(path).read_text(encoding="utf-8"))


@lru_cache(maxsize=None)
def bundled_stopwords(lang: str) -> frozenset[str]:
    try:
        name = _BUNDLED[lang]
    except KeyError:
        raise ValueError(f"no bundled stopword list for language {lang!r}") from None
    content = resources.files("kpeval.textproc").joinpath("data", name).read_text(
        encoding="utf-8"
    )
    return parse_stopword_file(content)


def is_stopword(word: str, lang: str = "ru") -> bool:
    """Membership in the bundled list for ``lang``, case-insensitive."""
    if not word:
        return False
    return word.lower() in bundled_stopwords(lang)
