"""Rule-based Russian stemmer (Snowball algorithm, Cyrillic-direct).

Strips inflectional endings in four ordered steps operating on the RV
and R2 regions of the word. One pass of the classic algorithm is not
idempotent ("иванова" -> "иванов" -> "иван"), so :func:`stem_ru`
re-applies the rules until the word stops changing; normalized phrase
forms must survive a second normalization unchanged, and the fixpoint
guarantees that.

Words containing non-Cyrillic characters are returned lowercased with
'ё' folded to 'е' but otherwise untouched.
"""

from __future__ import annotations

from functools import lru_cache

_VOWELS = "аеиоуыэюя"

# Suffix groups, each sorted longest-first so the first match wins.
# Groups marked "_AJA" match only when preceded by 'а' or 'я'; the
# preceding letter is kept but must also lie inside RV.

_PERFECTIVE_GERUND_AJA = ("вшись", "вши", "в")
_PERFECTIVE_GERUND = ("ившись", "ывшись", "ивши", "ывши", "ив", "ыв")

_REFLEXIVE = ("ся", "сь")

_ADJECTIVE = (
    "ими", "ыми",
    "его", "ого", "ему", "ому",
    "ее", "ие", "ые", "ое", "ей", "ий", "ый", "ой", "ем", "им",
    "ым", "ом", "их", "ых", "ую", "юю", "ая", "яя", "ою", "ею",
)

_PARTICIPLE_AJA = ("ем", "нн", "вш", "ющ", "щ")
_PARTICIPLE = ("ивш", "ывш", "ующ")

_VERB_AJA = (
    "ешь", "нно",
    "ете", "йте",
    "ла", "на", "ли", "ем", "ло", "но", "ет", "ют", "ны", "ть",
    "й", "л", "н",
)
_VERB = (
    "ейте", "уйте",
    "ила", "ыла", "ена", "ите", "или", "ыли", "ило", "ыло",
    "ено", "ует", "уют", "ены", "ить", "ыть", "ишь",
    "ей", "уй", "ил", "ыл", "им", "ым", "ен", "ят", "ит", "ыт",
    "ую", "ю",
)

_NOUN = (
    "иями",
    "ями", "ами", "ией", "иям", "ием", "иях",
    "ев", "ов", "ие", "ье", "еи", "ии", "ей", "ой", "ий", "ям",
    "ем", "ам", "ом", "ах", "ях", "ию", "ью", "ия", "ья",
    "а", "е", "и", "й", "о", "у", "ы", "ь", "ю", "я",
)

_SUPERLATIVE = ("ейше", "ейш")


def _find_rv(word: str) -> int:
    """Start of RV: the substring after the first vowel."""
    for i, ch in enumerate(word):
        if ch in _VOWELS:
            return i + 1
    return len(word)


def _find_r2(word: str) -> int:
    """Start of R2: after the second vowel+consonant sequence."""
    r1 = len(word)
    for i in range(1, len(word)):
        if word[i] not in _VOWELS and word[i - 1] in _VOWELS:
            r1 = i + 1
            break
    for i in range(r1 + 1, len(word)):
        if word[i] not in _VOWELS and word[i - 1] in _VOWELS:
            return i + 1
    return len(word)


def _strip(word: str, suffixes: tuple[str, ...], rv: int) -> str | None:
    """Remove the longest suffix that lies entirely inside RV."""
    for suf in suffixes:
        if word.endswith(suf) and len(word) - len(suf) >= rv:
            return word[: -len(suf)]
    return None


def _strip_aja(word: str, suffixes: tuple[str, ...], rv: int) -> str | None:
    """Like :func:`_strip` but the suffix must follow 'а' or 'я'.

    The preceding vowel is kept and must itself be inside RV.
    """
    for suf in suffixes:
        if word.endswith(suf):
            cut = len(word) - len(suf)
            if cut - 1 >= rv and word[cut - 1] in "ая":
                return word[:cut]
    return None


def _stem_once(word: str) -> str:
    rv = _find_rv(word)
    r2 = _find_r2(word)

    # Step 1: perfective gerund, otherwise reflexive then
    # adjectival / verb / noun, first group that matches.
    out = _strip_aja(word, _PERFECTIVE_GERUND_AJA, rv)
    if out is None:
        out = _strip(word, _PERFECTIVE_GERUND, rv)
    if out is None:
        w = _strip(word, _REFLEXIVE, rv) or word
        adj = _strip(w, _ADJECTIVE, rv)
        if adj is not None:
            part = _strip_aja(adj, _PARTICIPLE_AJA, rv)
            if part is None:
                part = _strip(adj, _PARTICIPLE, rv)
            out = part if part is not None else adj
        else:
            out = _strip_aja(w, _VERB_AJA, rv)
            if out is None:
                out = _strip(w, _VERB, rv)
            if out is None:
                out = _strip(w, _NOUN, rv)
            if out is None:
                out = w

    # Step 2: trailing 'и'.
    if out.endswith("и") and len(out) - 1 >= rv:
        out = out[:-1]

    # Step 3: derivational suffix, only inside R2.
    for suf in ("ость", "ост"):
        if out.endswith(suf) and len(out) - len(suf) >= r2:
            out = out[: -len(suf)]
            break

    # Step 4: undouble 'нн', drop superlative, drop soft sign.
    if out.endswith("нн") and len(out) - 2 >= rv:
        out = out[:-1]
    else:
        sup = _strip(out, _SUPERLATIVE, rv)
        if sup is not None:
            out = sup
            if out.endswith("нн") and len(out) - 2 >= rv:
                out = out[:-1]
    if out.endswith("ь") and len(out) - 1 >= rv:
        out = out[:-1]
    return out


def _is_cyrillic_word(word: str) -> bool:
    return all("а" <= ch <= "я" or ch == "ё" for ch in word)


@lru_cache(maxsize=200_000)
def stem_ru(word: str) -> str:
    """Stem a single Russian word to its fixpoint form.

    Lowercases and folds 'ё' to 'е' first. The result is idempotent:
    ``stem_ru(stem_ru(w)) == stem_ru(w)`` for every input.
    """
    w = word.lower().replace("ё", "е")
    if not w or not _is_cyrillic_word(w):
        return w
    while True:
        nxt = _stem_once(w)
        if nxt == w:
            return w
        w = nxt
