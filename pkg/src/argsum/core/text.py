"""Sentence counting, token counting and pronoun checks used by the filters.

The sentence splitter is rule based: it breaks after terminal ``. ! ?``
followed by whitespace and an upper-case or digit start, with guards for
common abbreviations, initials and decimal numbers. It is only used to
*count* sentences when filtering arguments, so the bar is predictability,
not linguistic perfection.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

# Words that end with a period without ending a sentence. Deliberately
# excludes ordinary words ("no", "max") even though they have abbreviation
# readings; in argument text the plain reading dominates.
_ABBREVIATIONS = {
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs", "etc",
    "e.g", "i.e", "cf", "al", "inc", "ltd", "co", "corp", "dept",
    "approx", "est", "fig", "figs", "vol",
    "u.s", "u.k", "u.n", "a.m", "p.m",
}

_TERMINAL_RE = re.compile(r"[.!?]+[\"')\]]*")


def _word_before(text: str, idx: int) -> str:
    """Token immediately preceding position idx (punctuation run start)."""
    j = idx
    while j > 0 and not text[j - 1].isspace():
        j -= 1
    return text[j:idx]


def split_sentences(text: str) -> list[str]:
    """Segment text into sentences; concatenation preserves the input."""
    if not text.strip():
        return []
    boundaries: list[int] = []
    for m in _TERMINAL_RE.finditer(text):
        end = m.end()
        # Require whitespace then an upper-case letter or digit to split.
        k = end
        while k < len(text) and text[k].isspace():
            k += 1
        if k == end or k == len(text):
            continue
        nxt = text[k]
        if not (nxt.isupper() or nxt.isdigit()):
            continue
        before = _word_before(text, m.start()).lower().lstrip("\"'([")
        if before in _ABBREVIATIONS:
            continue
        # Single-letter initials such as "J. Smith".
        if len(before) == 1 and before.isalpha() and text[m.start():end] == ".":
            continue
        boundaries.append(end)
    pieces: list[str] = []
    start = 0
    for b in boundaries:
        piece = text[start:b].strip()
        if piece:
            pieces.append(piece)
        start = b
    tail = text[start:].strip()
    if tail:
        pieces.append(tail)
    return pieces


def count_tokens(text: str) -> int:
    """Whitespace token count."""
    return len(text.split())


@lru_cache(maxsize=None)
def _bundled_pronouns() -> frozenset[str]:
    raw = resources.files("argsum.data").joinpath("pronouns.txt").read_text("utf-8")
    return _parse_lexicon(raw)


def _parse_lexicon(raw: str) -> frozenset[str]:
    words = set()
    for line in raw.splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


def load_pronoun_lexicon(path: str | None = None) -> frozenset[str]:
    """The bundled lexicon, or a custom one-word-per-line file."""
    if path is None:
        return _bundled_pronouns()
    with open(path, encoding="utf-8") as fh:
        return _parse_lexicon(fh.read())


def starts_with_pronoun(text: str, lexicon: frozenset[str] | None = None) -> bool:
    """True iff the first token is a pronoun.

    The token is case-folded, stripped of surrounding punctuation, and cut
    at the first apostrophe so contractions like "They're" resolve to "they".
    """
    words = text.split()
    if not words:
        return False
    token = words[0].casefold().strip("\"'.,;:!?()[]")
    token = re.split(r"['’]", token)[0]
    if not token:
        return False
    lex = lexicon if lexicon is not None else _bundled_pronouns()
    return token in lex
