"""Parsers that turn raw model transcripts into structured payloads.

Models format lists in many ways (numbers, bullets, bold markers, quotes);
the parsers here normalize the common variants and refuse anything they
cannot interpret by raising ParseFailure. They never invent values.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Sequence

from argsum.errors import ParseFailure

_LIST_LINE = re.compile(
    r"""^\s*
        (?:
            [-*•]\s+                  # bullet
          | (?:\(\d{1,3}\)|\d{1,3}[.):])\s* # enumeration: 1.  1)  (1)  1:
        )
        (?P<body>.+?)\s*$""",
    re.VERBOSE,
)

_QUOTE_PAIRS = [('"', '"'), ("'", "'"), ("“", "”"), ("‘", "’")]


def _strip_decorations(text: str) -> str:
    text = text.strip()
    while text.startswith("**") and text.endswith("**") and len(text) > 4:
        text = text[2:-2].strip()
    for opening, closing in _QUOTE_PAIRS:
        if len(text) > 1 and text.startswith(opening) and text.endswith(closing):
            text = text[1:-1].strip()
    return text


def _unwrap_bold(line: str) -> str:
    """Peel a bold wrapper off a whole line so the list regexes can match."""
    s = line.strip()
    if s.startswith("**") and s.endswith("**") and len(s) > 4:
        return s[2:-2].strip()
    return line


@dataclass(frozen=True)
class ParsedKeyPoints:
    texts: tuple[str, ...]
    # Indices of key points whose token count exceeds the permitted length.
    # They are flagged, never trimmed, so the model's wording stays intact.
    over_length: tuple[int, ...]
    truncated: bool


def parse_keypoints(
    raw_text: str, max_allowed: int, kp_token_length: int
) -> ParsedKeyPoints:
    """Extract enumerated or bulleted key points from a transcript."""
    texts: list[str] = []
    for line in raw_text.splitlines():
        m = _LIST_LINE.match(_unwrap_bold(line))
        if not m:
            continue
        body = _strip_decorations(m.group("body"))
        if body:
            texts.append(body)
    if not texts:
        raise ParseFailure("no enumerated or bulleted key points found in transcript")
    truncated = len(texts) > max_allowed
    texts = texts[:max_allowed]
    over = tuple(i for i, t in enumerate(texts) if len(t.split()) > kp_token_length)
    return ParsedKeyPoints(texts=tuple(texts), over_length=over, truncated=truncated)


_CLUSTER_LINE = re.compile(
    r"""^\s*
        (?:\*\*)?\s*
        (?:cluster\s*\#?\s*)?       # optional 'Cluster' prefix
        (?P<id>\d{1,4})\s*
        [:\-–]\s*(?:\*\*)?\s*  # separator, tolerating '**Cluster 0:**'
        (?P<body>.+?)\s*$""",
    re.VERBOSE | re.IGNORECASE,
)


def parse_cluster_keypoints(
    raw_text: str, cluster_ids: Sequence[int]
) -> tuple[dict[int, str], list[int]]:
    """Map cluster ids to their generated key point.

    Returns (mapping, missing ids). Lines naming unknown ids are ignored;
    the first line for an id wins. Raises ParseFailure when no (id, text)
    pair can be recovered at all.
    """
    if not cluster_ids:
        raise ValueError("cluster_ids must be non-empty")
    wanted = set(cluster_ids)
    found: dict[int, str] = {}
    for line in raw_text.splitlines():
        m = _CLUSTER_LINE.match(_unwrap_bold(line))
        if not m:
            continue
        cid = int(m.group("id"))
        body = _strip_decorations(m.group("body"))
        if cid in wanted and body and cid not in found:
            found[cid] = body
    if not found:
        raise ParseFailure("no cluster id / key point pairs found in transcript")
    missing = sorted(wanted - set(found))
    return found, missing


class CountMarker(enum.Enum):
    COVERAGE = "Coverage count"
    UNIQUENESS = "Number of Unique Main Statements"


def parse_count(raw_text: str, marker: CountMarker) -> float:
    """Number following the last occurrence of the marker phrase.

    Counts must be non-negative and on a half-point grid; anything finer
    (or missing) is a ParseFailure, never a guess.
    """
    pattern = re.compile(
        re.escape(marker.value) + r"\s*:?\s*\**\s*(-?\d+(?:\.\d+)?)", re.IGNORECASE
    )
    matches = list(pattern.finditer(raw_text))
    if not matches:
        raise ParseFailure(f"marker {marker.value!r} not found in transcript")
    value = float(matches[-1].group(1))
    if value < 0:
        raise ParseFailure(f"count {value} is negative")
    if (value * 2) != int(value * 2):
        raise ParseFailure(f"count {value} is finer than the half-point grid")
    return value
