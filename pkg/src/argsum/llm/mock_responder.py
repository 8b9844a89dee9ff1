"""Rule-based responder backing the CLI's --llm mock backend.

It reads the rendered prompt and answers with well-formed, deterministic
text: generation prompts get numbered key points copied from the corpus,
cluster prompts get one key point per cluster, and judge prompts get a
count derived from the list sizes. Useful for offline runs and for the
byte-determinism tests; it never pretends to judge quality.
"""

from __future__ import annotations

import re

from argsum.llm.client import ChatRequest

_ENUM_LINE = re.compile(r"^(\d+)\.\s+(.*\S)\s*$")
_CLUSTER_HEAD = re.compile(r"^Cluster (\d+):$")
_RANGE = re.compile(r"Please generate (?:a single|(\d+)(?: to (\d+))?)")


def _enumerated_after(text: str, heading: str) -> list[str]:
    """Items of the enumerated list following the last occurrence of heading."""
    idx = text.rfind(heading)
    if idx < 0:
        return []
    items = []
    for line in text[idx + len(heading):].lstrip("\n").splitlines():
        m = _ENUM_LINE.match(line)
        if not m:
            break
        items.append(m.group(2))
    return items


def _half(value: float) -> float:
    return round(value * 2.0) / 2.0


def mock_responder(request: ChatRequest) -> str:
    user = request.messages[-1]["content"]

    if "Coverage count:" in user:
        refs = _enumerated_after(user, "Set of Reference Summaries:")
        value = _half(len(refs) / 2)
        return f"Coverage count: {value:.1f}"

    if "Number of Unique Main Statements:" in user:
        cands = _enumerated_after(user, "Set of Arguments:")
        return f"Number of Unique Main Statements: {len(cands)}"

    if "clusters of similar arguments:" in user:
        start = user.rindex("clusters of similar arguments:")
        block = user[start:]
        # The template continues in running text right after the last member.
        cut = block.find(". Since argument clusters are not perfect")
        if cut >= 0:
            block = block[:cut]
        out = []
        current: int | None = None
        for line in block.splitlines():
            head = _CLUSTER_HEAD.match(line)
            if head:
                current = int(head.group(1))
                continue
            m = _ENUM_LINE.match(line)
            if m and current is not None:
                out.append(f"Cluster {current}: {m.group(2)}")
                current = None
        return "\n".join(out)

    # Candidate / end-to-end generation: echo corpus sentences as key points.
    args = _enumerated_after(user, "corpus of arguments: ")
    if not args:
        args = [line for line in user.splitlines() if _ENUM_LINE.match(line)]
        args = [_ENUM_LINE.match(line).group(2) for line in args]  # type: ignore[union-attr]
    m = _RANGE.search(user)
    limit = len(args)
    if m and m.group(1):
        limit = int(m.group(2) or m.group(1))
    seen: dict[str, None] = {}
    for text in args:
        seen.setdefault(" ".join(text.split()), None)
    picked = list(seen)[:limit]
    return "\n".join(f"{i}. {t}" for i, t in enumerate(picked, start=1))
