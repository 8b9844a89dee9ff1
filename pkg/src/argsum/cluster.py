"""Clustering-based summarization and direct end-to-end generation.

Arguments are agglomerated bottom-up on their pairwise match scores
(average linkage); clusters below the minimum size count as unclustered
and take no part in summarization or matching. One prompt summarizes all
clusters at once, and a separate path turns a whole argument set into a
summary set in a single completion.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from argsum.clf import match_arguments
from argsum.core.types import Argument, KeyPoint, Provenance, SummarySet, TopicStance
from argsum.errors import DataFormatError, ParseFailure, ValidationError
from argsum.kernels import linkage_merge_labels
from argsum.llm.client import ChatBackend, LlmParams, complete
from argsum.llm.parsing import parse_cluster_keypoints, parse_keypoints
from argsum.llm.prompts import (
    DEFAULT_END_TO_END_RANGE,
    DEFAULT_KP_TOKEN_LENGTH,
    cluster_summaries_spec,
    end_to_end_spec,
    render_prompt,
)
from argsum.scorers import ScorerBackend, match_matrix

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClusterConfig:
    m: float = 0.5
    c: int = 3

    def __post_init__(self) -> None:
        if not (0.0 <= self.m <= 1.0):
            raise ValidationError("merge threshold m must lie in [0, 1]")
        if self.c < 1:
            raise ValidationError("minimum cluster size c must be >= 1")


@dataclass(frozen=True)
class Clustering:
    clusters: tuple[tuple[str, ...], ...]
    unclustered: tuple[str, ...]

    def __post_init__(self) -> None:
        ids = [i for cl in self.clusters for i in cl] + list(self.unclustered)
        if len(ids) != len(set(ids)):
            raise ValidationError("clustering assigns an argument twice")
        if any(len(cl) == 0 for cl in self.clusters):
            raise ValidationError("clustering contains an empty cluster")

    def all_ids(self) -> set[str]:
        return {i for cl in self.clusters for i in cl} | set(self.unclustered)


def agglomerate(
    args: Sequence[Argument], cfg: ClusterConfig, scorer: ScorerBackend
) -> Clustering:
    """Average-linkage agglomeration over symmetrized pairwise match scores.

    Merging continues while the best pair's linkage exceeds m; groups
    smaller than c end up unclustered. Arguments are indexed in id order,
    so the result does not depend on input ordering.
    """
    if not args:
        raise ValidationError("cannot cluster an empty argument list")
    ts = args[0].topic_stance
    for a in args:
        if a.topic_stance != ts:
            raise ValidationError("all arguments must share one topic and stance")
    ordered = sorted(args, key=lambda a: a.id)
    if len(ordered) == 1:
        only = (ordered[0].id,)
        if cfg.c <= 1:
            return Clustering(clusters=(only,), unclustered=())
        return Clustering(clusters=(), unclustered=only)
    texts = [a.text for a in ordered]
    directed = match_matrix(scorer, texts, texts)
    sym = (directed + directed.T) / 2.0
    labels = linkage_merge_labels(sym, cfg.m)

    groups: dict[int, list[str]] = {}
    for idx, a in enumerate(ordered):
        groups.setdefault(int(labels[idx]), []).append(a.id)
    clusters: list[tuple[str, ...]] = []
    unclustered: list[str] = []
    for slot in sorted(groups):
        members = groups[slot]
        if len(members) >= cfg.c:
            clusters.append(tuple(members))
        else:
            unclustered.extend(members)
    return Clustering(clusters=tuple(clusters), unclustered=tuple(sorted(unclustered)))


def summarize_clusters(
    clustering: Clustering,
    args: Sequence[Argument],
    topic_stance: TopicStance,
    params: LlmParams,
    backend: ChatBackend,
    kp_token_length: int = DEFAULT_KP_TOKEN_LENGTH,
) -> SummarySet:
    """One completion summarizing every cluster; one key point per cluster."""
    if not clustering.clusters:
        raise ValidationError("no clusters to summarize")
    by_id = {a.id: a for a in args}
    missing_args = clustering.all_ids() - set(by_id)
    if missing_args:
        raise ValidationError(f"clustering references unknown arguments: {sorted(missing_args)}")
    cluster_texts = {
        cid: [by_id[i].text for i in members]
        for cid, members in enumerate(clustering.clusters)
    }
    spec = cluster_summaries_spec(topic_stance, cluster_texts, kp_token_length=kp_token_length)
    system, user = render_prompt(spec)
    ids = list(cluster_texts)
    last_error: Exception | None = None
    for attempt in range(params.retries + 1):
        transcript = complete(
            backend, system, user, params, tag=None if attempt == 0 else f"retry{attempt}"
        )
        try:
            mapping, missing = parse_cluster_keypoints(transcript.raw_text, ids)
            if missing:
                raise ParseFailure(
                    f"transcript is missing key points for clusters {missing}"
                )
            texts = [mapping[cid] for cid in ids]
            if len({" ".join(t.split()) for t in texts}) != len(texts):
                raise ParseFailure("duplicate key point texts across clusters")
            break
        except ParseFailure as exc:
            last_error = exc
    else:
        raise ParseFailure(f"cluster summarization failed after retries: {last_error}")

    summaries = tuple(
        KeyPoint(id=f"kp{cid}", text=mapping[cid], topic_stance=topic_stance) for cid in ids
    )
    matches = {
        member: f"kp{cid}"
        for cid, members in enumerate(clustering.clusters)
        for member in members
    }
    return SummarySet(
        topic_stance=topic_stance,
        summaries=summaries,
        provenance=Provenance.MCARGSUM,
        matches=matches,
    )


def run_mcargsum(
    args: Sequence[Argument],
    cfg: ClusterConfig,
    scorer: ScorerBackend,
    params: LlmParams,
    backend: ChatBackend,
    kp_token_length: int = DEFAULT_KP_TOKEN_LENGTH,
) -> SummarySet:
    clustering = agglomerate(args, cfg, scorer)
    ts = args[0].topic_stance
    if not clustering.clusters:
        log.warning("no cluster reached size %d; returning empty summary set", cfg.c)
        return SummarySet(topic_stance=ts, summaries=(), provenance=Provenance.MCARGSUM)
    return summarize_clusters(clustering, args, ts, params, backend, kp_token_length)


def end_to_end(
    args: Sequence[Argument],
    topic_stance: TopicStance,
    params: LlmParams,
    backend: ChatBackend,
    num_kps: tuple[int, int] = DEFAULT_END_TO_END_RANGE,
    kp_token_length: int = DEFAULT_KP_TOKEN_LENGTH,
    max_num_kps: int | None = None,
    scorer: ScorerBackend | None = None,
) -> SummarySet:
    """Generate the summary set directly from the argument corpus."""
    if not args:
        raise ValidationError("argument list must be non-empty")
    limit = max_num_kps if max_num_kps is not None else (
        num_kps[1] if isinstance(num_kps, tuple) else num_kps
    )
    spec = end_to_end_spec(
        topic_stance,
        [a.text for a in args],
        num_kps=num_kps,
        kp_token_length=kp_token_length,
        max_num_kps=limit,
    )
    system, user = render_prompt(spec)
    last_error: Exception | None = None
    for attempt in range(params.retries + 1):
        transcript = complete(
            backend, system, user, params, tag=None if attempt == 0 else f"retry{attempt}"
        )
        try:
            parsed = parse_keypoints(transcript.raw_text, limit, kp_token_length)
            break
        except ParseFailure as exc:
            last_error = exc
    else:
        raise ParseFailure(f"end-to-end summarization failed after retries: {last_error}")
    if parsed.truncated:
        log.warning("model returned more than %d key points; truncated", limit)

    texts: list[str] = []
    seen: set[str] = set()
    for t in parsed.texts:
        key = " ".join(t.split())
        if key not in seen:
            seen.add(key)
            texts.append(t)
    summaries = tuple(
        KeyPoint(id=f"kp{i}", text=t, topic_stance=topic_stance) for i, t in enumerate(texts)
    )
    ss = SummarySet(
        topic_stance=topic_stance, summaries=summaries, provenance=Provenance.END_TO_END
    )
    if scorer is not None and summaries:
        ss = match_arguments(args, ss, scorer)
    return ss


# --- clustering artifact IO ---------------------------------------------------

def clustering_to_json(clustering: Clustering) -> dict:
    return {
        "clusters": [list(cl) for cl in clustering.clusters],
        "unclustered": list(clustering.unclustered),
    }


def clustering_from_json(obj: dict) -> Clustering:
    return Clustering(
        clusters=tuple(tuple(str(i) for i in cl) for cl in obj["clusters"]),
        unclustered=tuple(str(i) for i in obj.get("unclustered", [])),
    )


def save_clustering(clustering: Clustering, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(clustering_to_json(clustering), indent=2, sort_keys=True) + "\n", "utf-8"
    )


def load_clustering(path: str | Path) -> Clustering:
    try:
        obj = json.loads(Path(path).read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path}: malformed JSON ({exc.msg})") from exc
    try:
        return clustering_from_json(obj)
    except (KeyError, TypeError) as exc:
        raise DataFormatError(f"{path}: missing or malformed field ({exc})") from exc
