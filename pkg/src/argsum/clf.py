"""Classification-based summarization: candidate selection, ranking by match
counts or graph importance, redundancy removal, and argument matching.

Two selection styles exist: a max-token-threshold variant ranked by match
counts, and a token-range variant ranked by weighted PageRank importance.
Both share the greedy redundancy filter and can draw their candidates from
the source arguments or from a key-point generation prompt.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, replace
from math import ceil
from typing import Sequence

import numpy as np

from argsum.core.text import count_tokens, split_sentences, starts_with_pronoun
from argsum.core.types import Argument, KeyPoint, Provenance, SummarySet, TopicStance
from argsum.errors import ParseFailure, ValidationError
from argsum.kernels import pagerank_scores
from argsum.llm.client import ChatBackend, LlmParams, complete
from argsum.llm.parsing import parse_keypoints
from argsum.llm.prompts import DEFAULT_CANDIDATES_RANGE, candidates_spec, render_prompt
from argsum.scorers import ScorerBackend, match_matrix, quality_scores

log = logging.getLogger(__name__)


class CandidateOrigin(enum.Enum):
    SOURCE_ARGUMENT = "source_argument"
    LLM_GENERATED = "llm_generated"


class CandidateSource(enum.Enum):
    FILTERED = "filtered"
    LLM_GENERATED = "llm_generated"


@dataclass(frozen=True)
class ClfConfig:
    n: int = 30
    n_min: int = 3
    n_max: int = 30
    t_q: float = 0.5
    t_m: float = 0.8
    t_n: float = 0.6
    p_c: float = 0.2
    candidate_source: CandidateSource = CandidateSource.FILTERED
    pagerank_damping: float = 0.85
    pagerank_tol: float = 1e-8
    pagerank_max_iter: int = 10_000

    def __post_init__(self) -> None:
        for name in ("t_q", "t_m", "t_n", "p_c"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValidationError(f"{name} must lie in [0, 1], got {v}")
        if self.n_min > self.n_max:
            raise ValidationError("n_min must not exceed n_max")


@dataclass(frozen=True)
class Candidate:
    text: str
    origin: CandidateOrigin
    quality: float
    match_count: int = 0
    importance: float | None = None

    def __post_init__(self) -> None:
        if not (0.0 <= self.quality <= 1.0):
            raise ValidationError("candidate quality must lie in [0, 1]")
        if self.match_count < 0:
            raise ValidationError("match_count must be >= 0")


def _norm(text: str) -> str:
    return " ".join(text.split())


def _single_topic_stance(args: Sequence[Argument]) -> TopicStance:
    if not args:
        raise ValidationError("argument list must be non-empty")
    ts = args[0].topic_stance
    for a in args[1:]:
        if a.topic_stance != ts:
            raise ValidationError("all arguments must share one topic and stance")
    return ts


def _select_candidates(
    args: Sequence[Argument],
    cfg: ClfConfig,
    scorer: ScorerBackend,
    length_ok,
) -> list[Candidate]:
    """Shared eligibility + quality gate + proportion fill."""
    _single_topic_stance(args)
    eligible: list[Argument] = []
    for a in args:
        if len(split_sentences(a.text)) != 1:
            continue
        if not length_ok(count_tokens(a.text)):
            continue
        if starts_with_pronoun(a.text):
            continue
        eligible.append(a)
    if not eligible:
        log.warning("no eligible candidate arguments (all filtered); returning empty list")
        return []
    quality = dict(zip((a.id for a in eligible), quality_scores(scorer, eligible)))

    passed = [a for a in eligible if quality[a.id] > cfg.t_q]
    failed = [a for a in eligible if quality[a.id] <= cfg.t_q]
    order = lambda a: (-quality[a.id], a.text)  # noqa: E731
    passed.sort(key=order)
    if cfg.p_c > 0 and len(passed) < ceil(cfg.p_c * len(args)):
        # Fill the gap with the best arguments the quality gate rejected;
        # length/pronoun/sentence exclusions are never readmitted.
        need = ceil(cfg.p_c * len(args)) - len(passed)
        failed.sort(key=order)
        passed.extend(failed[:need])

    out: list[Candidate] = []
    seen: set[str] = set()
    for a in passed:
        key = _norm(a.text)
        if key in seen:
            continue
        seen.add(key)
        out.append(
            Candidate(text=a.text, origin=CandidateOrigin.SOURCE_ARGUMENT, quality=quality[a.id])
        )
    return out


def barh_candidates(
    args: Sequence[Argument], cfg: ClfConfig, scorer: ScorerBackend
) -> list[Candidate]:
    """Single-sentence, at most n tokens, not pronoun-initial, quality > t_q."""
    return _select_candidates(args, cfg, scorer, lambda t: t <= cfg.n)


def smtpr_candidates(
    args: Sequence[Argument], cfg: ClfConfig, scorer: ScorerBackend
) -> list[Candidate]:
    """Token range variant; multi-sentence arguments are dropped, not split."""
    return _select_candidates(args, cfg, scorer, lambda t: cfg.n_min <= t <= cfg.n_max)


def llm_candidates(
    args: Sequence[Argument],
    topic_stance: TopicStance,
    params: LlmParams,
    backend: ChatBackend,
    scorer: ScorerBackend,
    num_kps: tuple[int, int] = DEFAULT_CANDIDATES_RANGE,
    kp_token_length: int = 10,
) -> list[Candidate]:
    """Prompt an LLM for candidate key points, quality-scored like arguments."""
    spec = candidates_spec(
        topic_stance, [a.text for a in args], num_kps=num_kps, kp_token_length=kp_token_length
    )
    system, user = render_prompt(spec)
    max_allowed = num_kps[1] if isinstance(num_kps, tuple) else num_kps
    last: ParseFailure | None = None
    for attempt in range(params.retries + 1):
        transcript = complete(
            backend, system, user, params, tag=None if attempt == 0 else f"retry{attempt}"
        )
        try:
            parsed = parse_keypoints(transcript.raw_text, max_allowed, kp_token_length)
            break
        except ParseFailure as exc:
            last = exc
    else:
        raise ParseFailure(f"candidate generation failed after retries: {last}")
    if parsed.over_length:
        log.warning("%d generated candidates exceed %d tokens", len(parsed.over_length), kp_token_length)

    texts: list[str] = []
    seen: set[str] = set()
    for t in parsed.texts:
        key = _norm(t)
        if key not in seen:
            seen.add(key)
            texts.append(t)
    pseudo = [
        Argument(id=f"llm-cand-{i}", text=t, topic_stance=topic_stance)
        for i, t in enumerate(texts)
    ]
    qualities = quality_scores(scorer, pseudo)
    return [
        Candidate(text=t, origin=CandidateOrigin.LLM_GENERATED, quality=q)
        for t, q in zip(texts, qualities)
    ]


def barh_rank(
    candidates: Sequence[Candidate],
    args: Sequence[Argument],
    cfg: ClfConfig,
    scorer: ScorerBackend,
) -> list[Candidate]:
    """Match non-candidate arguments to candidates; rank by match count."""
    if not candidates:
        raise ValidationError("cannot rank an empty candidate list")
    cand_texts = {_norm(c.text) for c in candidates}
    pool = [a for a in args if _norm(a.text) not in cand_texts]
    counts = [0] * len(candidates)
    if pool:
        matrix = match_matrix(scorer, [a.text for a in pool], [c.text for c in candidates])
        for row in matrix:
            counts[int(np.argmax(row))] += 1
    ranked = [replace(c, match_count=k) for c, k in zip(candidates, counts)]
    ranked.sort(key=lambda c: (-c.match_count, -c.quality, c.text))
    return ranked


def graph_rank(
    candidates: Sequence[Candidate], t_n: float, scorer: ScorerBackend, cfg: ClfConfig | None = None
) -> list[Candidate]:
    """Importance ranking on the thresholded match graph.

    Directed match scores are symmetrized by averaging; pairs above t_n
    become edges; importance is the PageRank stationary distribution.
    """
    if not candidates:
        raise ValidationError("cannot rank an empty candidate list")
    cfg = cfg or ClfConfig()
    texts = [c.text for c in candidates]
    directed = match_matrix(scorer, texts, texts)
    sym = (directed + directed.T) / 2.0
    weights = np.where(sym > t_n, sym, 0.0)
    np.fill_diagonal(weights, 0.0)
    scores = pagerank_scores(
        weights,
        damping=cfg.pagerank_damping,
        tol=cfg.pagerank_tol,
        max_iter=cfg.pagerank_max_iter,
    )
    ranked = [replace(c, importance=float(s)) for c, s in zip(candidates, scores)]
    ranked.sort(key=lambda c: (-(c.importance or 0.0), -c.quality, c.text))
    return ranked


def redundancy_filter(
    ranked: Sequence[Candidate],
    t_m: float,
    scorer: ScorerBackend,
    topic_stance: TopicStance,
    provenance: Provenance,
) -> SummarySet:
    """Greedy scan in rank order, dropping anything too close to a kept one."""
    kept: list[Candidate] = []
    for cand in ranked:
        redundant = any(
            scorer.match(cand.text, prior.text) > t_m for prior in kept
        )
        if not redundant:
            kept.append(cand)
    summaries = tuple(
        KeyPoint(id=f"kp{i}", text=c.text, topic_stance=topic_stance)
        for i, c in enumerate(kept)
    )
    return SummarySet(topic_stance=topic_stance, summaries=summaries, provenance=provenance)


def match_arguments(
    args: Sequence[Argument], summary_set: SummarySet, scorer: ScorerBackend
) -> SummarySet:
    """Assign every argument to its best-matching summary (ties: higher rank)."""
    if not args or not summary_set.summaries:
        raise ValidationError("matching requires arguments and summaries")
    matrix = match_matrix(
        scorer, [a.text for a in args], [kp.text for kp in summary_set.summaries]
    )
    matches = {
        a.id: summary_set.summaries[int(np.argmax(row))].id
        for a, row in zip(args, matrix)
    }
    return replace(summary_set, matches=matches)


def run_barh(
    args: Sequence[Argument],
    cfg: ClfConfig,
    scorer: ScorerBackend,
    llm_backend: ChatBackend | None = None,
    params: LlmParams | None = None,
) -> SummarySet:
    ts = _single_topic_stance(args)
    candidates = _pick_candidates(args, ts, cfg, scorer, barh_candidates, llm_backend, params)
    if not candidates:
        return SummarySet(topic_stance=ts, summaries=(), provenance=Provenance.BARH)
    ranked = barh_rank(candidates, args, cfg, scorer)
    ss = redundancy_filter(ranked, cfg.t_m, scorer, ts, Provenance.BARH)
    return match_arguments(args, ss, scorer) if ss.summaries else ss


def run_smtpr(
    args: Sequence[Argument],
    cfg: ClfConfig,
    scorer: ScorerBackend,
    llm_backend: ChatBackend | None = None,
    params: LlmParams | None = None,
) -> SummarySet:
    ts = _single_topic_stance(args)
    candidates = _pick_candidates(args, ts, cfg, scorer, smtpr_candidates, llm_backend, params)
    if not candidates:
        return SummarySet(topic_stance=ts, summaries=(), provenance=Provenance.SMATCHTOPR)
    ranked = graph_rank(candidates, cfg.t_n, scorer, cfg)
    ss = redundancy_filter(ranked, cfg.t_m, scorer, ts, Provenance.SMATCHTOPR)
    return match_arguments(args, ss, scorer) if ss.summaries else ss


def _pick_candidates(args, ts, cfg, scorer, filtered_fn, llm_backend, params):
    if cfg.candidate_source is CandidateSource.LLM_GENERATED:
        if llm_backend is None or params is None:
            raise ValidationError("LLM candidate generation needs a backend and params")
        return llm_candidates(args, ts, params, llm_backend, scorer)
    return filtered_fn(args, cfg, scorer)
