"""Reference-based metrics, judge-prompt scoring, human annotations and the
meta-evaluation correlation machinery.

Set-level metrics compare a candidate summary set A (size n) against a
reference set B (size m):

  soft precision   sP  = mean over a in A of max over b in B of f(a, b)
  soft recall      sR  = mean over b in B of max over a in A of f(a, b)
  soft F1          sF1 = harmonic mean of sP and sR
  coverage score   CS  = fraction of B with some match(a, b) > t_M
  judge coverage   count of covered references / m, averaged over runs
  judge redundancy 1 - (count of unique statements / n), averaged over runs
  weighted score   ws  = alpha * c + (1 - alpha) * (1 - r)

Correlations against human scores run either across all topic-stances
pooled, or within each and averaged.
"""

from __future__ import annotations

import csv
import enum
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from argsum.core.types import Stance, SummarySet, TopicStance
from argsum.errors import (
    ParseFailure,
    ScoreContractError,
    UndefinedCorrelationError,
    ValidationError,
)
from argsum.llm.client import ChatBackend, LlmParams, complete
from argsum.llm.parsing import CountMarker, parse_count
from argsum.llm.prompts import coverage_eval_spec, redundancy_eval_spec, render_prompt
from argsum.scorers import ScorerBackend, match_matrix

log = logging.getLogger(__name__)

DEFAULT_ALPHA = 2.0 / 3.0
DEFAULT_JUDGE_RUNS = 10
DEFAULT_JUDGE_TEMPERATURE = 1.0

SimilarityFn = Callable[[str, str], float]


def similarity_from_scorer(scorer: ScorerBackend) -> SimilarityFn:
    return scorer.match


@dataclass(frozen=True)
class SoftScores:
    sp: float
    sr: float
    sf1: float


def soft_scores(cands: SummarySet, refs: SummarySet, f: SimilarityFn) -> SoftScores:
    """Best-match average similarity in both directions plus harmonic mean.

    Plain Python accumulation keeps results bit-identical to a double-loop
    evaluation of the definitions; summary sets are small.
    """
    a_texts, b_texts = cands.texts, refs.texts
    if not a_texts or not b_texts:
        raise ValidationError("soft scores are undefined for empty summary sets")
    table = {
        (a, b): _checked(f(a, b)) for a in a_texts for b in b_texts
    }
    sp = sum(max(table[(a, b)] for b in b_texts) for a in a_texts) / len(a_texts)
    sr = sum(max(table[(a, b)] for a in a_texts) for b in b_texts) / len(b_texts)
    sf1 = 0.0 if sp + sr == 0 else 2 * sp * sr / (sp + sr)
    return SoftScores(sp=sp, sr=sr, sf1=sf1)


def _checked(value: float) -> float:
    if not (0.0 <= value <= 1.0):
        raise ScoreContractError(f"similarity {value} outside [0, 1]")
    return value


def coverage_score(
    cands: SummarySet, refs: SummarySet, t_m: float, scorer: ScorerBackend
) -> float:
    """Fraction of references matched above t_m by at least one candidate."""
    if not refs.summaries:
        raise ValidationError("coverage score is undefined without references")
    if not cands.summaries:
        return 0.0
    matrix = match_matrix(scorer, cands.texts, refs.texts)
    covered = int(np.count_nonzero((matrix > t_m).any(axis=0)))
    return covered / len(refs.summaries)


@dataclass(frozen=True)
class JudgeResult:
    per_run: tuple[float, ...]
    mean: float
    runs_requested: int
    runs_succeeded: int


def _judge_runs(
    render: tuple[str | None, str],
    params: LlmParams,
    backend: ChatBackend,
    marker: CountMarker,
    cap: int,
    runs: int,
    jobs: int,
    label: str,
) -> JudgeResult:
    system, user = render

    def one_run(index: int) -> float | None:
        for attempt in range(params.retries + 1):
            tag = f"run{index}" if attempt == 0 else f"run{index}.try{attempt}"
            transcript = complete(backend, system, user, params, tag=tag)
            try:
                count = parse_count(transcript.raw_text, marker)
            except ParseFailure as exc:
                log.warning("%s run %d attempt %d unparseable: %s", label, index, attempt, exc)
                continue
            if count > cap:
                log.warning("%s run %d count %.1f clamped to %d", label, index, count, cap)
                count = float(cap)
            return count / cap
        log.warning("%s run %d excluded after %d attempts", label, index, params.retries + 1)
        return None

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            raw = list(pool.map(one_run, range(runs)))
    else:
        raw = [one_run(i) for i in range(runs)]
    values = tuple(v for v in raw if v is not None)
    if not values:
        raise ParseFailure(f"all {runs} {label} runs failed to produce a count")
    return JudgeResult(
        per_run=values,
        mean=sum(values) / len(values),
        runs_requested=runs,
        runs_succeeded=len(values),
    )


def llm_coverage(
    cands: SummarySet,
    refs: SummarySet,
    params: LlmParams,
    backend: ChatBackend,
    runs: int = DEFAULT_JUDGE_RUNS,
    jobs: int = 1,
) -> JudgeResult:
    """Judge-counted covered references, normalized by the reference count."""
    if not refs.summaries:
        raise ValidationError("coverage judging needs a non-empty reference set")
    if not cands.summaries:
        raise ValidationError("coverage judging needs a non-empty candidate set")
    render = render_prompt(coverage_eval_spec(cands.texts, refs.texts))
    return _judge_runs(
        render, params, backend, CountMarker.COVERAGE, len(refs.summaries), runs, jobs,
        "coverage",
    )


def llm_redundancy(
    cands: SummarySet,
    params: LlmParams,
    backend: ChatBackend,
    runs: int = DEFAULT_JUDGE_RUNS,
    jobs: int = 1,
) -> JudgeResult:
    """One minus the judge-counted unique statements over the candidate count."""
    if not cands.summaries:
        raise ValidationError("redundancy judging needs a non-empty candidate set")
    render = render_prompt(redundancy_eval_spec(cands.texts))
    uniqueness = _judge_runs(
        render, params, backend, CountMarker.UNIQUENESS, len(cands.summaries), runs, jobs,
        "redundancy",
    )
    per_run = tuple(1.0 - u for u in uniqueness.per_run)
    return JudgeResult(
        per_run=per_run,
        mean=sum(per_run) / len(per_run),
        runs_requested=uniqueness.runs_requested,
        runs_succeeded=uniqueness.runs_succeeded,
    )


def weighted_score(c: float, r: float, alpha: float = DEFAULT_ALPHA) -> float:
    """Coverage/non-redundancy blend used for model selection."""
    for name, v in (("coverage", c), ("redundancy", r), ("alpha", alpha)):
        if not (0.0 <= v <= 1.0):
            raise ValidationError(f"{name} must lie in [0, 1], got {v}")
    return alpha * c + (1.0 - alpha) * (1.0 - r)


# --- human annotations --------------------------------------------------------

NOT_SURE = -1.0


@dataclass(frozen=True)
class HumanAnnotation:
    annotator: str
    topic_stance: TopicStance
    run_id: str
    coverage_count: float | None  # None encodes a "not sure" (-1) answer
    uniqueness_count: float | None
    num_references: int
    num_generated: int

    def __post_init__(self) -> None:
        if self.num_references <= 0 or self.num_generated <= 0:
            raise ValidationError("annotation needs positive set sizes")
        for name, count, cap in (
            ("coverage_count", self.coverage_count, self.num_references),
            ("uniqueness_count", self.uniqueness_count, self.num_generated),
        ):
            if count is None:
                continue
            if count < 0 or count > cap:
                raise ValidationError(f"{name} {count} outside [0, {cap}]")
            if (count * 2) != int(count * 2):
                raise ValidationError(f"{name} {count} is finer than half points")


def human_scores(ann: HumanAnnotation) -> tuple[float | None, float | None]:
    """(coverage, redundancy) from the counted values; None where not sure."""
    coverage = (
        None if ann.coverage_count is None else ann.coverage_count / ann.num_references
    )
    redundancy = (
        None
        if ann.uniqueness_count is None
        else 1.0 - ann.uniqueness_count / ann.num_generated
    )
    return coverage, redundancy


def load_annotations(path: str | Path) -> list[HumanAnnotation]:
    """Read the annotation CSV; -1 counts become None (not sure)."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            cov = float(row["coverage_count"])
            uni = float(row["uniqueness_count"])
            out.append(
                HumanAnnotation(
                    annotator=row["annotator"],
                    topic_stance=TopicStance(
                        topic=row["topic"], stance=Stance.from_value(int(row["stance"]))
                    ),
                    run_id=row["run_id"],
                    coverage_count=None if cov == NOT_SURE else cov,
                    uniqueness_count=None if uni == NOT_SURE else uni,
                    num_references=int(row["num_references"]),
                    num_generated=int(row["num_generated"]),
                )
            )
    return out


# --- correlations ---------------------------------------------------------------

def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson correlation; zero variance raises instead of NaN."""
    if len(x) != len(y):
        raise ValidationError("pearson needs equally long sequences")
    if len(x) < 2:
        raise UndefinedCorrelationError("pearson needs at least two points")
    ax = np.asarray(x, dtype=np.float64)
    ay = np.asarray(y, dtype=np.float64)
    dx = ax - ax.mean()
    dy = ay - ay.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("pearson is undefined for constant input")
    r = float(dx @ dy) / float(np.sqrt(sxx * syy))
    return max(-1.0, min(1.0, r))


class CorrelationMode(enum.Enum):
    ACROSS = "across"
    WITHIN = "within"


RunKey = tuple[TopicStance, str]


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    std: float | None
    n_groups: int
    skipped_groups: tuple[TopicStance, ...] = ()


def correlate(
    metric_scores: Mapping[RunKey, float],
    human_scores_by_key: Mapping[RunKey, float],
    mode: CorrelationMode,
) -> CorrelationResult:
    """Correlate a metric against human judgments over shared run keys."""
    keys = sorted(
        set(metric_scores) & set(human_scores_by_key),
        key=lambda k: (k[0].topic, int(k[0].stance), k[1]),
    )
    if not keys:
        raise UndefinedCorrelationError("no overlapping (topic-stance, run) keys")
    if mode is CorrelationMode.ACROSS:
        r = pearson(
            [metric_scores[k] for k in keys], [human_scores_by_key[k] for k in keys]
        )
        return CorrelationResult(r=r, std=None, n_groups=1)

    groups: dict[TopicStance, list[RunKey]] = {}
    for k in keys:
        groups.setdefault(k[0], []).append(k)
    rs: list[float] = []
    skipped: list[TopicStance] = []
    for ts in sorted(groups, key=lambda t: (t.topic, int(t.stance))):
        members = groups[ts]
        try:
            rs.append(
                pearson(
                    [metric_scores[k] for k in members],
                    [human_scores_by_key[k] for k in members],
                )
            )
        except UndefinedCorrelationError:
            skipped.append(ts)
    if not rs:
        raise UndefinedCorrelationError("no topic-stance group supports a correlation")
    arr = np.asarray(rs)
    return CorrelationResult(
        r=float(arr.mean()),
        std=float(arr.std()),
        n_groups=len(rs),
        skipped_groups=tuple(skipped),
    )


class Dimension(enum.Enum):
    COVERAGE = "coverage"
    REDUNDANCY = "redundancy"


def inter_rater(
    annotations: Sequence[HumanAnnotation], dimension: Dimension
) -> tuple[float, dict[tuple[str, str], float]]:
    """Mean pairwise Pearson between annotators plus the pairwise matrix.

    Each pair is correlated over the items both annotated with a usable
    (not "not sure") score.
    """
    per_annotator: dict[str, dict[RunKey, float]] = {}
    for ann in annotations:
        cov, red = human_scores(ann)
        value = cov if dimension is Dimension.COVERAGE else red
        if value is None:
            continue
        per_annotator.setdefault(ann.annotator, {})[(ann.topic_stance, ann.run_id)] = value
    names = sorted(per_annotator)
    if len(names) < 2:
        raise ValidationError("inter-rater reliability needs at least two annotators")
    matrix: dict[tuple[str, str], float] = {}
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            shared = sorted(
                set(per_annotator[a]) & set(per_annotator[b]),
                key=lambda k: (k[0].topic, int(k[0].stance), k[1]),
            )
            if len(shared) < 2:
                continue
            try:
                matrix[(a, b)] = pearson(
                    [per_annotator[a][k] for k in shared],
                    [per_annotator[b][k] for k in shared],
                )
            except UndefinedCorrelationError:
                continue
    if not matrix:
        raise UndefinedCorrelationError("no annotator pair shares enough judgments")
    mean = sum(matrix.values()) / len(matrix)
    return mean, matrix


# --- sweeps ---------------------------------------------------------------------

@dataclass(frozen=True)
class SystemRunScore:
    system: str
    config_index: int
    topic_stance: TopicStance
    coverage: float
    redundancy: float

    def weighted(self, alpha: float = DEFAULT_ALPHA) -> float:
        return weighted_score(self.coverage, self.redundancy, alpha)


@dataclass(frozen=True)
class SweepSelection:
    # (system, topic_stance) -> winning run
    winners: dict[tuple[str, TopicStance], SystemRunScore]
    # system -> mean of per-topic-stance best weighted scores
    system_scores: dict[str, float]
    alpha: float


def sweep_and_select(
    runs: Sequence[SystemRunScore], alpha: float = DEFAULT_ALPHA
) -> SweepSelection:
    """Pick the best config per (system, topic-stance); average the maxima.

    Ties go to the lower config index.
    """
    if not runs:
        raise ValidationError("sweep selection needs at least one run")
    winners: dict[tuple[str, TopicStance], SystemRunScore] = {}
    for run in sorted(runs, key=lambda r: r.config_index):
        key = (run.system, run.topic_stance)
        best = winners.get(key)
        if best is None or run.weighted(alpha) > best.weighted(alpha):
            winners[key] = run
    system_scores: dict[str, float] = {}
    by_system: dict[str, list[float]] = {}
    for (system, _ts), run in winners.items():
        by_system.setdefault(system, []).append(run.weighted(alpha))
    for system, values in by_system.items():
        system_scores[system] = sum(values) / len(values)
    return SweepSelection(winners=winners, system_scores=system_scores, alpha=alpha)


# --- report ---------------------------------------------------------------------

@dataclass
class EvalReport:
    """Per-run metric rows plus any correlation tables, with file writers."""

    rows: list[dict]
    correlations: dict[str, dict] | None = None

    def to_json(self) -> str:
        payload: dict = {"rows": self.rows}
        if self.correlations is not None:
            payload["correlations"] = self.correlations
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), "utf-8")

    def write_csv(self, path: str | Path) -> None:
        if not self.rows:
            Path(path).write_text("", "utf-8")
            return
        fields = sorted({k for row in self.rows for k in row})
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=fields)
            writer.writeheader()
            writer.writerows(self.rows)
