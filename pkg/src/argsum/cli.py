"""Command-line entry point: summarize, evaluate, meta-eval, sweep.

Every run writes a manifest recording the effective configuration (hashed),
the scorer/LLM backend identities and the replay fingerprints of all chat
requests, so a finished run can be replayed offline from the replay store.
Outputs are written in sorted order and contain no timestamps; two runs
with the same inputs are byte-identical regardless of --jobs.
"""

from __future__ import annotations

import hashlib
import json
import logging
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from pathlib import Path

import click
import yaml

from argsum import evaluation
from argsum.clf import CandidateSource, ClfConfig, run_barh, run_smtpr
from argsum.cluster import ClusterConfig, end_to_end, run_mcargsum
from argsum.core.datasets import (
    load_any_dataset,
    load_dataset,
    load_summary_set,
    save_summary_set,
)
from argsum.core.preprocess import preprocess
from argsum.core.types import Dataset, PreprocessOptions, SummarySet, TopicStance
from argsum.errors import ArgsumError, ValidationError
from argsum.evaluation import (
    CorrelationMode,
    Dimension,
    EvalReport,
    HumanAnnotation,
    SystemRunScore,
    human_scores,
    inter_rater,
    llm_coverage,
    llm_redundancy,
    load_annotations,
    soft_scores,
    sweep_and_select,
    weighted_score,
)
from argsum.llm.client import (
    ChatBackend,
    ChatRequest,
    LlmParams,
    MockChatBackend,
    ReplayBackend,
    ReplayStore,
    openai_backend,
    openrouter_backend,
)
from argsum.llm.mock_responder import mock_responder
from argsum.scorers import build_scorer

log = logging.getLogger(__name__)

SYSTEMS = ("barh", "smtpr", "mcargsum", "e2e")


def load_presets() -> dict:
    raw = resources.files("argsum.data").joinpath("presets.yaml").read_text("utf-8")
    return yaml.safe_load(raw)


class RecordingBackend:
    """Wraps a chat backend and remembers the fingerprints it served."""

    def __init__(self, inner: ChatBackend, label: str) -> None:
        self.inner = inner
        self.label = label
        self._lock = threading.Lock()
        self.fingerprints: set[str] = set()

    def send(self, request: ChatRequest) -> str:
        with self._lock:
            self.fingerprints.add(request.fingerprint())
        return self.inner.send(request)


def _build_llm(kind: str, replay_dir: str | None) -> RecordingBackend:
    if kind == "mock":
        backend: ChatBackend = MockChatBackend(responder=mock_responder)
    elif kind == "openai":
        backend = openai_backend()
    elif kind == "openrouter":
        backend = openrouter_backend()
    elif kind == "replay":
        if not replay_dir:
            raise ValidationError("--llm replay requires --replay-dir")
        backend = ReplayBackend(ReplayStore(replay_dir))
    else:
        raise ValidationError(f"unknown llm backend {kind!r}")
    if replay_dir and kind in ("openai", "openrouter"):
        backend = ReplayBackend(ReplayStore(replay_dir), live=backend)
    return RecordingBackend(backend, label=kind)


def _config_hash(config: dict) -> str:
    payload = json.dumps(config, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _write_manifest(out_dir: Path, config: dict, extras: dict) -> None:
    manifest = {
        "config": config,
        "config_hash": _config_hash(config),
        **extras,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", "utf-8"
    )


def _merge_config(path: str | None, values: dict) -> dict:
    """Config file provides defaults; explicit flags win."""
    if not path:
        return values
    with open(path, encoding="utf-8") as fh:
        file_values = yaml.safe_load(fh) or {}
    merged = dict(values)
    for key, val in file_values.items():
        key = key.replace("-", "_")
        if merged.get(key) is None:
            merged[key] = val
    return merged


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Enable debug logging.")
def main(verbose: bool) -> None:
    """Argument summarization systems and their evaluation."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _summarize_one(
    system: str,
    ts: TopicStance,
    ds: Dataset,
    clf_cfg: ClfConfig,
    cluster_cfg: ClusterConfig,
    scorer,
    llm,
    params: LlmParams,
) -> SummarySet:
    args = ds.arguments_for(ts)
    if system == "barh":
        return run_barh(args, clf_cfg, scorer, llm, params)
    if system == "smtpr":
        return run_smtpr(args, clf_cfg, scorer, llm, params)
    if system == "mcargsum":
        return run_mcargsum(args, cluster_cfg, scorer, params, llm)
    if system == "e2e":
        return end_to_end(args, ts, params, llm, scorer=scorer)
    raise ValidationError(f"unknown system {system!r}")


def _dataset_options(fn):
    fn = click.option("--dataset", required=True, type=click.Path(exists=True))(fn)
    fn = click.option(
        "--dataset-format",
        type=click.Choice(["argkp21", "argkp21-test", "debate", "dataset"]),
        default="dataset",
        show_default=True,
    )(fn)
    fn = click.option("--no-preprocess", is_flag=True, help="Skip filtering/sampling.")(fn)
    fn = click.option("--sample-fraction", type=float, default=1.0, show_default=True)(fn)
    fn = click.option("--seed", type=int, default=0, show_default=True)(fn)
    return fn


def _scorer_options(fn):
    fn = click.option(
        "--scorer",
        type=click.Choice(["mock", "remote", "embedding", "cached"]),
        default="mock",
        show_default=True,
    )(fn)
    fn = click.option("--scorer-url", default=None, help="Scorer service endpoint.")(fn)
    fn = click.option("--scorer-cache", default=None, type=click.Path())(fn)
    return fn


def _llm_options(fn):
    fn = click.option(
        "--llm",
        type=click.Choice(["mock", "openai", "openrouter", "replay"]),
        default="mock",
        show_default=True,
    )(fn)
    fn = click.option("--replay-dir", default=None, type=click.Path())(fn)
    fn = click.option("--model", default="mock", show_default=True)(fn)
    fn = click.option("--temperature", type=float, default=0.0, show_default=True)(fn)
    fn = click.option("--max-output-tokens", type=int, default=2048, show_default=True)(fn)
    fn = click.option("--retries", type=int, default=2, show_default=True)(fn)
    return fn


def _load_and_prepare(dataset, dataset_format, no_preprocess, sample_fraction, seed):
    ds = load_any_dataset(dataset, dataset_format)
    if not no_preprocess:
        opts = PreprocessOptions(
            debate_sample_fraction=sample_fraction, sample_seed=seed
        )
        ds = preprocess(ds, opts)
    return ds


@main.command()
@_dataset_options
@_scorer_options
@_llm_options
@click.option("--system", type=click.Choice(SYSTEMS), required=True)
@click.option(
    "--candidates",
    "candidate_source",
    type=click.Choice(["filtered", "llm"]),
    default="filtered",
    show_default=True,
)
@click.option("--config", "config_file", default=None, type=click.Path(exists=True))
@click.option("--n", type=int, default=None)
@click.option("--n-min", type=int, default=None)
@click.option("--n-max", type=int, default=None)
@click.option("--t-q", type=float, default=None)
@click.option("--t-m", "t_m", type=float, default=None)
@click.option("--t-n", "t_n", type=float, default=None)
@click.option("--p-c", "p_c", type=float, default=None)
@click.option("--cluster-m", type=float, default=None)
@click.option("--cluster-c", type=int, default=None)
@click.option("--out", required=True, type=click.Path())
@click.option("--jobs", type=int, default=1, show_default=True)
def summarize(**kw) -> None:
    """Generate one summary set per topic-stance and write a manifest."""
    _run_summarize(**kw)


def _clf_config(presets: dict, system: str, kw: dict) -> ClfConfig:
    base = dict(presets.get("barh" if system == "barh" else "smtpr", {}))
    merged = {
        "n": kw.get("n"),
        "n_min": kw.get("n_min"),
        "n_max": kw.get("n_max"),
        "t_q": kw.get("t_q"),
        "t_m": kw.get("t_m"),
        "t_n": kw.get("t_n"),
        "p_c": kw.get("p_c"),
    }
    for key, val in merged.items():
        if val is None and key in base:
            merged[key] = base[key]
    merged = {k: v for k, v in merged.items() if v is not None}
    source = (
        CandidateSource.LLM_GENERATED
        if kw.get("candidate_source") == "llm"
        else CandidateSource.FILTERED
    )
    return ClfConfig(candidate_source=source, **merged)


def _run_summarize(**kw) -> None:
    kw = _merge_config(kw.pop("config_file", None), kw)
    presets = load_presets()
    ds = _load_and_prepare(
        kw["dataset"], kw["dataset_format"], kw["no_preprocess"],
        kw["sample_fraction"], kw["seed"],
    )
    system = kw["system"]
    clf_cfg = _clf_config(presets, system, kw)
    cluster_cfg = ClusterConfig(
        m=kw.get("cluster_m") if kw.get("cluster_m") is not None else presets["mcargsum"]["m"],
        c=kw.get("cluster_c") if kw.get("cluster_c") is not None else presets["mcargsum"]["c"],
    )
    scorer = build_scorer(kw["scorer"], kw.get("scorer_url"), kw.get("scorer_cache"))
    llm = _build_llm(kw["llm"], kw.get("replay_dir"))
    params = LlmParams(
        model=kw["model"],
        temperature=kw["temperature"],
        max_output_tokens=kw["max_output_tokens"],
        retries=kw["retries"],
    )

    out_dir = Path(kw["out"])
    (out_dir / "summaries").mkdir(parents=True, exist_ok=True)
    stances = sorted(ds.topic_stances(), key=lambda t: (t.topic, int(t.stance)))

    def job(ts: TopicStance) -> tuple[TopicStance, SummarySet]:
        return ts, _summarize_one(system, ts, ds, clf_cfg, cluster_cfg, scorer, llm, params)

    if kw["jobs"] > 1:
        with ThreadPoolExecutor(max_workers=kw["jobs"]) as pool:
            results = dict(pool.map(job, stances))
    else:
        results = dict(job(ts) for ts in stances)

    outputs = []
    for ts in stances:
        path = out_dir / "summaries" / f"{ts.key}__{system}.json"
        save_summary_set(results[ts], path)
        outputs.append(str(path.relative_to(out_dir)))

    config = {k: v for k, v in sorted(kw.items()) if k not in ("out", "jobs")}
    _write_manifest(
        out_dir,
        config,
        {
            "scorer_backend": scorer.identifier,
            "llm_backend": kw["llm"],
            "replay_fingerprints": sorted(llm.fingerprints),
            "outputs": outputs,
        },
    )
    click.echo(f"wrote {len(outputs)} summary sets to {out_dir}")


def _load_references(path: str) -> dict[TopicStance, SummarySet]:
    from argsum.errors import DataFormatError

    p = Path(path)
    refs: dict[TopicStance, SummarySet] = {}
    if p.is_dir():
        for f in sorted(p.glob("*.json")):
            ss = load_summary_set(f)
            refs[ss.topic_stance] = ss
        return refs
    try:
        obj = json.loads(p.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path}: malformed JSON ({exc.msg})") from exc
    if isinstance(obj, dict) and "arguments" in obj:
        ds = load_dataset(p)
        return dict(ds.references)
    ss = load_summary_set(p)
    return {ss.topic_stance: ss}


def _load_candidates(path: str) -> list[SummarySet]:
    p = Path(path)
    if p.is_dir():
        files = sorted(p.glob("*.json"))
        files = [f for f in files if f.name != "manifest.json"]
        if (p / "summaries").is_dir():
            files = sorted((p / "summaries").glob("*.json"))
        return [load_summary_set(f) for f in files]
    return [load_summary_set(p)]


@main.command()
@_scorer_options
@_llm_options
@click.option("--candidates", "candidates_path", required=True, type=click.Path(exists=True))
@click.option("--references", "references_path", required=True, type=click.Path(exists=True))
@click.option(
    "--metric",
    "metrics",
    multiple=True,
    type=click.Choice(["soft", "cs", "llm-coverage", "llm-redundancy", "weighted"]),
    required=True,
)
@click.option(
    "--similarity",
    type=click.Choice(["mock", "remote", "embedding", "cached"]),
    default=None,
    help="Similarity backend for the soft scores; defaults to --scorer.",
)
@click.option("--t-m", "t_m", type=float, default=0.6, show_default=True)
@click.option("--alpha", type=float, default=evaluation.DEFAULT_ALPHA, show_default=True)
@click.option("--judge-runs", type=int, default=10, show_default=True)
@click.option("--judge-temperature", type=float, default=1.0, show_default=True)
@click.option("--mock-coverage", type=float, default=None, help="Constant judge coverage.")
@click.option("--mock-redundancy", type=float, default=None, help="Constant judge redundancy.")
@click.option("--out", default=None, type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--jobs", type=int, default=1, show_default=True)
def evaluate(**kw) -> None:
    """Score candidate summary sets against references."""
    report = _run_evaluate(**kw)
    if kw["out"]:
        path = Path(kw["out"])
        if kw["fmt"] == "csv":
            report.write_csv(path)
        else:
            report.write_json(path)
        click.echo(f"wrote report to {path}")
    else:
        click.echo(report.to_json() if kw["fmt"] == "json" else _csv_string(report))


def _csv_string(report: EvalReport) -> str:
    import io

    buf = io.StringIO()
    if report.rows:
        import csv as _csv

        fields = sorted({k for row in report.rows for k in row})
        writer = _csv.DictWriter(buf, fieldnames=fields)
        writer.writeheader()
        writer.writerows(report.rows)
    return buf.getvalue()


def _run_evaluate(**kw) -> EvalReport:
    cands = _load_candidates(kw["candidates_path"])
    refs = _load_references(kw["references_path"])
    if not cands:
        raise ValidationError("no candidate summary sets found")
    scorer = build_scorer(kw["scorer"], kw.get("scorer_url"), kw.get("scorer_cache"))
    similarity = (
        scorer
        if kw.get("similarity") in (None, kw["scorer"])
        else build_scorer(kw["similarity"], kw.get("scorer_url"), kw.get("scorer_cache"))
    )
    llm = _build_llm(kw["llm"], kw.get("replay_dir"))
    params = LlmParams(
        model=kw["model"],
        temperature=kw["judge_temperature"],
        max_output_tokens=kw["max_output_tokens"],
        retries=kw["retries"],
    )
    metrics = kw["metrics"]
    rows = []
    for ss in cands:
        if not ss.summaries:
            raise ValidationError(
                f"candidate summary set for {ss.topic_stance.key} is empty"
            )
        ref = refs.get(ss.topic_stance)
        if ref is None:
            raise ValidationError(f"no references for topic-stance {ss.topic_stance.key}")
        row: dict = {
            "topic": ss.topic_stance.topic,
            "stance": int(ss.topic_stance.stance),
            "provenance": ss.provenance.value,
            "n_candidates": len(ss.summaries),
            "n_references": len(ref.summaries),
        }
        coverage = redundancy = None
        if "soft" in metrics:
            scores = soft_scores(ss, ref, similarity.match)
            row.update(soft_precision=scores.sp, soft_recall=scores.sr, soft_f1=scores.sf1)
        if "cs" in metrics:
            row["coverage_score"] = evaluation.coverage_score(ss, ref, kw["t_m"], scorer)
        if "llm-coverage" in metrics or "weighted" in metrics:
            if kw.get("mock_coverage") is not None:
                coverage = kw["mock_coverage"]
                row["llm_coverage"] = coverage
                row["coverage_runs"] = 0
            else:
                result = llm_coverage(ss, ref, params, llm, kw["judge_runs"], kw["jobs"])
                coverage = result.mean
                row["llm_coverage"] = coverage
                row["coverage_runs"] = result.runs_succeeded
        if "llm-redundancy" in metrics or "weighted" in metrics:
            if kw.get("mock_redundancy") is not None:
                redundancy = kw["mock_redundancy"]
                row["llm_redundancy"] = redundancy
                row["redundancy_runs"] = 0
            else:
                result = llm_redundancy(ss, params, llm, kw["judge_runs"], kw["jobs"])
                redundancy = result.mean
                row["llm_redundancy"] = redundancy
                row["redundancy_runs"] = result.runs_succeeded
        if "weighted" in metrics:
            row["weighted"] = weighted_score(coverage, redundancy, kw["alpha"])
        rows.append(row)
    rows.sort(key=lambda r: (r["topic"], r["stance"]))
    return EvalReport(rows=rows)


@main.command("meta-eval")
@click.option("--reports", "reports_path", required=True, type=click.Path(exists=True))
@click.option("--annotations", "annotations_path", required=True, type=click.Path(exists=True))
@click.option("--run-column", default="provenance", show_default=True)
@click.option(
    "--metric-column",
    "metric_columns",
    multiple=True,
    help="Report columns to correlate; default: every numeric metric column.",
)
@click.option("--out", default=None, type=click.Path())
def meta_eval(reports_path, annotations_path, run_column, metric_columns, out) -> None:
    """Correlate metric reports with human annotations; report reliability."""
    report = json.loads(Path(reports_path).read_text("utf-8"))
    rows = report["rows"] if isinstance(report, dict) else report
    annotations = load_annotations(annotations_path)
    result = _run_meta_eval(rows, annotations, run_column, metric_columns)
    text = json.dumps(result, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, "utf-8")
        click.echo(f"wrote correlation tables to {out}")
    else:
        click.echo(text)


def _mean_human_scores(
    annotations: list[HumanAnnotation], dimension: Dimension
) -> dict[tuple[TopicStance, str], float]:
    """Average usable annotator scores per (topic-stance, run) item."""
    sums: dict[tuple[TopicStance, str], list[float]] = {}
    for ann in annotations:
        cov, red = human_scores(ann)
        value = cov if dimension is Dimension.COVERAGE else red
        if value is None:
            continue
        sums.setdefault((ann.topic_stance, ann.run_id), []).append(value)
    return {k: sum(v) / len(v) for k, v in sums.items()}


_HUMAN_DIMENSION = {
    "llm_coverage": Dimension.COVERAGE,
    "coverage_score": Dimension.COVERAGE,
    "soft_precision": Dimension.COVERAGE,
    "soft_recall": Dimension.COVERAGE,
    "soft_f1": Dimension.COVERAGE,
    "llm_redundancy": Dimension.REDUNDANCY,
}

_NON_METRIC_COLUMNS = {"topic", "stance", "n_candidates", "n_references",
                       "coverage_runs", "redundancy_runs"}


def _run_meta_eval(rows, annotations, run_column, metric_columns) -> dict:
    from argsum.core.types import Stance

    if not metric_columns:
        metric_columns = sorted(
            {
                k
                for row in rows
                for k, v in row.items()
                if isinstance(v, (int, float)) and k not in _NON_METRIC_COLUMNS
            }
        )
    out: dict = {"metrics": {}}
    for column in metric_columns:
        dimension = _HUMAN_DIMENSION.get(column, Dimension.COVERAGE)
        human = _mean_human_scores(annotations, dimension)
        metric: dict[tuple[TopicStance, str], float] = {}
        for row in rows:
            if column not in row:
                continue
            ts = TopicStance(topic=row["topic"], stance=Stance.from_value(row["stance"]))
            metric[(ts, str(row.get(run_column, "")))] = float(row[column])
        table: dict = {"dimension": dimension.value}
        try:
            across = evaluation.correlate(metric, human, CorrelationMode.ACROSS)
            table["across"] = across.r
        except ArgsumError as exc:
            table["across_error"] = str(exc)
        try:
            within = evaluation.correlate(metric, human, CorrelationMode.WITHIN)
            table["within_mean"] = within.r
            table["within_std"] = within.std
            table["within_groups"] = within.n_groups
        except ArgsumError as exc:
            table["within_error"] = str(exc)
        out["metrics"][column] = table
    for dimension in (Dimension.COVERAGE, Dimension.REDUNDANCY):
        try:
            mean, matrix = inter_rater(annotations, dimension)
            out[f"inter_rater_{dimension.value}"] = {
                "mean": mean,
                "pairs": {f"{a}|{b}": r for (a, b), r in sorted(matrix.items())},
            }
        except ArgsumError as exc:
            out[f"inter_rater_{dimension.value}"] = {"error": str(exc)}
    return out


@main.command()
@_dataset_options
@_scorer_options
@_llm_options
@click.option("--system", type=click.Choice(("mcargsum",)), default="mcargsum",
              show_default=True)
@click.option("--m-start", type=float, default=None)
@click.option("--m-stop", type=float, default=None)
@click.option("--m-step", type=float, default=None)
@click.option("--cluster-c", type=int, default=None)
@click.option("--evaluate/--no-evaluate", "do_evaluate", default=False,
              help="Judge every setting and select the best per topic-stance.")
@click.option("--mock-coverage", type=float, default=None)
@click.option("--mock-redundancy", type=float, default=None)
@click.option("--alpha", type=float, default=evaluation.DEFAULT_ALPHA, show_default=True)
@click.option("--judge-runs", type=int, default=10, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.option("--jobs", type=int, default=1, show_default=True)
def sweep(**kw) -> None:
    """Run a threshold grid, one summary set per setting per topic-stance."""
    presets = load_presets()
    grid_cfg = presets["sweeps"]["mcargsum_m"]
    start = kw["m_start"] if kw["m_start"] is not None else grid_cfg["start"]
    stop = kw["m_stop"] if kw["m_stop"] is not None else grid_cfg["stop"]
    step = kw["m_step"] if kw["m_step"] is not None else grid_cfg["step"]
    c = kw["cluster_c"] if kw["cluster_c"] is not None else presets["mcargsum"]["c"]
    grid = []
    k = 0
    while True:
        value = round(start + k * step, 10)
        if value > stop + 1e-9:
            break
        grid.append(value)
        k += 1

    ds = _load_and_prepare(
        kw["dataset"], kw["dataset_format"], kw["no_preprocess"],
        kw["sample_fraction"], kw["seed"],
    )
    scorer = build_scorer(kw["scorer"], kw.get("scorer_url"), kw.get("scorer_cache"))
    llm = _build_llm(kw["llm"], kw.get("replay_dir"))
    params = LlmParams(
        model=kw["model"], temperature=kw["temperature"],
        max_output_tokens=kw["max_output_tokens"], retries=kw["retries"],
    )
    out_dir = Path(kw["out"])
    (out_dir / "summaries").mkdir(parents=True, exist_ok=True)
    stances = sorted(ds.topic_stances(), key=lambda t: (t.topic, int(t.stance)))

    def job(task: tuple[int, float, TopicStance]):
        index, m, ts = task
        cfg = ClusterConfig(m=m, c=c)
        ss = run_mcargsum(ds.arguments_for(ts), cfg, scorer, params, llm)
        return task, ss

    tasks = [(i, m, ts) for i, m in enumerate(grid) for ts in stances]
    if kw["jobs"] > 1:
        with ThreadPoolExecutor(max_workers=kw["jobs"]) as pool:
            results = dict(pool.map(job, tasks))
    else:
        results = dict(job(t) for t in tasks)

    outputs = []
    run_scores: list[SystemRunScore] = []
    for task in tasks:
        index, m, ts = task
        ss = results[task]
        path = out_dir / "summaries" / f"{ts.key}__mcargsum__m{index:03d}.json"
        save_summary_set(ss, path)
        outputs.append(str(path.relative_to(out_dir)))
        if kw["do_evaluate"] and ss.summaries:
            refs = ds.references.get(ts)
            if refs is None or not refs.summaries:
                continue
            if kw.get("mock_coverage") is not None:
                coverage = kw["mock_coverage"]
            else:
                coverage = llm_coverage(ss, refs, params, llm, kw["judge_runs"]).mean
            if kw.get("mock_redundancy") is not None:
                redundancy = kw["mock_redundancy"]
            else:
                redundancy = llm_redundancy(ss, params, llm, kw["judge_runs"]).mean
            run_scores.append(
                SystemRunScore(
                    system="mcargsum", config_index=index, topic_stance=ts,
                    coverage=coverage, redundancy=redundancy,
                )
            )

    extras = {
        "scorer_backend": scorer.identifier,
        "llm_backend": kw["llm"],
        "replay_fingerprints": sorted(llm.fingerprints),
        "outputs": outputs,
        "grid": {"m": grid, "c": c},
    }
    if run_scores:
        selection = sweep_and_select(run_scores, kw["alpha"])
        extras["selection"] = {
            "system_scores": dict(sorted(selection.system_scores.items())),
            "winners": [
                {
                    "system": run.system,
                    "topic": ts.topic,
                    "stance": int(ts.stance),
                    "config_index": run.config_index,
                    "m": grid[run.config_index],
                    "weighted": run.weighted(kw["alpha"]),
                }
                for (sysname, ts), run in sorted(
                    selection.winners.items(),
                    key=lambda kv: (kv[0][0], kv[0][1].topic, int(kv[0][1].stance)),
                )
            ],
        }
    config = {k: v for k, v in sorted(kw.items()) if k not in ("out", "jobs")}
    _write_manifest(out_dir, config, extras)
    click.echo(f"wrote {len(outputs)} summary sets to {out_dir}")


def entrypoint() -> None:  # pragma: no cover - thin wrapper
    try:
        main(standalone_mode=True)
    except ArgsumError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    entrypoint()
