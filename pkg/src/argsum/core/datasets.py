"""Dataset ingestion (JSONL) and the normalized JSON interchange formats.

Both corpora are ingested from line-delimited JSON, one record per line:

ArgKP21 records:
    {"topic": str, "stance": +1|-1, "argument": str, "key_point": str,
     "label": 0|1, "set": "train"|"dev"|"test"}

Debate records:
    {"topic": str, "stance": +1|-1, "argument": str, "summary": str}

Unknown fields are ignored. Datasets and summary sets round-trip through
save_dataset/load_dataset and save_summary_set/load_summary_set.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Iterator

from argsum.core.types import (
    Argument,
    Dataset,
    DatasetName,
    KeyPoint,
    PreprocessOptions,
    Provenance,
    Split,
    Stance,
    SummarySet,
    TopicStance,
)
from argsum.errors import DataFormatError, ValidationError

log = logging.getLogger(__name__)


def _iter_jsonl(path: str | Path) -> Iterator[tuple[int, dict[str, Any]]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise DataFormatError(f"{path}:{lineno}: record is not an object")
            yield lineno, record


def _require(record: dict[str, Any], key: str, path: str | Path, lineno: int) -> Any:
    if key not in record:
        raise DataFormatError(f"{path}:{lineno}: missing field {key!r}")
    return record[key]


def load_argkp21(path: str | Path, split: Split | None = None) -> Dataset:
    """Load argument/key-point pairs, deduplicating arguments.

    One Argument per distinct (topic, stance, argument text). Its gold link
    is set iff exactly one key point is paired with it under label 1; the
    label field records whether it matched any key point at all. References
    are the distinct key points per topic-stance.
    """
    wanted = None if split in (None, Split.ALL) else split.value
    # argument key -> [id, topic_stance, set of gold kp texts]
    arg_rows: dict[tuple[TopicStance, str], dict[str, Any]] = {}
    kp_texts: dict[TopicStance, dict[str, None]] = {}
    n_records = 0
    for lineno, rec in _iter_jsonl(path):
        if wanted is not None and rec.get("set") != wanted:
            continue
        topic = str(_require(rec, "topic", path, lineno))
        stance = Stance.from_value(_require(rec, "stance", path, lineno))
        arg_text = str(_require(rec, "argument", path, lineno))
        kp_text = str(_require(rec, "key_point", path, lineno))
        label = _require(rec, "label", path, lineno)
        if label not in (0, 1):
            raise DataFormatError(f"{path}:{lineno}: label must be 0 or 1, got {label!r}")
        ts = TopicStance(topic=topic, stance=stance)
        n_records += 1
        kp_texts.setdefault(ts, {}).setdefault(kp_text, None)
        key = (ts, arg_text)
        row = arg_rows.setdefault(key, {"golds": set()})
        if label == 1:
            row["golds"].add(kp_text)

    kp_ids: dict[tuple[TopicStance, str], str] = {}
    references: dict[TopicStance, SummarySet] = {}
    for ts, texts in kp_texts.items():
        kps = []
        for i, text in enumerate(texts):
            kp = KeyPoint(id=f"{ts.key}__kp{i}", text=text, topic_stance=ts)
            kp_ids[(ts, text)] = kp.id
            kps.append(kp)
        references[ts] = SummarySet(
            topic_stance=ts, summaries=tuple(kps), provenance=Provenance.REFERENCE
        )

    arguments = []
    for i, ((ts, text), row) in enumerate(arg_rows.items()):
        golds = row["golds"]
        arguments.append(
            Argument(
                id=f"arg{i}",
                text=text,
                topic_stance=ts,
                gold_key_point=kp_ids[(ts, next(iter(golds)))] if len(golds) == 1 else None,
                label=1 if golds else 0,
            )
        )
    log.info(
        "ArgKP21: %d pair records -> %d unique arguments, %d key points",
        n_records, len(arguments), sum(len(s) for s in references.values()),
    )
    return Dataset(
        name=DatasetName.ARGKP21,
        arguments=tuple(arguments),
        references=references,
        split=split or Split.ALL,
    )


def load_debate(path: str | Path) -> Dataset:
    """Load Debate records; every argument carries exactly one gold summary."""
    kp_ids: dict[tuple[TopicStance, str], str] = {}
    kp_order: dict[TopicStance, list[KeyPoint]] = {}
    arguments: list[Argument] = []
    for lineno, rec in _iter_jsonl(path):
        topic = str(_require(rec, "topic", path, lineno))
        stance = Stance.from_value(_require(rec, "stance", path, lineno))
        arg_text = str(_require(rec, "argument", path, lineno))
        summary = str(_require(rec, "summary", path, lineno))
        ts = TopicStance(topic=topic, stance=stance)
        key = (ts, summary)
        if key not in kp_ids:
            kp = KeyPoint(
                id=f"{ts.key}__kp{len(kp_order.setdefault(ts, []))}",
                text=summary,
                topic_stance=ts,
            )
            kp_ids[key] = kp.id
            kp_order.setdefault(ts, []).append(kp)
        arguments.append(
            Argument(
                id=f"arg{len(arguments)}",
                text=arg_text,
                topic_stance=ts,
                gold_key_point=kp_ids[key],
            )
        )
    references = {
        ts: SummarySet(topic_stance=ts, summaries=tuple(kps), provenance=Provenance.REFERENCE)
        for ts, kps in kp_order.items()
    }
    log.info(
        "Debate: %d raw arguments, %d unique summaries",
        len(arguments), sum(len(s) for s in references.values()),
    )
    return Dataset(
        name=DatasetName.DEBATE,
        arguments=tuple(arguments),
        references=references,
        split=Split.ALL,
    )


# --- normalized interchange -------------------------------------------------

def _ts_to_json(ts: TopicStance) -> dict[str, Any]:
    return {"topic": ts.topic, "stance": int(ts.stance)}


def _ts_from_json(obj: dict[str, Any]) -> TopicStance:
    return TopicStance(topic=obj["topic"], stance=Stance.from_value(obj["stance"]))


def summary_set_to_json(ss: SummarySet) -> dict[str, Any]:
    out: dict[str, Any] = {
        "topic": ss.topic_stance.topic,
        "stance": int(ss.topic_stance.stance),
        "provenance": ss.provenance.value,
        "summaries": [{"id": kp.id, "text": kp.text} for kp in ss.summaries],
    }
    if ss.matches is not None:
        out["matches"] = dict(sorted(ss.matches.items()))
    return out


def summary_set_from_json(obj: dict[str, Any]) -> SummarySet:
    ts = _ts_from_json(obj)
    kps = tuple(
        KeyPoint(id=str(rec["id"]), text=str(rec["text"]), topic_stance=ts)
        for rec in obj["summaries"]
    )
    return SummarySet(
        topic_stance=ts,
        summaries=kps,
        provenance=Provenance(obj.get("provenance", "External")),
        matches=dict(obj["matches"]) if "matches" in obj else None,
    )


def save_summary_set(ss: SummarySet, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(summary_set_to_json(ss), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def load_summary_set(path: str | Path) -> SummarySet:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path}: malformed JSON ({exc.msg})") from exc
    try:
        return summary_set_from_json(obj)
    except (KeyError, TypeError) as exc:
        raise DataFormatError(f"{path}: missing or malformed field ({exc})") from exc


def dataset_to_json(ds: Dataset) -> dict[str, Any]:
    obj: dict[str, Any] = {
        "name": ds.name.value,
        "split": ds.split.value,
        "arguments": [
            {
                "id": a.id,
                "text": a.text,
                **_ts_to_json(a.topic_stance),
                **({"gold_key_point": a.gold_key_point} if a.gold_key_point else {}),
                **({"label": a.label} if a.label is not None else {}),
            }
            for a in ds.arguments
        ],
        "references": [summary_set_to_json(ss) for ss in ds.references.values()],
    }
    if ds.applied_preprocess is not None:
        p = ds.applied_preprocess
        obj["applied_preprocess"] = {
            "require_exactly_one_gold": p.require_exactly_one_gold,
            "single_sentence_only": p.single_sentence_only,
            "debate_sample_fraction": p.debate_sample_fraction,
            "sample_seed": p.sample_seed,
        }
    return obj


def dataset_from_json(obj: dict[str, Any]) -> Dataset:
    references = {}
    for rec in obj["references"]:
        ss = summary_set_from_json(rec)
        references[ss.topic_stance] = ss
    arguments = tuple(
        Argument(
            id=str(rec["id"]),
            text=str(rec["text"]),
            topic_stance=_ts_from_json(rec),
            gold_key_point=rec.get("gold_key_point"),
            label=rec.get("label"),
        )
        for rec in obj["arguments"]
    )
    applied = None
    if "applied_preprocess" in obj:
        applied = PreprocessOptions(**obj["applied_preprocess"])
    return Dataset(
        name=DatasetName(obj["name"]),
        arguments=arguments,
        references=references,
        split=Split(obj.get("split", "all")),
        applied_preprocess=applied,
    )


def save_dataset(ds: Dataset, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(dataset_to_json(ds), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_dataset(path: str | Path) -> Dataset:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path}: malformed JSON ({exc.msg})") from exc
    return dataset_from_json(obj)


def load_any_dataset(path: str | Path, fmt: str) -> Dataset:
    """Dispatch on an explicit format name used by the CLI."""
    if fmt == "argkp21":
        return load_argkp21(path)
    if fmt == "argkp21-test":
        return load_argkp21(path, split=Split.TEST)
    if fmt == "debate":
        return load_debate(path)
    if fmt == "dataset":
        return load_dataset(path)
    raise ValidationError(f"unknown dataset format {fmt!r}")
