"""Dataset filtering and per-reference downsampling ahead of summarization."""

from __future__ import annotations

import logging
import random
from dataclasses import replace
from math import ceil

from argsum.core.text import split_sentences
from argsum.core.types import Argument, Dataset, DatasetName, PreprocessOptions

log = logging.getLogger(__name__)


def _sample_per_reference(
    arguments: tuple[Argument, ...], fraction: float, seed: int
) -> tuple[Argument, ...]:
    """Keep ceil(fraction * group size) arguments per unique gold reference.

    Each group is sampled with its own RNG derived from (seed, reference id),
    so the outcome does not depend on dataset ordering. ceil guarantees every
    reference keeps at least one argument.
    """
    groups: dict[str | None, list[Argument]] = {}
    for arg in arguments:
        groups.setdefault(arg.gold_key_point, []).append(arg)
    keep_ids: set[str] = set()
    for gold, group in groups.items():
        if gold is None:
            keep_ids.update(a.id for a in group)
            continue
        k = ceil(fraction * len(group))
        rng = random.Random(f"{seed}:{gold}")
        ordered = sorted(group, key=lambda a: a.id)
        keep_ids.update(a.id for a in rng.sample(ordered, k))
    return tuple(a for a in arguments if a.id in keep_ids)


def preprocess(ds: Dataset, opts: PreprocessOptions) -> Dataset:
    """Apply the gold/sentence filters and, for Debate, stratified sampling.

    Re-applying with identical options is a no-op; the dataset records the
    options it was preprocessed with (resampling an already sampled dataset
    would shrink it again).
    """
    if ds.applied_preprocess == opts:
        return ds

    kept = ds.arguments
    n0 = len(kept)
    if opts.require_exactly_one_gold:
        kept = tuple(a for a in kept if a.gold_key_point is not None)
    if opts.single_sentence_only:
        kept = tuple(a for a in kept if len(split_sentences(a.text)) == 1)
    n_filtered = len(kept)

    if ds.name is DatasetName.DEBATE and opts.debate_sample_fraction < 1.0:
        kept = _sample_per_reference(kept, opts.debate_sample_fraction, opts.sample_seed)

    # Drop references no argument points at any more.
    live_golds = {a.gold_key_point for a in kept if a.gold_key_point is not None}
    references = {}
    for ts, ss in ds.references.items():
        remaining = tuple(kp for kp in ss.summaries if kp.id in live_golds)
        if remaining:
            references[ts] = replace(ss, summaries=remaining)

    log.info("preprocess: %d -> %d (filters) -> %d arguments", n0, n_filtered, len(kept))
    return Dataset(
        name=ds.name,
        arguments=kept,
        references=references,
        split=ds.split,
        applied_preprocess=opts,
    )
