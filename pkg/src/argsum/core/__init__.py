from argsum.core.datasets import (
    dataset_from_json,
    dataset_to_json,
    load_any_dataset,
    load_argkp21,
    load_dataset,
    load_debate,
    load_summary_set,
    save_dataset,
    save_summary_set,
    summary_set_from_json,
    summary_set_to_json,
)
from argsum.core.preprocess import preprocess
from argsum.core.text import (
    count_tokens,
    load_pronoun_lexicon,
    split_sentences,
    starts_with_pronoun,
)
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

__all__ = [
    "Argument",
    "Dataset",
    "DatasetName",
    "KeyPoint",
    "PreprocessOptions",
    "Provenance",
    "Split",
    "Stance",
    "SummarySet",
    "TopicStance",
    "count_tokens",
    "dataset_from_json",
    "dataset_to_json",
    "load_any_dataset",
    "load_argkp21",
    "load_dataset",
    "load_debate",
    "load_pronoun_lexicon",
    "load_summary_set",
    "preprocess",
    "save_dataset",
    "save_summary_set",
    "split_sentences",
    "starts_with_pronoun",
    "summary_set_from_json",
    "summary_set_to_json",
]
