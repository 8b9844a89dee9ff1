"""Domain types: topics, arguments, key points, summary sets and datasets."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from argsum.errors import ValidationError


class Stance(enum.IntEnum):
    PRO = 1
    CON = -1

    @classmethod
    def from_value(cls, value: int) -> "Stance":
        try:
            return cls(int(value))
        except (ValueError, TypeError):
            raise ValidationError(f"stance must be +1 or -1, got {value!r}") from None

    @property
    def word(self) -> str:
        """Stance as the word used inside prompts."""
        return "supporting" if self is Stance.PRO else "opposing"


@dataclass(frozen=True, order=True)
class TopicStance:
    topic: str
    stance: Stance

    def __post_init__(self) -> None:
        if not self.topic.strip():
            raise ValidationError("topic must be non-empty after trimming")

    @property
    def key(self) -> str:
        """Filesystem/report-friendly identifier."""
        slug = "".join(ch if ch.isalnum() else "-" for ch in self.topic.lower())
        while "--" in slug:
            slug = slug.replace("--", "-")
        return f"{slug.strip('-')}__{'pro' if self.stance is Stance.PRO else 'con'}"


@dataclass(frozen=True)
class Argument:
    id: str
    text: str
    topic_stance: TopicStance
    gold_key_point: str | None = None
    label: int | None = None

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValidationError(f"argument {self.id!r} has empty text")
        if self.label is not None and self.label not in (0, 1):
            raise ValidationError(f"argument {self.id!r} label must be 0 or 1")


@dataclass(frozen=True)
class KeyPoint:
    id: str
    text: str
    topic_stance: TopicStance

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValidationError(f"key point {self.id!r} has empty text")


class Provenance(enum.Enum):
    BARH = "BarH"
    SMATCHTOPR = "SMatchToPr"
    MCARGSUM = "MCArgSum"
    END_TO_END = "EndToEnd"
    REFERENCE = "Reference"
    EXTERNAL = "External"


def _normalize_ws(text: str) -> str:
    return " ".join(text.split())


@dataclass(frozen=True)
class SummarySet:
    topic_stance: TopicStance
    summaries: tuple[KeyPoint, ...]
    provenance: Provenance
    matches: dict[str, str] | None = None

    def __post_init__(self) -> None:
        for kp in self.summaries:
            if kp.topic_stance != self.topic_stance:
                raise ValidationError(
                    f"key point {kp.id!r} belongs to a different topic-stance"
                )
        texts = [_normalize_ws(kp.text) for kp in self.summaries]
        if len(set(texts)) != len(texts):
            raise ValidationError("summary set contains duplicate texts")
        if self.matches is not None:
            kp_ids = {kp.id for kp in self.summaries}
            for arg_id, kp_id in self.matches.items():
                if kp_id not in kp_ids:
                    raise ValidationError(
                        f"match for argument {arg_id!r} points at unknown key point {kp_id!r}"
                    )

    @property
    def texts(self) -> list[str]:
        return [kp.text for kp in self.summaries]

    def __len__(self) -> int:
        return len(self.summaries)


class DatasetName(enum.Enum):
    ARGKP21 = "ArgKP21"
    DEBATE = "Debate"
    CUSTOM = "Custom"


class Split(enum.Enum):
    TRAIN = "train"
    DEV = "dev"
    TEST = "test"
    ALL = "all"


@dataclass(frozen=True)
class PreprocessOptions:
    require_exactly_one_gold: bool = True
    single_sentence_only: bool = True
    debate_sample_fraction: float = 1.0
    sample_seed: int = 0

    def __post_init__(self) -> None:
        if not (0.0 < self.debate_sample_fraction <= 1.0):
            raise ValidationError(
                f"sample fraction must lie in (0, 1], got {self.debate_sample_fraction}"
            )


@dataclass(frozen=True)
class Dataset:
    name: DatasetName
    arguments: tuple[Argument, ...]
    references: dict[TopicStance, SummarySet]
    split: Split = Split.ALL
    # Set once preprocess() has run, so a second identical pass is a no-op.
    applied_preprocess: PreprocessOptions | None = None

    def __post_init__(self) -> None:
        for ts, ss in self.references.items():
            if ss.topic_stance != ts:
                raise ValidationError("references map key disagrees with summary set")
        kp_ids = {kp.id for ss in self.references.values() for kp in ss.summaries}
        for arg in self.arguments:
            if arg.gold_key_point is not None and arg.gold_key_point not in kp_ids:
                raise ValidationError(
                    f"argument {arg.id!r} gold key point {arg.gold_key_point!r} "
                    "is not among the references"
                )
            if self.name is not DatasetName.ARGKP21 and arg.label is not None:
                raise ValidationError("label field is only valid for ArgKP21")

    def topic_stances(self) -> list[TopicStance]:
        seen: dict[TopicStance, None] = {}
        for arg in self.arguments:
            seen.setdefault(arg.topic_stance, None)
        return list(seen)

    def arguments_for(self, ts: TopicStance) -> list[Argument]:
        return [a for a in self.arguments if a.topic_stance == ts]

    def with_arguments(self, arguments: tuple[Argument, ...]) -> "Dataset":
        return replace(self, arguments=arguments)
