"""Prompt construction for key-point generation, cluster summarization and
set-level coverage/uniqueness judging.

The templates are fixed text; rendering only substitutes placeholders and
never rewrites wording, so golden-file tests can assert byte equality.
Argument and summary lists are always rendered as enumerated lines
("1. text"), clusters as "Cluster <id>:" headers over enumerated members.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

from argsum.core.types import TopicStance
from argsum.errors import ValidationError


class PromptKind(enum.Enum):
    CANDIDATES = "candidates"
    END_TO_END = "end_to_end"
    CLUSTER_SUMMARIES = "cluster_summaries"
    COVERAGE_EVAL = "coverage_eval"
    REDUNDANCY_EVAL = "redundancy_eval"


GENERATION_SYSTEM = (
    "You are a professional debater and you can express yourself succinctly. "
    "If you are given a corpus of arguments on a certain debate topic and stance, "
    "you find {num_kps} appropriate salient single sentences, called key points, "
    "summarizing most of the arguments and providing a textual and quantitative "
    "view of the data. A key point can be seen as a meta argument why one is for "
    "or against a certain topic. Make sure that the generated key points "
    "summarize the majority of the arguments contained in the corpus. A key "
    "point should not exceed a length of {kp_token_length} tokens. Here are two "
    'examples of good key points: "School uniform reduces bullying" is an '
    'opposing key point on the topic "We should abandon the use of school '
    'uniform" and "Guns lead to accidental deaths" is a supporting key point on '
    'the topic "We should abolish the right to keep and bear arms".'
)

GENERATION_USER = (
    "Please generate {num_kps} short (maximal length of {kp_token_length} "
    "tokens), salient and high quality {stance} key points on the topic "
    '"{topic}" so that they capture the main statements that are shared between '
    "most of the arguments based on the following corpus of arguments: "
    "{arguments}."
)

END_TO_END_EXTRA_USER = (
    "You should only generate as many key points as necessary to summarize the "
    "arguments contained in the corpus. This means you should preferably "
    "generate fewer key points than the maximum permitted number of "
    "{max_num_kps} key points instead of generating overlapping key points in "
    "terms of content."
)

CLUSTER_SYSTEM = (
    "You are a professional debater and you can express yourself succinctly. "
    "If you are given a cluster of similar arguments on a certain debate topic "
    "and stance, you find a single appropriate salient sentences, called key "
    "point, capturing the main statement that is shared between most of the "
    "clustered arguments and providing a textual and quantitative view of the "
    "data. A key point can be seen as a meta argument why one is for or against "
    "a certain topic. Since argument clusters are not perfect, they may contain "
    "arguments that do not actually belong together. Therefore, make sure that "
    "a generated key point summarizes the majority of the arguments contained "
    "in the cluster. A key point should not exceed a length of "
    "{kp_token_length} tokens. Here are two examples of good key points: "
    '"School uniform reduces bullying" is an opposing key point on the topic '
    '"We should abandon the use of school uniform" and "Guns lead to accidental '
    'deaths" is a supporting key point on the topic "We should abolish the '
    'right to keep and bear arms".'
)

CLUSTER_USER = (
    "Please generate a single short (maximal length of {kp_token_length} "
    "tokens), salient and high quality {stance} key point on the topic "
    '"{topic}" so that it captures the main statement that is shared among most '
    "of the clustered arguments for each of the following {num_clusters} "
    "clusters of similar arguments: {clusters}. Since argument clusters are not "
    "perfect, they may contain arguments that do not actually belong together. "
    "Therefore, make sure that each generated key point summarizes the majority "
    "of the arguments contained in the respective cluster. In addition, ensure "
    "that the generated key points do not overlap in terms of content. Do not "
    "deliver an explanation why you generated the key points or any other "
    "information. Only return the cluster ids and corresponding individual key "
    "points."
)

COVERAGE_USER = """Your task is to evaluate a set of generated summaries obtained from a collection of arguments against a set of reference summaries. The evaluation is conducted according to the criteria of coverage, meaning that the set of generated summaries aims to cover the main statements contained in the set of reference summaries. Since each reference summary addresses a unique main statement, you are asked to count the number of reference summaries that are covered by the set of generated summaries. If a reference summary is only partially covered by the set of generated summaries, an increase of the count by 0.5 is allowed. Your counts aim to correlate well with human judgments.

Make sure to always print the final count in the format "Coverage count: x.y" in a new line with no additional text in that line.

Example:

Set of Reference Summaries:
1. Banning guns would save lives
2. Guns can fall into the wrong hands
3. Guns lead to accidental deaths
4. Gun ownership allows for mass-shootings/general gun violence

Set of Generated Summaries:
1. Banning guns would save thousands of lives
2. Some people do not know how to handle firearms. This is a danger to them and others.
3. Guns kill people, they should be banned
4. Firearms can fall into the hands of potential murderers
5. Firearms are a disgrace to humanity.
6. Without weapons, there would be no war.

Coverage count: 3.5

Evaluation Procedure:
1. Read the reference summaries. Do not print them again.
2. Read the generated summaries. Do not print them again.
3. Go through the set of reference summaries and determine whether the reference summary at hand is covered by at least one generated summary.
4. Once you have done this for each reference summary, count the number of covered reference summaries and return the resulting coverage count.

Evaluation Task:

Set of Reference Summaries:
{reference_summaries}

Set of Generated Summaries:
{candidate_summaries}"""

REDUNDANCY_USER = """Your task is to evaluate a set of arguments on a certain debate topic and stance according to their uniqueness. Since arguments can be formulated differently, but address the same aspect of a debate, your task is to count the number of unique main statements addressed by the set of arguments. If a main statement addressed by an argument is only partially unique because it is also in parts covered by another argument, an increase of the count by 0.5 is allowed. Your counts aim to correlate well with human judgments.

In the following, you are provided with an example, instructions for the evaluation procedure, and finally with your evaluation task.

Example:

Set of Arguments:
1. Banning guns would save lives
2. Guns can fall into the wrong hands
3. Guns lead to accidental deaths
4. Guns kill people, they should be banned
5. Gun ownership allows for mass-shootings/general gun violence
6. Some people do not know how to handle firearms. This is a danger to them and others.
7. Banning guns would save thousands of lives
8. Firearms can fall into the hands of potential murderers

Number of Unique Main Statements: 4

Explanation:
- Argument 1, 4, and 7 address the same main statement (guns kill people so without guns lives could be saved)
- Argument 2, 6, and 8 address the same main statement (guns could fall into the wrong hands, such as murders or people not knowing how to handle guns)
- Argument 3 addresses a unique main statement, focusing on accidents with guns
- Argument 5 addresses a unique main statement, focusing on intentional killing like terrorism or running amok

Notes:
- Arguments 1, 4, and 7 are quite general, and therefore differ from the others
- E.g., argument 3 could also be assigned to 1, 4, and 7. Nevertheless, it focuses on accidents and is more specific

Evaluation Procedure:
1. Read the arguments. Do not print them.
2. Go through the list of arguments, starting with the first argument.
3. Determine whether the argument at hand addresses a main statement of the debate.
4. Move on to the next one and consider whether it addresses a main statement and whether it has already been covered by previous arguments in the list.
5. Once you have done this for each argument, count the total number of unique main statements.
6. Return your uniqueness count in the format "Number of Unique Main Statements: x.y" in a new line with no additional text in that line. Always make this line the last line of your response and always include it.

Evaluation Task:

Set of Arguments:
{candidate_summaries}

Number of Unique Main Statements:"""

DEFAULT_CANDIDATES_RANGE = (12, 20)
DEFAULT_END_TO_END_RANGE = (4, 8)
DEFAULT_KP_TOKEN_LENGTH = 10


def enumerate_lines(texts: Sequence[str]) -> str:
    """Render texts as '1. ...' lines, the list format all prompts share."""
    return "\n".join(f"{i}. {t}" for i, t in enumerate(texts, start=1))


def render_clusters(clusters: Mapping[int, Sequence[str]]) -> str:
    blocks = []
    for cid in sorted(clusters):
        blocks.append(f"Cluster {cid}:\n" + enumerate_lines(clusters[cid]))
    return "\n" + "\n\n".join(blocks)


def _render_num_kps(num_kps: int | tuple[int, int]) -> str:
    if isinstance(num_kps, tuple):
        lo, hi = num_kps
        if lo > hi:
            raise ValidationError(f"invalid key point range {num_kps}")
        return f"{lo} to {hi}"
    return str(num_kps)


@dataclass(frozen=True)
class PromptSpec:
    kind: PromptKind
    topic_stance: TopicStance | None = None
    num_kps: int | tuple[int, int] | None = None
    kp_token_length: int = DEFAULT_KP_TOKEN_LENGTH
    max_num_kps: int | None = None
    arguments: tuple[str, ...] | None = None
    clusters: tuple[tuple[int, tuple[str, ...]], ...] | None = None
    candidate_summaries: tuple[str, ...] | None = None
    reference_summaries: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.kp_token_length <= 0:
            raise ValidationError("kp_token_length must be positive")


def candidates_spec(
    topic_stance: TopicStance,
    arguments: Sequence[str],
    num_kps: int | tuple[int, int] = DEFAULT_CANDIDATES_RANGE,
    kp_token_length: int = DEFAULT_KP_TOKEN_LENGTH,
) -> PromptSpec:
    return PromptSpec(
        kind=PromptKind.CANDIDATES,
        topic_stance=topic_stance,
        num_kps=num_kps,
        kp_token_length=kp_token_length,
        arguments=tuple(arguments),
    )


def end_to_end_spec(
    topic_stance: TopicStance,
    arguments: Sequence[str],
    num_kps: int | tuple[int, int] = DEFAULT_END_TO_END_RANGE,
    kp_token_length: int = DEFAULT_KP_TOKEN_LENGTH,
    max_num_kps: int | None = None,
) -> PromptSpec:
    if max_num_kps is None:
        max_num_kps = num_kps[1] if isinstance(num_kps, tuple) else num_kps
    return PromptSpec(
        kind=PromptKind.END_TO_END,
        topic_stance=topic_stance,
        num_kps=num_kps,
        kp_token_length=kp_token_length,
        max_num_kps=max_num_kps,
        arguments=tuple(arguments),
    )


def cluster_summaries_spec(
    topic_stance: TopicStance,
    clusters: Mapping[int, Sequence[str]],
    kp_token_length: int = DEFAULT_KP_TOKEN_LENGTH,
) -> PromptSpec:
    return PromptSpec(
        kind=PromptKind.CLUSTER_SUMMARIES,
        topic_stance=topic_stance,
        kp_token_length=kp_token_length,
        clusters=tuple((cid, tuple(texts)) for cid, texts in sorted(clusters.items())),
    )


def coverage_eval_spec(
    candidate_summaries: Sequence[str], reference_summaries: Sequence[str]
) -> PromptSpec:
    return PromptSpec(
        kind=PromptKind.COVERAGE_EVAL,
        candidate_summaries=tuple(candidate_summaries),
        reference_summaries=tuple(reference_summaries),
    )


def redundancy_eval_spec(candidate_summaries: Sequence[str]) -> PromptSpec:
    return PromptSpec(
        kind=PromptKind.REDUNDANCY_EVAL,
        candidate_summaries=tuple(candidate_summaries),
    )


def render_prompt(spec: PromptSpec) -> tuple[str | None, str]:
    """Instantiate the template for a spec; returns (system, user).

    Evaluation prompts carry no system message (None).
    """
    kind = spec.kind
    if kind in (PromptKind.CANDIDATES, PromptKind.END_TO_END):
        if spec.topic_stance is None or not spec.arguments or spec.num_kps is None:
            raise ValidationError(f"{kind.value} prompt needs topic, stance and arguments")
        fields = {
            "num_kps": _render_num_kps(spec.num_kps),
            "kp_token_length": spec.kp_token_length,
            "stance": spec.topic_stance.stance.word,
            "topic": spec.topic_stance.topic,
            "arguments": "\n" + enumerate_lines(spec.arguments),
        }
        system = GENERATION_SYSTEM.format(**fields)
        user = GENERATION_USER.format(**fields)
        if kind is PromptKind.END_TO_END:
            if spec.max_num_kps is None:
                raise ValidationError("end-to-end prompt needs max_num_kps")
            user += "\n\n" + END_TO_END_EXTRA_USER.format(max_num_kps=spec.max_num_kps)
        return system, user
    if kind is PromptKind.CLUSTER_SUMMARIES:
        if spec.topic_stance is None or not spec.clusters:
            raise ValidationError("cluster prompt needs topic, stance and clusters")
        clusters = dict(spec.clusters)
        fields = {
            "kp_token_length": spec.kp_token_length,
            "stance": spec.topic_stance.stance.word,
            "topic": spec.topic_stance.topic,
            "num_clusters": len(clusters),
            "clusters": render_clusters(clusters),
        }
        return CLUSTER_SYSTEM.format(**fields), CLUSTER_USER.format(**fields)
    if kind is PromptKind.COVERAGE_EVAL:
        if not spec.candidate_summaries or not spec.reference_summaries:
            raise ValidationError("coverage prompt needs candidates and references")
        return None, COVERAGE_USER.format(
            reference_summaries=enumerate_lines(spec.reference_summaries),
            candidate_summaries=enumerate_lines(spec.candidate_summaries),
        )
    if kind is PromptKind.REDUNDANCY_EVAL:
        if not spec.candidate_summaries:
            raise ValidationError("redundancy prompt needs candidate summaries")
        return None, REDUNDANCY_USER.format(
            candidate_summaries=enumerate_lines(spec.candidate_summaries)
        )
    raise ValidationError(f"unknown prompt kind {kind!r}")
