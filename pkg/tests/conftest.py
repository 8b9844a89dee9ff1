import json
from pathlib import Path

import pytest

from argsum.core.types import (
    Argument,
    Dataset,
    DatasetName,
    KeyPoint,
    Provenance,
    Split,
    Stance,
    SummarySet,
    TopicStance,
)
from argsum.scorers import MockLexicalScorer

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def mock_scorer() -> MockLexicalScorer:
    return MockLexicalScorer()


@pytest.fixture
def ts_con() -> TopicStance:
    return TopicStance("We should abandon the use of school uniform", Stance.CON)


@pytest.fixture
def ts_pro() -> TopicStance:
    return TopicStance("The USA is a good country to live in", Stance.PRO)


def make_args(ts: TopicStance, texts: list[str], prefix: str = "a") -> list[Argument]:
    return [
        Argument(id=f"{prefix}{i:02d}", text=t, topic_stance=ts)
        for i, t in enumerate(texts)
    ]


def make_summary_set(
    ts: TopicStance,
    texts: list[str],
    provenance: Provenance = Provenance.EXTERNAL,
    prefix: str = "kp",
) -> SummarySet:
    return SummarySet(
        topic_stance=ts,
        summaries=tuple(
            KeyPoint(id=f"{prefix}{i}", text=t, topic_stance=ts) for i, t in enumerate(texts)
        ),
        provenance=provenance,
    )


# Two topics x twenty single-sentence arguments for the end-to-end CLI runs.
_E2E_TOPICS = [
    ("We should abandon the use of school uniform", Stance.CON),
    ("The USA is a good country to live in", Stance.PRO),
]

_E2E_SENTENCE_BANK = [
    "Uniforms keep everyone looking the same and prevent bullying",
    "Uniforms can help parents save money on outfits",
    "Uniforms help stop bullying because nobody is made to feel inferior",
    "Buying uniforms is cheaper for parents that are struggling financially",
    "Uniforms are substantially more affordable than brand clothing",
    "Uniforms foster a sense of community in the school",
    "Uniforms remove visible markers of wealth between students",
    "Uniforms simplify the morning routine for families",
    "Uniforms reduce pressure to wear expensive clothes",
    "Uniforms make it easier to spot intruders on campus",
    "Uniforms level social differences between rich and poor students",
    "Uniforms lower clothing competition among teenagers",
    "Uniforms save parents a lot of shopping time",
    "Uniforms improve discipline during lessons",
    "Uniforms build school pride across all grades",
    "Uniforms prevent gang colors from entering classrooms",
    "Uniforms cut down on dress code disputes with teachers",
    "Uniforms let students focus on learning instead of fashion",
    "Uniforms make class photos look orderly and unified",
    "Uniforms reduce morning arguments between parents and children",
]


def build_e2e_dataset() -> Dataset:
    arguments = []
    references = {}
    for t_index, (topic, stance) in enumerate(_E2E_TOPICS):
        ts = TopicStance(topic, stance)
        kps = [
            KeyPoint(id=f"t{t_index}-ref0", text="Uniforms reduce bullying", topic_stance=ts),
            KeyPoint(id=f"t{t_index}-ref1", text="Uniforms save families money", topic_stance=ts),
        ]
        references[ts] = SummarySet(
            topic_stance=ts, summaries=tuple(kps), provenance=Provenance.REFERENCE
        )
        for i, sentence in enumerate(_E2E_SENTENCE_BANK):
            arguments.append(
                Argument(
                    id=f"t{t_index}-a{i:02d}",
                    text=sentence,
                    topic_stance=ts,
                    gold_key_point=kps[i % 2].id,
                )
            )
    return Dataset(
        name=DatasetName.CUSTOM,
        arguments=tuple(arguments),
        references=references,
        split=Split.ALL,
    )


@pytest.fixture
def e2e_dataset_path(tmp_path: Path) -> Path:
    from argsum.core.datasets import save_dataset

    path = tmp_path / "e2e_dataset.json"
    save_dataset(build_e2e_dataset(), path)
    return path


def load_jsonl(path: Path) -> list[dict]:
    return [
        json.loads(line)
        for line in path.read_text("utf-8").splitlines()
        if line.strip()
    ]
