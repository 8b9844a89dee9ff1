import pytest

from argsum.core.types import Stance, TopicStance
from argsum.errors import ValidationError
from argsum.llm.prompts import (
    PromptKind,
    PromptSpec,
    candidates_spec,
    cluster_summaries_spec,
    coverage_eval_spec,
    end_to_end_spec,
    enumerate_lines,
    redundancy_eval_spec,
    render_prompt,
)

UNIFORM_ARGS = [
    "School uniforms keep everyone looking the same and prevent bullying",
    "School uniforms can help parents save money on outfit",
    "It is cheaper for parents to buy school uniforms, which is helpful to parents that are struggling financially",
]

USA_ARGS = [
    "The USA offers freedom to pursue any dream",
    "High levels of freedom and democratic values",
    "Economic opportunity is unmatched anywhere else",
]

ENERGY_REFS = [
    "Renewable energy reduces carbon emissions.",
    "Solar panels provide long-term cost savings.",
    "Wind power is a reliable energy source.",
]

ENERGY_CANDS = [
    "Clean energy cuts emissions dramatically.",
    "Wind turbines deliver stable power.",
]


def _golden(fixtures_dir, name: str) -> str:
    return (fixtures_dir / "goldens" / name).read_text("utf-8")


@pytest.fixture
def uniform_ts():
    return TopicStance("We should abandon the use of school uniform", Stance.CON)


@pytest.fixture
def usa_ts():
    return TopicStance("The USA is a good country to live in", Stance.PRO)


class TestGoldenFidelity:
    def test_candidates(self, fixtures_dir, uniform_ts):
        system, user = render_prompt(candidates_spec(uniform_ts, UNIFORM_ARGS))
        assert system == _golden(fixtures_dir, "candidates_system.txt")
        assert user == _golden(fixtures_dir, "candidates_user.txt")

    def test_end_to_end(self, fixtures_dir, usa_ts):
        system, user = render_prompt(end_to_end_spec(usa_ts, USA_ARGS))
        assert system == _golden(fixtures_dir, "end_to_end_system.txt")
        assert user == _golden(fixtures_dir, "end_to_end_user.txt")

    def test_cluster_summaries(self, fixtures_dir, uniform_ts):
        clusters = {
            0: [
                "School uniforms keep everyone looking the same and prevent bullying",
                "School uniforms help stop bullying because nobody is made to feel inferior",
            ],
            1: ["School uniforms can help parents save money on outfit"],
        }
        system, user = render_prompt(cluster_summaries_spec(uniform_ts, clusters))
        assert system == _golden(fixtures_dir, "cluster_system.txt")
        assert user == _golden(fixtures_dir, "cluster_user.txt")

    def test_coverage_eval(self, fixtures_dir):
        system, user = render_prompt(coverage_eval_spec(ENERGY_CANDS, ENERGY_REFS))
        assert system is None
        assert user == _golden(fixtures_dir, "coverage_user.txt")

    def test_redundancy_eval(self, fixtures_dir):
        cands = ENERGY_CANDS + ["Renewables are cheaper over time."]
        system, user = render_prompt(redundancy_eval_spec(cands))
        assert system is None
        assert user == _golden(fixtures_dir, "redundancy_user.txt")


class TestPromptContracts:
    def test_candidates_contains_exemplar(self, uniform_ts):
        system, _ = render_prompt(candidates_spec(uniform_ts, UNIFORM_ARGS))
        assert "Guns lead to accidental deaths" in system

    def test_coverage_mentions_count_format(self):
        _, user = render_prompt(coverage_eval_spec(ENERGY_CANDS, ENERGY_REFS))
        assert '"Coverage count: x.y"' in user

    def test_coverage_ends_with_candidate_list(self):
        _, user = render_prompt(coverage_eval_spec(ENERGY_CANDS, ENERGY_REFS))
        assert user.endswith(enumerate_lines(ENERGY_CANDS))

    def test_enumeration_format(self):
        assert enumerate_lines(["a", "b", "c"]) == "1. a\n2. b\n3. c"

    def test_rendering_is_pure(self, uniform_ts):
        spec = candidates_spec(uniform_ts, UNIFORM_ARGS)
        assert render_prompt(spec) == render_prompt(spec)

    def test_stance_words(self, uniform_ts, usa_ts):
        _, con_user = render_prompt(candidates_spec(uniform_ts, UNIFORM_ARGS))
        _, pro_user = render_prompt(candidates_spec(usa_ts, USA_ARGS))
        assert "opposing key points" in con_user
        assert "supporting key points" in pro_user

    def test_fixed_num_kps_renders_plain(self, uniform_ts):
        _, user = render_prompt(candidates_spec(uniform_ts, UNIFORM_ARGS, num_kps=15))
        assert "generate 15 short" in user

    def test_missing_fields_rejected(self, uniform_ts):
        with pytest.raises(ValidationError):
            render_prompt(PromptSpec(kind=PromptKind.CANDIDATES))
        with pytest.raises(ValidationError):
            render_prompt(PromptSpec(kind=PromptKind.COVERAGE_EVAL))
        with pytest.raises(ValidationError):
            render_prompt(
                PromptSpec(
                    kind=PromptKind.END_TO_END,
                    topic_stance=uniform_ts,
                    num_kps=(4, 8),
                    arguments=tuple(USA_ARGS),
                    max_num_kps=None,
                )
            )

    def test_kp_token_length_must_be_positive(self):
        with pytest.raises(ValidationError):
            PromptSpec(kind=PromptKind.CANDIDATES, kp_token_length=0)
