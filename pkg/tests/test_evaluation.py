import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from argsum.core.types import Provenance, Stance, TopicStance
from argsum.errors import (
    ParseFailure,
    ScoreContractError,
    UndefinedCorrelationError,
    ValidationError,
)
from argsum.evaluation import (
    CorrelationMode,
    Dimension,
    HumanAnnotation,
    SystemRunScore,
    correlate,
    coverage_score,
    human_scores,
    inter_rater,
    llm_coverage,
    llm_redundancy,
    load_annotations,
    pearson,
    soft_scores,
    sweep_and_select,
    weighted_score,
)
from argsum.llm.client import LlmParams, MockChatBackend
from tests.conftest import FIXTURES, make_summary_set
from tests.test_clf import FixedScorer


@pytest.fixture
def ts():
    return TopicStance("We should abandon the use of school uniform", Stance.CON)


def table_fn(table):
    return lambda a, b: table[(a, b)]


class TestSoftScores:
    def test_identity_sets(self, ts):
        ss = make_summary_set(ts, ["alpha summary", "beta summary"])
        f = lambda a, b: 1.0 if a == b else 0.0  # noqa: E731
        scores = soft_scores(ss, ss, f)
        assert (scores.sp, scores.sr, scores.sf1) == (1.0, 1.0, 1.0)

    def test_hand_example_two_by_one(self, ts):
        cands = make_summary_set(ts, ["candidate one", "candidate two"])
        refs = make_summary_set(ts, ["reference one"])
        table = {
            ("candidate one", "reference one"): 0.8,
            ("candidate two", "reference one"): 0.4,
        }
        scores = soft_scores(cands, refs, table_fn(table))
        assert scores.sp == pytest.approx(0.6)
        assert scores.sr == 0.8
        assert scores.sf1 == pytest.approx(0.6857142857142858)

    def test_empty_sets_rejected(self, ts):
        filled = make_summary_set(ts, ["one"])
        empty = make_summary_set(ts, [])
        with pytest.raises(ValidationError):
            soft_scores(empty, filled, lambda a, b: 1.0)
        with pytest.raises(ValidationError):
            soft_scores(filled, empty, lambda a, b: 1.0)

    def test_out_of_range_similarity_raises(self, ts):
        one = make_summary_set(ts, ["one"])
        with pytest.raises(ScoreContractError):
            soft_scores(one, one, lambda a, b: 1.5)

    @pytest.mark.parametrize("seed", range(30))
    def test_bruteforce_oracle_bit_equality(self, ts, seed):
        rng = np.random.default_rng(seed)
        n, m = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        a_texts = [f"cand {i}" for i in range(n)]
        b_texts = [f"ref {j}" for j in range(m)]
        table = {
            (a, b): float(rng.uniform(0, 1)) for a in a_texts for b in b_texts
        }
        cands = make_summary_set(ts, a_texts)
        refs = make_summary_set(ts, b_texts, prefix="ref")
        scores = soft_scores(cands, refs, table_fn(table))

        # Brute-force double loop, written independently of the implementation.
        total = 0.0
        for a in a_texts:
            best = -1.0
            for b in b_texts:
                if table[(a, b)] > best:
                    best = table[(a, b)]
            total += best
        sp = total / n
        total = 0.0
        for b in b_texts:
            best = -1.0
            for a in a_texts:
                if table[(a, b)] > best:
                    best = table[(a, b)]
            total += best
        sr = total / m
        sf1 = 0.0 if sp + sr == 0 else 2 * sp * sr / (sp + sr)
        assert scores.sp == sp and scores.sr == sr and scores.sf1 == sf1

    @settings(max_examples=50, deadline=None)
    @given(st.permutations(list(range(5))))
    def test_permutation_invariance(self, perm):
        ts = TopicStance("topic", Stance.PRO)
        a_texts = [f"cand {i}" for i in range(5)]
        b_texts = [f"ref {j}" for j in range(3)]
        rng = np.random.default_rng(99)
        table = {(a, b): float(rng.uniform(0, 1)) for a in a_texts for b in b_texts}
        base = soft_scores(
            make_summary_set(ts, a_texts), make_summary_set(ts, b_texts, prefix="r"),
            table_fn(table),
        )
        shuffled = soft_scores(
            make_summary_set(ts, [a_texts[i] for i in perm]),
            make_summary_set(ts, b_texts, prefix="r"),
            table_fn(table),
        )
        assert shuffled.sp == pytest.approx(base.sp, abs=1e-12)
        assert shuffled.sr == base.sr


class TestCoverageScore:
    def test_all_covered(self, ts):
        cands = make_summary_set(ts, ["c1", "c2"])
        refs = make_summary_set(ts, ["r1", "r2"], prefix="ref")
        scorer = FixedScorer(default=1.0)
        assert coverage_score(cands, refs, 0.5, scorer) == 1.0

    def test_none_covered(self, ts):
        cands = make_summary_set(ts, ["c1"])
        refs = make_summary_set(ts, ["r1", "r2"], prefix="ref")
        scorer = FixedScorer(default=0.1)
        assert coverage_score(cands, refs, 0.5, scorer) == 0.0

    def test_two_of_three_hand_trace(self, ts):
        cands = make_summary_set(ts, ["c1", "c2"])
        refs = make_summary_set(ts, ["r1", "r2", "r3"], prefix="ref")
        match = {
            ("c1", "r1"): 0.9, ("c2", "r1"): 0.1,
            ("c1", "r2"): 0.2, ("c2", "r2"): 0.3,
            ("c1", "r3"): 0.1, ("c2", "r3"): 0.7,
        }
        scorer = FixedScorer(match_by_pair=match)
        assert coverage_score(cands, refs, 0.6, scorer) == pytest.approx(2 / 3)

    def test_strict_inequality_at_boundary(self, ts):
        cands = make_summary_set(ts, ["c1"])
        refs = make_summary_set(ts, ["r1"], prefix="ref")
        scorer = FixedScorer(default=0.6)
        assert coverage_score(cands, refs, 0.6, scorer) == 0.0

    def test_empty_refs_rejected(self, ts):
        cands = make_summary_set(ts, ["c1"])
        with pytest.raises(ValidationError):
            coverage_score(cands, make_summary_set(ts, []), 0.5, FixedScorer())

    @pytest.mark.parametrize("seed", range(10))
    def test_monotone_in_threshold(self, ts, seed):
        rng = np.random.default_rng(seed)
        cands = make_summary_set(ts, [f"c{i}" for i in range(4)])
        refs = make_summary_set(ts, [f"r{j}" for j in range(5)], prefix="ref")
        match = {
            (f"c{i}", f"r{j}"): float(rng.uniform(0, 1))
            for i in range(4) for j in range(5)
        }
        scorer = FixedScorer(match_by_pair=match)
        values = [
            coverage_score(cands, refs, t, scorer) for t in np.linspace(0, 1, 21)
        ]
        assert all(a >= b for a, b in zip(values, values[1:]))


class TestJudgeScores:
    def test_coverage_example_point_eight_seven_five(self, ts):
        cands = make_summary_set(ts, ["c1", "c2"])
        refs = make_summary_set(ts, ["r1", "r2", "r3", "r4"], prefix="ref")
        backend = MockChatBackend(responder=lambda req: "Coverage count: 3.5")
        result = llm_coverage(cands, refs, LlmParams(), backend, runs=1)
        assert result.per_run == (0.875,)

    def test_coverage_clamps_overcount(self, ts):
        cands = make_summary_set(ts, ["c1"])
        refs = make_summary_set(ts, ["r1", "r2", "r3", "r4"], prefix="ref")
        backend = MockChatBackend(responder=lambda req: "Coverage count: 7")
        result = llm_coverage(cands, refs, LlmParams(), backend, runs=1)
        assert result.per_run == (1.0,)

    def test_constant_judge_over_ten_runs(self, ts):
        cands = make_summary_set(ts, ["c1", "c2"])
        refs = make_summary_set(ts, ["r1", "r2", "r3", "r4"], prefix="ref")
        backend = MockChatBackend(responder=lambda req: "Coverage count: 2")
        result = llm_coverage(cands, refs, LlmParams(), backend, runs=10)
        assert result.mean == 0.5
        assert result.runs_succeeded == result.runs_requested == 10
        assert len(set(result.per_run)) == 1

    def test_redundancy_half(self, ts):
        cands = make_summary_set(ts, [f"c{i}" for i in range(8)])
        backend = MockChatBackend(responder=lambda req: "Number of Unique Main Statements: 4")
        result = llm_redundancy(cands, LlmParams(), backend, runs=1)
        assert result.per_run == (0.5,)

    def test_redundancy_identical_candidates(self, ts):
        n = 5
        cands = make_summary_set(ts, [f"same text {i}" for i in range(n)])
        backend = MockChatBackend(responder=lambda req: "Number of Unique Main Statements: 1")
        result = llm_redundancy(cands, LlmParams(), backend, runs=1)
        assert result.per_run[0] == pytest.approx(1 - 1 / n)

    def test_redundancy_clamp_to_zero(self, ts):
        cands = make_summary_set(ts, [f"c{i}" for i in range(6)])
        backend = MockChatBackend(responder=lambda req: "Number of Unique Main Statements: 10")
        result = llm_redundancy(cands, LlmParams(), backend, runs=1)
        assert result.per_run == (0.0,)

    def test_all_failed_runs_raise(self, ts):
        cands = make_summary_set(ts, ["c1"])
        refs = make_summary_set(ts, ["r1"], prefix="ref")
        backend = MockChatBackend(responder=lambda req: "unparseable response")
        with pytest.raises(ParseFailure):
            llm_coverage(cands, refs, LlmParams(retries=0), backend, runs=3)

    def test_parallel_runs_match_sequential(self, ts):
        cands = make_summary_set(ts, ["c1", "c2"])
        refs = make_summary_set(ts, ["r1", "r2"], prefix="ref")
        backend = MockChatBackend(responder=lambda req: "Coverage count: 1.5")
        seq = llm_coverage(cands, refs, LlmParams(), backend, runs=6, jobs=1)
        par = llm_coverage(cands, refs, LlmParams(), backend, runs=6, jobs=4)
        assert seq == par


class TestWeightedScore:
    def test_paper_rows(self):
        assert weighted_score(0.934, 0.099) == pytest.approx(0.923, abs=0.0005)
        assert weighted_score(0.808, 0.048) == pytest.approx(0.856, abs=0.0005)

    def test_perfect_system(self):
        for alpha in (0.0, 0.3, 2 / 3, 1.0):
            assert weighted_score(1.0, 0.0, alpha) == 1.0

    def test_equal_weight_midpoint(self):
        assert weighted_score(0.9, 0.1, 2 / 3) == pytest.approx(0.9)

    def test_validation(self):
        with pytest.raises(ValidationError):
            weighted_score(1.2, 0.0)
        with pytest.raises(ValidationError):
            weighted_score(0.5, -0.1)
        with pytest.raises(ValidationError):
            weighted_score(0.5, 0.5, alpha=2.0)

    @settings(max_examples=80, deadline=None)
    @given(
        c=st.floats(0, 1), r=st.floats(0, 1),
        dc=st.floats(0, 0.2), dr=st.floats(0, 0.2),
    )
    def test_monotone(self, c, r, dc, dr):
        base = weighted_score(c, r)
        assert weighted_score(min(1.0, c + dc), r) >= base - 1e-12
        assert weighted_score(c, max(0.0, r - dr)) >= base - 1e-12


class TestHumanScores:
    def test_worked_example(self, ts):
        ann = HumanAnnotation(
            annotator="a1", topic_stance=ts, run_id="r1",
            coverage_count=3, uniqueness_count=3.5,
            num_references=4, num_generated=5,
        )
        coverage, redundancy = human_scores(ann)
        assert coverage == 0.75
        assert redundancy == pytest.approx(0.3)

    def test_caps_give_extremes(self, ts):
        ann = HumanAnnotation(
            annotator="a", topic_stance=ts, run_id="r",
            coverage_count=4, uniqueness_count=5,
            num_references=4, num_generated=5,
        )
        assert human_scores(ann) == (1.0, 0.0)

    def test_zero_coverage(self, ts):
        ann = HumanAnnotation(
            annotator="a", topic_stance=ts, run_id="r",
            coverage_count=0, uniqueness_count=2,
            num_references=4, num_generated=5,
        )
        assert human_scores(ann)[0] == 0.0

    def test_not_sure_yields_none(self, ts):
        ann = HumanAnnotation(
            annotator="a", topic_stance=ts, run_id="r",
            coverage_count=None, uniqueness_count=2,
            num_references=4, num_generated=5,
        )
        coverage, redundancy = human_scores(ann)
        assert coverage is None and redundancy is not None

    def test_count_above_cap_rejected(self, ts):
        with pytest.raises(ValidationError):
            HumanAnnotation(
                annotator="a", topic_stance=ts, run_id="r",
                coverage_count=5, uniqueness_count=2,
                num_references=4, num_generated=5,
            )

    def test_csv_loader_parses_not_sure(self):
        annotations = load_annotations(FIXTURES / "annotations.csv")
        assert len(annotations) == 44
        not_sure = [a for a in annotations if a.coverage_count is None]
        assert len(not_sure) == 1
        assert not_sure[0].annotator == "a2"


class TestPearson:
    def test_identity(self):
        assert pearson([1, 2, 3], [1, 2, 3]) == 1.0

    def test_negation(self):
        assert pearson([1, 2, 3], [4, 2, 0]) == -1.0

    def test_hand_computed_value(self):
        assert pearson([1, 2, 3, 5], [2, 1, 4, 5]) == pytest.approx(
            0.8552359741197579, abs=1e-15
        )

    def test_zero_variance_raises(self):
        with pytest.raises(UndefinedCorrelationError):
            pearson([1, 1, 1], [1, 2, 3])

    def test_too_short_raises(self):
        with pytest.raises(UndefinedCorrelationError):
            pearson([1], [2])

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            pearson([1, 2], [1, 2, 3])

    @settings(max_examples=60, deadline=None)
    @given(
        scale_x=st.floats(0.01, 50), shift_x=st.floats(-100, 100),
        scale_y=st.floats(0.01, 50), shift_y=st.floats(-100, 100),
    )
    def test_affine_invariance(self, scale_x, shift_x, scale_y, shift_y):
        x = [1.0, 2.0, 4.0, 8.0, 9.0]
        y = [3.0, 1.0, 4.0, 1.0, 5.0]
        base = pearson(x, y)
        transformed = pearson(
            [scale_x * v + shift_x for v in x],
            [scale_y * v + shift_y for v in y],
        )
        assert transformed == pytest.approx(base, abs=1e-12)


def _keys(topics, runs):
    out = []
    for topic, stance in topics:
        for run in runs:
            out.append((TopicStance(topic, stance), run))
    return out


class TestCorrelate:
    def test_metric_equals_human(self):
        keys = _keys([("T1", Stance.PRO), ("T2", Stance.CON)], ["r1", "r2", "r3"])
        values = {k: float(i) for i, k in enumerate(keys)}
        across = correlate(values, values, CorrelationMode.ACROSS)
        within = correlate(values, values, CorrelationMode.WITHIN)
        assert across.r == 1.0
        assert within.r == 1.0 and within.std == 0.0

    def test_single_group_within_equals_across(self):
        keys = _keys([("T1", Stance.PRO)], ["r1", "r2", "r3", "r4"])
        metric = {k: v for k, v in zip(keys, [0.1, 0.5, 0.3, 0.9])}
        human = {k: v for k, v in zip(keys, [0.2, 0.4, 0.35, 0.8])}
        across = correlate(metric, human, CorrelationMode.ACROSS)
        within = correlate(metric, human, CorrelationMode.WITHIN)
        assert within.r == pytest.approx(across.r)
        assert within.std == 0.0
        assert within.n_groups == 1

    def test_three_group_oracle(self):
        rng = np.random.default_rng(5)
        topics = [("T1", Stance.PRO), ("T2", Stance.CON), ("T3", Stance.PRO)]
        keys = _keys(topics, [f"r{i}" for i in range(5)])
        metric = {k: float(rng.uniform(0, 1)) for k in keys}
        human = {k: float(rng.uniform(0, 1)) for k in keys}
        within = correlate(metric, human, CorrelationMode.WITHIN)

        rs = []
        for topic, stance in topics:
            ts = TopicStance(topic, stance)
            ks = [k for k in keys if k[0] == ts]
            rs.append(pearson([metric[k] for k in ks], [human[k] for k in ks]))
        assert within.r == pytest.approx(float(np.mean(rs)), abs=1e-12)
        assert within.std == pytest.approx(float(np.std(rs)), abs=1e-12)

    def test_degenerate_groups_skipped_and_reported(self):
        good = _keys([("T1", Stance.PRO)], ["r1", "r2", "r3"])
        bad = _keys([("T2", Stance.CON)], ["r1"])  # single point: skipped
        metric = {k: v for k, v in zip(good, [0.1, 0.2, 0.9])}
        metric.update({k: 0.5 for k in bad})
        human = {k: v for k, v in zip(good, [0.15, 0.3, 0.7])}
        human.update({k: 0.5 for k in bad})
        within = correlate(metric, human, CorrelationMode.WITHIN)
        assert within.n_groups == 1
        assert [ts.topic for ts in within.skipped_groups] == ["T2"]

    def test_no_overlap_raises(self):
        a = {(TopicStance("T1", Stance.PRO), "r1"): 0.5}
        b = {(TopicStance("T2", Stance.PRO), "r1"): 0.5}
        with pytest.raises(UndefinedCorrelationError):
            correlate(a, b, CorrelationMode.ACROSS)


class TestInterRater:
    def test_two_identical_annotators(self, ts):
        anns = []
        for name in ("a1", "a2"):
            for i, cov in enumerate([1, 2, 3]):
                anns.append(
                    HumanAnnotation(
                        annotator=name, topic_stance=ts, run_id=f"r{i}",
                        coverage_count=cov, uniqueness_count=2,
                        num_references=4, num_generated=5,
                    )
                )
        mean, matrix = inter_rater(anns, Dimension.COVERAGE)
        assert mean == 1.0
        assert matrix == {("a1", "a2"): 1.0}

    def test_four_annotator_fixture_against_oracle(self):
        annotations = load_annotations(FIXTURES / "annotations.csv")
        mean, matrix = inter_rater(annotations, Dimension.COVERAGE)
        assert len(matrix) == 6  # 4 choose 2

        # Flat oracle recomputation.
        per = {}
        for ann in annotations:
            if ann.coverage_count is None:
                continue
            per.setdefault(ann.annotator, {})[
                (ann.topic_stance, ann.run_id)
            ] = ann.coverage_count / ann.num_references
        names = sorted(per)
        expected = {}
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                shared = sorted(
                    set(per[a]) & set(per[b]),
                    key=lambda k: (k[0].topic, int(k[0].stance), k[1]),
                )
                xs = [per[a][k] for k in shared]
                ys = [per[b][k] for k in shared]
                mx, my = np.mean(xs), np.mean(ys)
                num = float(np.sum((np.array(xs) - mx) * (np.array(ys) - my)))
                den = math.sqrt(
                    float(np.sum((np.array(xs) - mx) ** 2))
                    * float(np.sum((np.array(ys) - my) ** 2))
                )
                expected[(a, b)] = num / den
        for pair, r in expected.items():
            assert matrix[pair] == pytest.approx(r, abs=1e-12)
        assert mean == pytest.approx(float(np.mean(list(expected.values()))), abs=1e-12)

    def test_partial_annotator_uses_intersection_only(self):
        annotations = load_annotations(FIXTURES / "annotations.csv")
        # a1 covers only T1/T2; any pair with a1 correlates over 8 shared items
        # (minus not-sure exclusions).
        per_a1 = [a for a in annotations if a.annotator == "a1"]
        assert {a.topic_stance.topic for a in per_a1} == {"T1", "T2"}
        mean, matrix = inter_rater(annotations, Dimension.REDUNDANCY)
        assert len(matrix) == 6

    def test_single_annotator_rejected(self, ts):
        ann = HumanAnnotation(
            annotator="solo", topic_stance=ts, run_id="r",
            coverage_count=1, uniqueness_count=1,
            num_references=4, num_generated=5,
        )
        with pytest.raises(ValidationError):
            inter_rater([ann], Dimension.COVERAGE)


class TestSweepSelect:
    def _run(self, system, idx, topic, cov, red):
        return SystemRunScore(
            system=system, config_index=idx,
            topic_stance=TopicStance(topic, Stance.PRO),
            coverage=cov, redundancy=red,
        )

    def test_single_config_identity(self):
        runs = [self._run("s", 0, "T1", 0.8, 0.2)]
        sel = sweep_and_select(runs)
        assert sel.system_scores["s"] == pytest.approx(weighted_score(0.8, 0.2))

    def test_two_configs_picks_better(self):
        runs = [
            self._run("s", 0, "T1", 0.7, 0.2),  # ws = 0.7333
            self._run("s", 1, "T1", 0.9, 0.1),  # ws = 0.9
        ]
        sel = sweep_and_select(runs)
        winner = sel.winners[("s", TopicStance("T1", Stance.PRO))]
        assert winner.config_index == 1
        assert sel.system_scores["s"] == pytest.approx(weighted_score(0.9, 0.1))

    def test_tie_takes_lower_config_index(self):
        runs = [
            self._run("s", 2, "T1", 0.8, 0.2),
            self._run("s", 0, "T1", 0.8, 0.2),
            self._run("s", 1, "T1", 0.8, 0.2),
        ]
        sel = sweep_and_select(runs)
        assert sel.winners[("s", TopicStance("T1", Stance.PRO))].config_index == 0

    def test_max_then_mean_hand_computed(self):
        runs = [
            self._run("s", 0, "T1", 0.6, 0.4),
            self._run("s", 1, "T1", 0.9, 0.3),
            self._run("s", 2, "T1", 0.5, 0.1),
            self._run("s", 0, "T2", 0.4, 0.2),
            self._run("s", 1, "T2", 0.7, 0.5),
            self._run("s", 2, "T2", 0.8, 0.6),
        ]
        sel = sweep_and_select(runs)
        t1_best = max(weighted_score(0.6, 0.4), weighted_score(0.9, 0.3), weighted_score(0.5, 0.1))
        t2_best = max(weighted_score(0.4, 0.2), weighted_score(0.7, 0.5), weighted_score(0.8, 0.6))
        assert sel.system_scores["s"] == pytest.approx((t1_best + t2_best) / 2, abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            sweep_and_select([])
