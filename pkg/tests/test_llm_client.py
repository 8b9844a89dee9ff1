import pytest

from argsum.errors import LlmTransportError
from argsum.llm.client import (
    ChatRequest,
    FlakyBackend,
    LlmParams,
    MockChatBackend,
    ReplayBackend,
    ReplayStore,
    build_messages,
    complete,
)
from argsum.llm.mock_responder import mock_responder


def _request(user="hello", tag=None):
    return ChatRequest(
        model="mock", messages=build_messages(None, user), temperature=0.0,
        max_tokens=128, tag=tag,
    )


class TestFingerprint:
    def test_stable(self):
        assert _request().fingerprint() == _request().fingerprint()

    def test_sensitive_to_content_and_tag(self):
        assert _request("a").fingerprint() != _request("b").fingerprint()
        assert _request(tag="run1").fingerprint() != _request(tag="run2").fingerprint()


class TestMockBackend:
    def test_canned_by_fingerprint(self):
        fp = _request().fingerprint()
        backend = MockChatBackend(canned={fp: "canned text"})
        params = LlmParams(model="mock", temperature=0.0, max_output_tokens=128)
        first = complete(backend, None, "hello", params)
        second = complete(backend, None, "hello", params)
        assert first.raw_text == second.raw_text == "canned text"
        assert first.fingerprint == fp

    def test_unknown_fingerprint_raises(self):
        backend = MockChatBackend()
        params = LlmParams(retries=0)
        with pytest.raises(LlmTransportError):
            complete(backend, None, "unseen", params)


class TestRetries:
    def test_two_failures_then_success(self, monkeypatch):
        monkeypatch.setattr("argsum.llm.client.time.sleep", lambda s: None)
        inner = MockChatBackend(responder=lambda req: "ok")
        flaky = FlakyBackend(inner, failures=2)
        params = LlmParams(retries=2)
        transcript = complete(flaky, None, "hi", params)
        assert transcript.raw_text == "ok"
        assert inner.calls == 1

    def test_exhausted_retries_raise(self, monkeypatch):
        monkeypatch.setattr("argsum.llm.client.time.sleep", lambda s: None)
        flaky = FlakyBackend(MockChatBackend(responder=lambda req: "ok"), failures=5)
        with pytest.raises(LlmTransportError):
            complete(flaky, None, "hi", LlmParams(retries=1))


class TestReplayStore:
    def test_record_then_replay(self, tmp_path):
        store = ReplayStore(tmp_path / "store")
        live = MockChatBackend(responder=lambda req: f"reply to {req.messages[-1]['content']}")
        recording = ReplayBackend(store, live=live)
        params = LlmParams()
        first = complete(recording, None, "question", params)
        offline = ReplayBackend(store)  # no live backend
        second = complete(offline, None, "question", params)
        assert first.raw_text == second.raw_text
        assert store.fingerprints() == [first.fingerprint]

    def test_miss_without_live_raises(self, tmp_path):
        offline = ReplayBackend(ReplayStore(tmp_path / "store"))
        with pytest.raises(LlmTransportError):
            complete(offline, None, "never recorded", LlmParams(retries=0))


class TestMockResponder:
    def test_generation_prompt_echoes_corpus(self, ts_con):
        from argsum.llm.prompts import candidates_spec, render_prompt

        args = [f"Uniforms help case {i}" for i in range(5)]
        system, user = render_prompt(candidates_spec(ts_con, args))
        req = ChatRequest(
            model="mock", messages=build_messages(system, user), temperature=0.0,
            max_tokens=128,
        )
        text = mock_responder(req)
        assert text.splitlines()[0] == "1. Uniforms help case 0"
        assert len(text.splitlines()) == 5

    def test_coverage_prompt_counts_references(self):
        from argsum.llm.prompts import coverage_eval_spec, render_prompt

        _, user = render_prompt(
            coverage_eval_spec(["cand one", "cand two"], ["r1 text", "r2 text", "r3 text", "r4 text"])
        )
        req = ChatRequest(
            model="mock", messages=build_messages(None, user), temperature=0.0,
            max_tokens=128,
        )
        assert mock_responder(req) == "Coverage count: 2.0"

    def test_redundancy_prompt_counts_candidates(self):
        from argsum.llm.prompts import redundancy_eval_spec, render_prompt

        _, user = render_prompt(redundancy_eval_spec(["a text", "b text", "c text"]))
        req = ChatRequest(
            model="mock", messages=build_messages(None, user), temperature=0.0,
            max_tokens=128,
        )
        assert mock_responder(req) == "Number of Unique Main Statements: 3"

    def test_cluster_prompt_answers_each_cluster(self, ts_con):
        from argsum.llm.prompts import cluster_summaries_spec, render_prompt

        clusters = {0: ["First member text", "Other member"], 1: ["Second cluster head"]}
        system, user = render_prompt(cluster_summaries_spec(ts_con, clusters))
        req = ChatRequest(
            model="mock", messages=build_messages(system, user), temperature=0.0,
            max_tokens=128,
        )
        assert mock_responder(req).splitlines() == [
            "Cluster 0: First member text",
            "Cluster 1: Second cluster head",
        ]
