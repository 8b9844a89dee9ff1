from argsum.llm.client import (
    ChatBackend,
    ChatRequest,
    HttpChatBackend,
    LlmParams,
    LlmTranscript,
    MockChatBackend,
    ReplayBackend,
    ReplayStore,
    build_messages,
    complete,
    openai_backend,
    openrouter_backend,
)
from argsum.llm.mock_responder import mock_responder
from argsum.llm.parsing import (
    CountMarker,
    ParsedKeyPoints,
    parse_cluster_keypoints,
    parse_count,
    parse_keypoints,
)
from argsum.llm.prompts import (
    DEFAULT_CANDIDATES_RANGE,
    DEFAULT_END_TO_END_RANGE,
    DEFAULT_KP_TOKEN_LENGTH,
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

__all__ = [
    "ChatBackend",
    "ChatRequest",
    "CountMarker",
    "DEFAULT_CANDIDATES_RANGE",
    "DEFAULT_END_TO_END_RANGE",
    "DEFAULT_KP_TOKEN_LENGTH",
    "HttpChatBackend",
    "LlmParams",
    "LlmTranscript",
    "MockChatBackend",
    "ParsedKeyPoints",
    "PromptKind",
    "PromptSpec",
    "ReplayBackend",
    "ReplayStore",
    "build_messages",
    "candidates_spec",
    "cluster_summaries_spec",
    "complete",
    "coverage_eval_spec",
    "end_to_end_spec",
    "enumerate_lines",
    "mock_responder",
    "openai_backend",
    "openrouter_backend",
    "parse_cluster_keypoints",
    "parse_count",
    "parse_keypoints",
    "redundancy_eval_spec",
    "render_prompt",
]
