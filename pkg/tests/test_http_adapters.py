"""HTTP adapters exercised against faked sessions (no network)."""

import json

import pytest
import requests

from newsadapt.bank.embedding import (
    DimensionMismatch,
    HttpEmbeddingProvider,
    ProviderUnavailable,
    embed_batch,
)
from newsadapt.evaluation.metrics import HttpScorer, ScorerUnavailable
from newsadapt.gateway.config import ModelConfig
from newsadapt.gateway.transport import AuthMissing, HttpChatTransport, TransportError


class FakeResponse:
    def __init__(self, status_code=200, body=None, text=""):
        self.status_code = status_code
        self._body = body
        self.text = text or (json.dumps(body) if body is not None else "")

    def json(self):
        if self._body is None:
            raise ValueError("no body")
        return self._body


class FakeSession:
    def __init__(self, responses):
        self.responses = list(responses)
        self.requests = []

    def post(self, url, json=None, timeout=None, headers=None):
        self.requests.append({"url": url, "json": json, "headers": headers or {}})
        result = self.responses.pop(0)
        if isinstance(result, Exception):
            raise result
        return result


def test_http_embedding_provider_round_trip():
    session = FakeSession([FakeResponse(body={"embeddings": [[1.0, 0.0], [0.0, 1.0]]})])
    provider = HttpEmbeddingProvider("http://emb.local/embed", dim=2, session=session)
    vectors = embed_batch(["a", "b"], provider)
    assert vectors.shape == (2, 2)
    assert session.requests[0]["json"] == {"texts": ["a", "b"]}


def test_http_embedding_provider_errors():
    wrong_dim = HttpEmbeddingProvider(
        "http://emb.local/embed", dim=4,
        session=FakeSession([FakeResponse(body={"embeddings": [[1.0, 0.0]]})]),
    )
    with pytest.raises(DimensionMismatch):
        wrong_dim.embed_texts(["a"])

    down = HttpEmbeddingProvider(
        "http://emb.local/embed", dim=2,
        session=FakeSession([requests.ConnectionError("refused")]),
    )
    with pytest.raises(ProviderUnavailable):
        down.embed_texts(["a"])

    malformed = HttpEmbeddingProvider(
        "http://emb.local/embed", dim=2,
        session=FakeSession([FakeResponse(body={"nope": 1})]),
    )
    with pytest.raises(ProviderUnavailable):
        malformed.embed_texts(["a"])


def test_http_scorer_contract():
    scorer = HttpScorer(
        "http://scorer.local/f1",
        session=FakeSession([FakeResponse(body={"f1": 0.83})]),
    )
    assert scorer.score("candidate text", "reference text") == pytest.approx(0.83)

    no_field = HttpScorer(
        "http://scorer.local/f1", session=FakeSession([FakeResponse(body={"score": 1})])
    )
    with pytest.raises(ScorerUnavailable):
        no_field.score("a", "b")

    failing = HttpScorer(
        "http://scorer.local/f1", session=FakeSession([FakeResponse(status_code=500)])
    )
    with pytest.raises(ScorerUnavailable):
        failing.score("a", "b")


CFG = ModelConfig(model_id="vendor/model", context_budget=10_000, auth_env="TEST_GATEWAY_TOKEN")


def test_chat_transport_auth_missing(monkeypatch):
    monkeypatch.delenv("TEST_GATEWAY_TOKEN", raising=False)
    transport = HttpChatTransport(session=FakeSession([]))
    with pytest.raises(AuthMissing):
        transport.complete(CFG, "prompt")


def test_chat_transport_wire_format(monkeypatch):
    monkeypatch.setenv("TEST_GATEWAY_TOKEN", "secret-token")
    session = FakeSession(
        [
            FakeResponse(
                body={
                    "id": "req-1",
                    "choices": [{"message": {"content": "tagged output"}}],
                }
            )
        ]
    )
    transport = HttpChatTransport(session=session)
    text, request_id = transport.complete(CFG, "the prompt")
    assert text == "tagged output"
    assert request_id == "req-1"
    sent = session.requests[0]
    assert sent["url"].endswith("/chat/completions")
    assert sent["headers"]["Authorization"] == "Bearer secret-token"
    assert sent["json"] == {
        "model": "vendor/model",
        "messages": [{"role": "user", "content": "the prompt"}],
        "temperature": 0.0,
        "max_tokens": 1024,
    }


def test_chat_transport_retryable_vs_permanent(monkeypatch):
    monkeypatch.setenv("TEST_GATEWAY_TOKEN", "secret-token")
    throttled = HttpChatTransport(session=FakeSession([FakeResponse(status_code=429)]))
    with pytest.raises(TransportError) as exc:
        throttled.complete(CFG, "p")
    assert exc.value.retryable and exc.value.status == 429

    bad_request = HttpChatTransport(session=FakeSession([FakeResponse(status_code=400)]))
    with pytest.raises(TransportError) as exc:
        bad_request.complete(CFG, "p")
    assert not exc.value.retryable

    flaky = HttpChatTransport(session=FakeSession([requests.Timeout("slow")]))
    with pytest.raises(TransportError) as exc:
        flaky.complete(CFG, "p")
    assert exc.value.retryable

    malformed = HttpChatTransport(
        session=FakeSession([FakeResponse(body={"choices": []})])
    )
    with pytest.raises(TransportError):
        malformed.complete(CFG, "p")
