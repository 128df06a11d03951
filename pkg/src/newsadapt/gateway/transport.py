"""Chat-completion transports: real HTTP endpoint and offline mock.

Wire format (HTTP): POST {base}/chat/completions with a JSON body
{model, messages, temperature, max_tokens} and bearer auth; the reply text
is the first choice's message content.
"""

from __future__ import annotations

import hashlib
import json
import os

import requests

from newsadapt.gateway.config import ModelConfig


class AuthMissing(RuntimeError):
    pass


class TransportError(RuntimeError):
    def __init__(self, message: str, status: int | None = None, retryable: bool = False):
        super().__init__(message)
        self.status = status
        self.retryable = retryable


class HttpChatTransport:
    def __init__(self, timeout: float = 120.0, session: requests.Session | None = None):
        self.timeout = timeout
        self.session = session or requests.Session()

    def complete(
        self, cfg: ModelConfig, prompt: str, tag: str | None = None
    ) -> tuple[str, str]:
        """Returns (completion text, provider request id)."""
        token = os.environ.get(cfg.auth_env, "")
        if not token:
            raise AuthMissing(
                f"auth token expected in environment variable {cfg.auth_env!r}"
            )
        body = {
            "model": cfg.model_id,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": cfg.temperature,
            "max_tokens": cfg.max_output_tokens,
        }
        try:
            resp = self.session.post(
                f"{cfg.base_url.rstrip('/')}/chat/completions",
                json=body,
                headers={"Authorization": f"Bearer {token}"},
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise TransportError(f"request failed: {exc}", retryable=True) from exc
        if resp.status_code == 429 or resp.status_code >= 500:
            raise TransportError(
                f"HTTP {resp.status_code}", status=resp.status_code, retryable=True
            )
        if resp.status_code != 200:
            raise TransportError(
                f"HTTP {resp.status_code}: {resp.text[:200]}",
                status=resp.status_code,
                retryable=False,
            )
        try:
            payload = resp.json()
            text = payload["choices"][0]["message"]["content"]
            request_id = str(payload.get("id", ""))
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise TransportError(f"malformed completion body: {exc}") from exc
        return text or "", request_id


class MockChatTransport:
    """Offline provider: scripted replies by tag, else a deterministic echo.

    The echo heuristic derives severity, a span snippet and a boilerplate
    rationale from sha256(prompt), so offline matrices are fully
    reproducible and always parseable.
    """

    def __init__(
        self,
        replies: dict[str, str] | None = None,
        vocabulary: list[str] | None = None,
        none_label: str = "None",
        none_share: int = 3,
    ):
        self.replies = dict(replies or {})
        self.vocabulary = list(vocabulary or ["Low", "Medium", "High"])
        self.none_label = none_label
        self.none_share = none_share  # 1 in `none_share` prompts answered as None
        self.calls = 0

    def complete(
        self, cfg: ModelConfig, prompt: str, tag: str | None = None
    ) -> tuple[str, str]:
        self.calls += 1
        if tag is not None and tag in self.replies:
            return self.replies[tag], f"mock-{self.calls}"
        digest = hashlib.sha256(prompt.encode("utf-8")).digest()
        if digest[0] % self.none_share == 0:
            text = (
                f"<SEVERITY>{self.none_label}</SEVERITY>\n"
                "<SPANS>[]</SPANS>\n<RATIONALE>[]</RATIONALE>"
            )
        else:
            severity = self.vocabulary[digest[1] % len(self.vocabulary)]
            lines = [ln for ln in prompt.splitlines() if ln.strip()]
            tail = lines[-1] if lines else ""
            snippet = " ".join(tail.split()[:4]) or "unsupported claim"
            spans = json.dumps([snippet], ensure_ascii=False)
            rationale = (
                f"If the item frames the events one-sidedly "
                f"(marker {digest.hex()[:8]}), then it is {severity.lower()}-severity "
                "manipulative framing."
            )
            text = (
                f"<SEVERITY>{severity}</SEVERITY>\n"
                f"<SPANS>{spans}</SPANS>\n<RATIONALE>{rationale}</RATIONALE>"
            )
        return text, f"mock-{hashlib.sha256(prompt.encode('utf-8')).hexdigest()[:12]}"
