"""Client for OpenAI-compatible chat-completions endpoints.

The request body carries only the fields this harness actually pins down —
model, messages, temperature, max_tokens — every other sampling parameter is
omitted so the server's own defaults apply.  Prompts go as a single user
message with no system prompt.

Transient failures (network errors, timeouts, HTTP 429/5xx) are retried with
exponential backoff; other 4xx statuses and malformed 200 bodies fail
immediately.  A semaphore bounds the number of requests in flight when one
client is shared across worker threads.
"""

from __future__ import annotations

import os
import random
import threading
import time
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable

import httpx

from staterecall.promptrender import RenderedPrompt

API_KEY_ENV_VAR = "STATERECALL_API_KEY"

BACKOFF_BASE_SECONDS = 1.0
BACKOFF_FACTOR = 2.0
BACKOFF_CAP_SECONDS = 30.0


class Variant(str, Enum):
    THINK = "think"
    INSTRUCT = "instruct"


DEFAULT_MAX_TOKENS = {Variant.THINK: 6000, Variant.INSTRUCT: 40}


class FinishReason(str, Enum):
    STOP = "stop"
    LENGTH = "length"
    OTHER = "other"


class EndpointError(Exception):
    pass


class TransportError(EndpointError):
    """Retries exhausted on network-level failures."""


class EndpointTimeoutError(TransportError):
    """Retries exhausted and the last failure was a timeout."""


class HttpStatusError(EndpointError):
    def __init__(self, status_code: int, detail: str = "") -> None:
        self.status_code = status_code
        message = f"HTTP {status_code}"
        if detail:
            message += f": {detail}"
        super().__init__(message)


class MalformedResponseError(EndpointError):
    """2xx body that does not match the completions schema."""


@dataclass(frozen=True)
class EndpointConfig:
    base_url: str
    model_id: str
    variant: Variant = Variant.INSTRUCT
    api_key: str | None = None
    temperature: float = 0.0
    max_output_tokens: int | None = None
    request_timeout: float = 120.0
    max_retries: int = 3
    max_in_flight: int = 4

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_output_tokens is None:
            object.__setattr__(self, "max_output_tokens", DEFAULT_MAX_TOKENS[self.variant])
        if self.max_output_tokens < 1:  # type: ignore[operator]
            raise ValueError("max_output_tokens must be >= 1")
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")

    def resolved_api_key(self) -> str | None:
        return self.api_key or os.environ.get(API_KEY_ENV_VAR) or None


@dataclass(frozen=True)
class CompletionResult:
    raw_text: str
    finish_reason: FinishReason
    latency_ms: float
    attempt_count: int


def _parse_finish_reason(value: Any) -> FinishReason:
    if value == "stop":
        return FinishReason.STOP
    if value == "length":
        return FinishReason.LENGTH
    return FinishReason.OTHER


def _extract(body: Any) -> tuple[str, FinishReason]:
    try:
        choice = body["choices"][0]
        text = choice["message"]["content"]
        reason = _parse_finish_reason(choice.get("finish_reason"))
    except (KeyError, IndexError, TypeError) as exc:
        raise MalformedResponseError(f"completions body missing fields: {exc!r}") from exc
    if not isinstance(text, str):
        raise MalformedResponseError("message content is not text")
    return text, reason


class EndpointClient:
    """Shareable across threads; at most ``max_in_flight`` concurrent requests.

    ``sleep`` is injectable so tests can observe backoff delays without
    actually waiting.
    """

    def __init__(
        self,
        cfg: EndpointConfig,
        *,
        sleep: Callable[[float], None] = time.sleep,
        backoff_base: float = BACKOFF_BASE_SECONDS,
        backoff_factor: float = BACKOFF_FACTOR,
        backoff_cap: float = BACKOFF_CAP_SECONDS,
    ) -> None:
        self.cfg = cfg
        self._sleep = sleep
        self._backoff_base = backoff_base
        self._backoff_factor = backoff_factor
        self._backoff_cap = backoff_cap
        self._semaphore = threading.Semaphore(cfg.max_in_flight)
        self._rng = random.Random()
        headers = {}
        key = cfg.resolved_api_key()
        if key:
            headers["Authorization"] = f"Bearer {key}"
        self._http = httpx.Client(timeout=httpx.Timeout(cfg.request_timeout), headers=headers)
        self._url = cfg.base_url.rstrip("/") + "/v1/chat/completions"

    def close(self) -> None:
        self._http.close()

    def __enter__(self) -> "EndpointClient":
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()

    def _delays(self) -> list[float]:
        """Jittered exponential backoff, clamped nondecreasing."""
        delays: list[float] = []
        previous = 0.0
        for attempt in range(self.cfg.max_retries):
            bound = min(self._backoff_cap, self._backoff_base * self._backoff_factor**attempt)
            jittered = bound * self._rng.uniform(0.5, 1.0)
            previous = max(previous, jittered)
            delays.append(previous)
        return delays

    def complete(self, prompt: RenderedPrompt | str) -> CompletionResult:
        text = prompt.text if isinstance(prompt, RenderedPrompt) else prompt
        body = {
            "model": self.cfg.model_id,
            "messages": [{"role": "user", "content": text}],
            "temperature": self.cfg.temperature,
            "max_tokens": self.cfg.max_output_tokens,
        }
        delays = self._delays()
        last_error: Exception | None = None
        started = time.monotonic()
        with self._semaphore:
            for attempt in range(self.cfg.max_retries + 1):
                if attempt > 0:
                    self._sleep(delays[attempt - 1])
                try:
                    response = self._http.post(self._url, json=body)
                except httpx.TimeoutException as exc:
                    last_error = EndpointTimeoutError(f"request timed out: {exc}")
                    continue
                except httpx.HTTPError as exc:
                    last_error = TransportError(f"transport failure: {exc}")
                    continue
                if response.status_code == 429 or response.status_code >= 500:
                    last_error = HttpStatusError(response.status_code, response.text[:200])
                    continue
                if response.status_code >= 400:
                    raise HttpStatusError(response.status_code, response.text[:200])
                try:
                    payload = response.json()
                except ValueError as exc:
                    raise MalformedResponseError("response body is not JSON") from exc
                raw_text, finish_reason = _extract(payload)
                latency_ms = (time.monotonic() - started) * 1000.0
                return CompletionResult(
                    raw_text=raw_text,
                    finish_reason=finish_reason,
                    latency_ms=latency_ms,
                    attempt_count=attempt + 1,
                )
        assert last_error is not None
        raise last_error


def complete(prompt: RenderedPrompt | str, cfg: EndpointConfig) -> CompletionResult:
    """One-shot convenience wrapper around a short-lived client."""
    with EndpointClient(cfg) as client:
        return client.complete(prompt)
