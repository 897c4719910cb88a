"""Language-model backends.

Every call is tagged with the pipeline ``stage`` and the game ``step`` it
belongs to. :class:`ScriptedLM` replays responses keyed by that pair, which
is what makes closed-loop runs reproducible without a live model.
"""

from __future__ import annotations

import json
import logging
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol

import requests

logger = logging.getLogger(__name__)


class LMError(RuntimeError):
    pass


class LMTransportError(LMError):
    """The model could not be reached or returned no usable payload."""


class FixtureMissing(LMError):
    """A scripted model was asked for a response it does not have."""


@dataclass(frozen=True)
class DecodeParams:
    temperature: float = 0.0
    max_tokens: int | None = None


class LanguageModel(Protocol):
    def complete(
        self,
        system_prompt: str,
        user_prompt: str,
        params: DecodeParams | None = None,
        *,
        stage: str,
        step: int,
    ) -> str: ...


class ScriptedLM:
    """Replays ``{stage, step, response}`` fixtures in file order per key.

    A fixture with an ``error`` field instead of ``response`` raises
    :class:`LMTransportError`, which lets tests drive degraded paths.
    """

    def __init__(self, records: Iterable[dict]):
        self._queues: dict[tuple[str, int], deque[dict]] = {}
        for rec in records:
            self._queues.setdefault((rec["stage"], int(rec["step"])), deque()).append(rec)

    @classmethod
    def from_jsonl(cls, path: str | Path) -> ScriptedLM:
        with Path(path).open(encoding="utf-8") as fh:
            return cls(json.loads(line) for line in fh if line.strip())

    def complete(self, system_prompt, user_prompt, params=None, *, stage, step):
        queue = self._queues.get((stage, step))
        if not queue:
            raise FixtureMissing(f"no scripted response for stage={stage!r} step={step}")
        rec = queue.popleft()
        if "error" in rec:
            raise LMTransportError(rec["error"])
        return rec["response"]

    def remaining(self) -> int:
        return sum(len(q) for q in self._queues.values())


@dataclass
class CallRecord:
    stage: str
    step: int
    system_prompt: str
    prompt: str
    response: str | None = None
    error: str | None = None

    def fixture(self) -> dict:
        out: dict = {"stage": self.stage, "step": self.step}
        if self.error is not None:
            out["error"] = self.error
        else:
            out["response"] = self.response
        return out


@dataclass
class Usage:
    calls: int = 0
    prompt_chars: int = 0
    response_chars: int = 0
    by_stage: dict[str, int] = field(default_factory=dict)

    @property
    def est_tokens(self) -> int:
        return (self.prompt_chars + self.response_chars) // 4


class TranscriptLM:
    """Wraps a model and records every call for transcripts and fixtures."""

    def __init__(self, inner: LanguageModel):
        self.inner = inner
        self.calls: list[CallRecord] = []
        self.usage = Usage()

    def complete(self, system_prompt, user_prompt, params=None, *, stage, step):
        rec = CallRecord(stage, step, system_prompt, user_prompt)
        self.calls.append(rec)
        self.usage.calls += 1
        self.usage.prompt_chars += len(system_prompt) + len(user_prompt)
        self.usage.by_stage[stage] = self.usage.by_stage.get(stage, 0) + 1
        try:
            rec.response = self.inner.complete(system_prompt, user_prompt, params, stage=stage, step=step)
        except LMTransportError as exc:
            rec.error = str(exc)
            raise
        self.usage.response_chars += len(rec.response)
        return rec.response

    def fixtures(self) -> list[dict]:
        return [c.fixture() for c in self.calls]


class OpenAIChatLM:
    """Client for an OpenAI-compatible ``/chat/completions`` endpoint."""

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: str | None = None,
        default_params: DecodeParams = DecodeParams(),
        timeout: float = 120.0,
    ):
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.default_params = default_params
        self.timeout = timeout

    def request_body(self, system_prompt: str, user_prompt: str, params: DecodeParams | None) -> dict:
        params = params or self.default_params
        messages = []
        if system_prompt:
            messages.append({"role": "system", "content": system_prompt})
        messages.append({"role": "user", "content": user_prompt})
        body: dict = {"model": self.model, "messages": messages, "temperature": params.temperature}
        if params.max_tokens is not None:
            body["max_tokens"] = params.max_tokens
        return body

    def complete(self, system_prompt, user_prompt, params=None, *, stage, step):
        body = self.request_body(system_prompt, user_prompt, params)
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        logger.debug("LM request stage=%s step=%d body=%s", stage, step, json.dumps(body))
        try:
            response = requests.post(self.endpoint, headers=headers, json=body, timeout=self.timeout)
            response.raise_for_status()
            content = response.json()["choices"][0]["message"]["content"]
        except (requests.RequestException, KeyError, IndexError, TypeError, ValueError) as exc:
            raise LMTransportError(f"{type(exc).__name__}: {exc}") from exc
        if not isinstance(content, str):
            raise LMTransportError("response content is not text")
        logger.debug("LM response stage=%s step=%d content=%r", stage, step, content)
        return content


def write_fixtures(records: Iterable[dict], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
