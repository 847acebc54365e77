"""Chat-completions HTTP backend.

One wire protocol covers local model servers and hosted APIs alike:
``POST {base_url}/v1/chat/completions`` with model, messages, tools, and
``tool_choice: "auto"``. Transport failures (connect/timeout) are retried
with exponential backoff; HTTP error statuses are not.
"""

from __future__ import annotations

import json
import os
import time

import requests

from ..errors import GatewayError, TransportError
from .types import AssistantTurn, ChatMessage, KIND_TEXT, KIND_TOOL_CALL, ToolDescriptor

DEFAULT_TIMEOUT_S = 60.0
DEFAULT_MAX_RETRIES = 3
DEFAULT_BACKOFF_S = 1.0  # 1s, 2s, 4s


class HttpBackend:
    name = "http"

    def __init__(
        self,
        base_url: str,
        model: str,
        api_key_env: str | None = None,
        timeout_s: float = DEFAULT_TIMEOUT_S,
        max_retries: int = DEFAULT_MAX_RETRIES,
        backoff_s: float = DEFAULT_BACKOFF_S,
        session: requests.Session | None = None,
        sleeper=time.sleep,
    ):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key_env = api_key_env
        self.timeout_s = timeout_s
        self.max_retries = max_retries
        self.backoff_s = backoff_s
        self._session = session or requests.Session()
        self._sleep = sleeper
        if api_key_env and not os.environ.get(api_key_env):
            raise GatewayError(f"environment variable {api_key_env!r} is not set")

    def request(
        self, messages: list[ChatMessage], tools: list[ToolDescriptor], temperature: float
    ) -> AssistantTurn:
        body = {
            "model": self.model,
            "messages": [_message_wire(m) for m in messages],
            "temperature": temperature,
        }
        if tools:
            body["tools"] = [t.as_wire() for t in tools]
            body["tool_choice"] = "auto"
        headers = {"Content-Type": "application/json"}
        if self.api_key_env:
            headers["Authorization"] = f"Bearer {os.environ[self.api_key_env]}"

        last_exc: Exception | None = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                self._sleep(self.backoff_s * (2 ** (attempt - 1)))
            try:
                resp = self._session.post(
                    f"{self.base_url}/v1/chat/completions",
                    json=body,
                    headers=headers,
                    timeout=self.timeout_s,
                )
                break
            except (requests.ConnectionError, requests.Timeout) as exc:
                last_exc = exc
        else:
            raise TransportError(
                f"chat endpoint unreachable after {self.max_retries} retries: {last_exc}"
            )
        if resp.status_code != 200:
            raise GatewayError(
                f"chat endpoint returned HTTP {resp.status_code}: {resp.text[:200]}"
            )
        return _parse_completion(resp)


def _message_wire(msg: ChatMessage) -> dict:
    wire: dict = {"role": msg.role, "content": msg.content}
    if msg.role == "tool":
        wire["tool_call_id"] = msg.tool_call_id
    if msg.role == "assistant" and msg.tool_call is not None:
        wire["content"] = msg.content or None
        wire["tool_calls"] = [
            {
                "id": msg.tool_call.tool_call_id,
                "type": "function",
                "function": {
                    "name": msg.tool_call.tool_name,
                    "arguments": json.dumps(msg.tool_call.arguments),
                },
            }
        ]
    return wire


def _parse_completion(resp) -> AssistantTurn:
    try:
        payload = resp.json()
        message = payload["choices"][0]["message"]
    except (ValueError, KeyError, IndexError) as exc:
        raise GatewayError(f"malformed chat completion: {exc}")
    tool_calls = message.get("tool_calls") or []
    if tool_calls:
        call = tool_calls[0]  # the workflow is single-call; extras are dropped
        try:
            name = call["function"]["name"]
            raw_args = call["function"].get("arguments", "{}")
            arguments = json.loads(raw_args) if isinstance(raw_args, str) else raw_args
        except (KeyError, json.JSONDecodeError) as exc:
            raise GatewayError(f"malformed tool call in completion: {exc}")
        return AssistantTurn(
            kind=KIND_TOOL_CALL,
            tool_name=name,
            arguments=arguments,
            tool_call_id=call.get("id"),
        )
    return AssistantTurn(kind=KIND_TEXT, text=message.get("content") or "")
