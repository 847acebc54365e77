"""Uniform chat-with-tools interface over the HTTP and scripted backends.

The gateway validates on both sides of the call: requests must start with
a system message, and a returned tool call must name a declared tool and
carry schema-valid arguments. Invalid model output surfaces as
InvalidToolCallError, which the orchestrator treats as a retriable model
fault rather than a crash.
"""

from __future__ import annotations

import jsonschema

from ..errors import GatewayError, InvalidToolCallError
from .http_backend import HttpBackend
from .scripted import ScriptedBackend
from .types import (
    AssistantTurn, ChatMessage, KIND_TOOL_CALL, ToolDescriptor,
)

DEFAULT_TEMPERATURE = 0.0


class Gateway:
    def __init__(self, backend):
        self.backend = backend
        self._call_counter = 0

    @property
    def backend_name(self) -> str:
        return self.backend.name

    def complete(
        self,
        messages: list[ChatMessage],
        tools: list[ToolDescriptor] = (),
        temperature: float = DEFAULT_TEMPERATURE,
    ) -> AssistantTurn:
        if not messages:
            raise GatewayError("messages must be non-empty")
        if messages[0].role != "system":
            raise GatewayError("the first message must be the system message")
        names = [t.name for t in tools]
        if len(set(names)) != len(names):
            raise GatewayError(f"duplicate tool names in request: {names}")

        turn = self.backend.request(list(messages), list(tools), temperature)

        if turn.kind == KIND_TOOL_CALL:
            descriptor = next((t for t in tools if t.name == turn.tool_name), None)
            if descriptor is None:
                raise InvalidToolCallError(f"unknown tool {turn.tool_name!r}")
            if not isinstance(turn.arguments, dict):
                raise InvalidToolCallError(
                    f"arguments for {turn.tool_name!r} must be an object"
                )
            try:
                jsonschema.validate(turn.arguments, descriptor.parameters)
            except jsonschema.ValidationError as exc:
                raise InvalidToolCallError(
                    f"arguments for {turn.tool_name!r} fail validation: {exc.message}"
                )
            if turn.tool_call_id is None:
                self._call_counter += 1
                turn = AssistantTurn(
                    kind=KIND_TOOL_CALL,
                    tool_name=turn.tool_name,
                    arguments=turn.arguments,
                    tool_call_id=f"call_{self._call_counter:04d}",
                )
        return turn


def configure(backend_spec: dict) -> Gateway:
    """Build a gateway from a backend spec.

    ``{"scripted": {"script_path": ...}}`` or
    ``{"http": {"base_url": ..., "model": ..., "api_key_env": ...,
    "timeout_s": ..., "max_retries": ...}}``.
    """
    if not isinstance(backend_spec, dict) or len(backend_spec) != 1:
        raise GatewayError("backend spec must have exactly one of 'http' or 'scripted'")
    (kind, cfg), = backend_spec.items()
    if kind == "scripted":
        return Gateway(ScriptedBackend.from_file(cfg["script_path"]))
    if kind == "http":
        return Gateway(
            HttpBackend(
                base_url=cfg["base_url"],
                model=cfg["model"],
                api_key_env=cfg.get("api_key_env"),
                timeout_s=float(cfg.get("timeout_s", 60.0)),
                max_retries=int(cfg.get("max_retries", 3)),
            )
        )
    raise GatewayError(f"unknown backend kind {kind!r}")
