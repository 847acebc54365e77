"""Message, tool-descriptor, and turn types shared by all backends."""

from __future__ import annotations

from dataclasses import dataclass, field

ROLES = ("system", "user", "assistant", "tool")

KIND_TEXT = "text"
KIND_TOOL_CALL = "tool_call"


@dataclass(frozen=True)
class ToolCallRecord:
    """A tool invocation attached to an assistant message."""

    tool_call_id: str
    tool_name: str
    arguments: dict


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str
    tool_call_id: str | None = None  # required for role == "tool"
    tool_call: ToolCallRecord | None = None  # assistant messages that called a tool

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")
        if self.role == "tool" and not self.tool_call_id:
            raise ValueError("tool messages require tool_call_id")


@dataclass(frozen=True)
class ToolDescriptor:
    name: str
    description: str
    parameters: dict  # JSON-schema object

    def as_wire(self) -> dict:
        return {
            "type": "function",
            "function": {
                "name": self.name,
                "description": self.description,
                "parameters": self.parameters,
            },
        }


@dataclass(frozen=True)
class AssistantTurn:
    kind: str  # KIND_TEXT or KIND_TOOL_CALL
    text: str | None = None
    tool_name: str | None = None
    arguments: dict | None = None
    tool_call_id: str | None = None

    def __post_init__(self):
        if self.kind == KIND_TEXT:
            if self.text is None or self.tool_name is not None:
                raise ValueError("text turns carry text and nothing else")
        elif self.kind == KIND_TOOL_CALL:
            if self.tool_name is None or self.arguments is None or self.text is not None:
                raise ValueError("tool_call turns carry tool_name and arguments only")
        else:
            raise ValueError(f"unknown turn kind {self.kind!r}")


def turn_from_dict(raw: dict) -> AssistantTurn:
    """Build an AssistantTurn from its JSON form (script files, tests)."""
    kind = raw.get("kind")
    if kind == KIND_TEXT:
        return AssistantTurn(kind=KIND_TEXT, text=raw.get("text", ""))
    if kind == KIND_TOOL_CALL:
        return AssistantTurn(
            kind=KIND_TOOL_CALL,
            tool_name=raw.get("tool_name"),
            arguments=raw.get("arguments", {}),
        )
    raise ValueError(f"turn kind must be 'text' or 'tool_call', got {kind!r}")
