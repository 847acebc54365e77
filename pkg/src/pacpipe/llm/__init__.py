"""Chat-with-tools gateway over HTTP and scripted backends."""

from .gateway import DEFAULT_TEMPERATURE, Gateway, configure
from .http_backend import HttpBackend
from .scripted import ScriptedBackend, ScriptEntry, parse_script
from .types import (
    AssistantTurn, ChatMessage, KIND_TEXT, KIND_TOOL_CALL, ToolCallRecord,
    ToolDescriptor, turn_from_dict,
)

__all__ = [
    "AssistantTurn",
    "ChatMessage",
    "DEFAULT_TEMPERATURE",
    "Gateway",
    "HttpBackend",
    "KIND_TEXT",
    "KIND_TOOL_CALL",
    "ScriptEntry",
    "ScriptedBackend",
    "ToolCallRecord",
    "ToolDescriptor",
    "configure",
    "parse_script",
    "turn_from_dict",
]
