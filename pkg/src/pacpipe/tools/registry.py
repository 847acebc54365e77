"""Tool registry: the single dispatch surface the orchestrator trusts.

Descriptors and handlers are registered together, so the set exposed to
the LLM gateway and the set that can be dispatched are identical by
construction. Expected tool failures come back as ``ok=False`` results
whose text is shown to the model; only genuine bugs raise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..errors import WorkflowBugError
from ..llm.types import ToolDescriptor


@dataclass(frozen=True)
class ToolResult:
    text: str  # what the model sees
    ok: bool = True
    data: object = None  # structured result for the orchestrator


class ToolFault(Exception):
    """Raised by handlers for expected failures; rendered as error text."""


class ToolRegistry:
    def __init__(self):
        self._tools: dict[str, tuple[ToolDescriptor, Callable]] = {}

    def register(self, descriptor: ToolDescriptor, handler: Callable) -> None:
        if descriptor.name in self._tools:
            raise WorkflowBugError(f"tool {descriptor.name!r} registered twice")
        self._tools[descriptor.name] = (descriptor, handler)

    @property
    def names(self) -> tuple:
        return tuple(self._tools)

    def descriptors(self, names=None) -> list[ToolDescriptor]:
        if names is None:
            return [d for d, _ in self._tools.values()]
        missing = [n for n in names if n not in self._tools]
        if missing:
            raise WorkflowBugError(f"unregistered tools requested: {missing}")
        return [self._tools[n][0] for n in names]

    def dispatch(self, name: str, arguments: dict) -> ToolResult:
        if name not in self._tools:
            raise WorkflowBugError(f"dispatch on unregistered tool {name!r}")
        _descriptor, handler = self._tools[name]
        try:
            result = handler(**arguments)
        except ToolFault as fault:
            return ToolResult(text=f"ERROR: {fault}", ok=False)
        if not isinstance(result, ToolResult):
            raise WorkflowBugError(f"tool {name!r} returned {type(result).__name__}")
        return result
