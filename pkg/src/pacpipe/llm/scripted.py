"""Deterministic scripted backend for tests and reproducible runs.

A script is an ordered list of (matcher, turn) entries. Entries are
consumed strictly in order, at most once each: on every completion request
the next entry's regex must match the most recent user or tool message.
Replaying the same conversation therefore yields bit-identical transcripts,
and any drift between orchestrator and script fails loudly.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from ..errors import ScriptError, ScriptExhaustedError
from .types import AssistantTurn, ChatMessage, turn_from_dict


@dataclass(frozen=True)
class ScriptEntry:
    match: str  # regex over the last user/tool message content
    turn: AssistantTurn


class ScriptedBackend:
    name = "scripted"

    def __init__(self, entries: list[ScriptEntry], source: str = "<script>"):
        self.entries = list(entries)
        self.source = source
        self.cursor = 0

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedBackend":
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ScriptError(f"cannot read script {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ScriptError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
        return cls(parse_script(raw, str(path)), source=str(path))

    @property
    def remaining(self) -> int:
        return len(self.entries) - self.cursor

    def request(self, messages: list[ChatMessage], tools, temperature: float) -> AssistantTurn:
        target = _last_user_or_tool(messages)
        if self.cursor >= len(self.entries):
            raise ScriptExhaustedError(
                f"{self.source}: script exhausted after {len(self.entries)} turns; "
                f"unmatched request ending with: {target[:120]!r}"
            )
        entry = self.entries[self.cursor]
        if re.search(entry.match, target, re.DOTALL) is None:
            raise ScriptExhaustedError(
                f"{self.source}: entry {self.cursor} pattern {entry.match!r} does not "
                f"match the last user/tool message: {target[:120]!r}"
            )
        self.cursor += 1
        return entry.turn


def parse_script(raw, source: str) -> list[ScriptEntry]:
    if not isinstance(raw, list):
        raise ScriptError(f"{source}: script must be a JSON array of entries")
    entries = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict) or "match" not in item or "turn" not in item:
            raise ScriptError(f"{source}: entry {i} needs 'match' and 'turn'")
        try:
            re.compile(item["match"])
        except re.error as exc:
            raise ScriptError(f"{source}: entry {i}: bad regex: {exc}") from exc
        try:
            turn = turn_from_dict(item["turn"])
        except ValueError as exc:
            raise ScriptError(f"{source}: entry {i}: {exc}") from exc
        entries.append(ScriptEntry(match=item["match"], turn=turn))
    return entries


def _last_user_or_tool(messages: list[ChatMessage]) -> str:
    for msg in reversed(messages):
        if msg.role in ("user", "tool"):
            return msg.content
    return messages[-1].content if messages else ""
