"""Run transcript: ordered, timestamped events plus call counters.

``rag_calls`` counts kb_search tool events; ``tool_calls`` counts every
tool event including kb_search. Counters are maintained on append and can
be recomputed from the raw events, which the test suite uses to prove them
sound. A logical clock (0, 1, 2, ...) keeps scripted runs bit-identical.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

EVENT_LLM_REQUEST = "llm_request"
EVENT_LLM_TURN = "llm_turn"
EVENT_TOOL_CALL = "tool_call"
EVENT_TOOL_RESULT = "tool_result"
EVENT_PHASE = "phase_transition"
EVENT_OUTCOME = "final_outcome"

KB_SEARCH_TOOL = "kb_search"


class LogicalClock:
    """Deterministic stand-in for time.time(): 0.0, 1.0, 2.0, ..."""

    def __init__(self):
        self._next = 0

    def __call__(self) -> float:
        value = float(self._next)
        self._next += 1
        return value


@dataclass(frozen=True)
class TranscriptEvent:
    seq: int
    ts: float
    type: str
    payload: dict

    def as_dict(self) -> dict:
        return {"seq": self.seq, "ts": self.ts, "type": self.type, **self.payload}


class Transcript:
    def __init__(self, clock=None):
        self.events: list[TranscriptEvent] = []
        self.rag_calls = 0
        self.tool_calls = 0
        self._clock = clock if clock is not None else time.time

    def append(self, event_type: str, **payload) -> TranscriptEvent:
        event = TranscriptEvent(
            seq=len(self.events), ts=float(self._clock()), type=event_type,
            payload=payload,
        )
        self.events.append(event)
        if event_type == EVENT_TOOL_CALL:
            self.tool_calls += 1
            if payload.get("tool") == KB_SEARCH_TOOL:
                self.rag_calls += 1
        return event

    def recount(self) -> tuple[int, int]:
        """Recompute (rag_calls, tool_calls) from raw events."""
        tool_events = [e for e in self.events if e.type == EVENT_TOOL_CALL]
        rag = sum(1 for e in tool_events if e.payload.get("tool") == KB_SEARCH_TOOL)
        return rag, len(tool_events)

    def events_of(self, event_type: str) -> list[TranscriptEvent]:
        return [e for e in self.events if e.type == event_type]

    def tool_names(self) -> list[str]:
        return [e.payload.get("tool") for e in self.events_of(EVENT_TOOL_CALL)]

    def to_jsonl(self) -> str:
        return "\n".join(
            json.dumps(e.as_dict(), sort_keys=True, default=str) for e in self.events
        ) + ("\n" if self.events else "")

    def write_jsonl(self, path: str | Path) -> None:
        Path(path).write_text(self.to_jsonl(), encoding="utf-8")

    @staticmethod
    def read_events(path: str | Path) -> list[dict]:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return [json.loads(line) for line in lines if line.strip()]
