"""Workflow orchestration: phase machine, prompts, transcript, engine."""

from .config import (
    ABLATION_AGENTIC, ABLATION_LLM_ONLY, ABLATION_RAG, ABLATIONS,
    WorkflowConfig, WorkflowRequest,
)
from .engine import WorkflowOutcome, run
from .prompts import PromptLibrary, retrieval_slot
from .state import (
    Phase, STATUS_COMPLIANT, STATUS_ERROR, STATUS_GAVE_UP, STATUS_RULE_FAILED,
    StepState, initial_state, step,
)
from .transcript import (
    EVENT_LLM_REQUEST, EVENT_LLM_TURN, EVENT_OUTCOME, EVENT_PHASE,
    EVENT_TOOL_CALL, EVENT_TOOL_RESULT, LogicalClock, Transcript,
    TranscriptEvent,
)

__all__ = [
    "ABLATIONS",
    "ABLATION_AGENTIC",
    "ABLATION_LLM_ONLY",
    "ABLATION_RAG",
    "EVENT_LLM_REQUEST",
    "EVENT_LLM_TURN",
    "EVENT_OUTCOME",
    "EVENT_PHASE",
    "EVENT_TOOL_CALL",
    "EVENT_TOOL_RESULT",
    "LogicalClock",
    "Phase",
    "PromptLibrary",
    "STATUS_COMPLIANT",
    "STATUS_ERROR",
    "STATUS_GAVE_UP",
    "STATUS_RULE_FAILED",
    "StepState",
    "Transcript",
    "TranscriptEvent",
    "WorkflowConfig",
    "WorkflowOutcome",
    "WorkflowRequest",
    "initial_state",
    "retrieval_slot",
    "run",
    "step",
]
