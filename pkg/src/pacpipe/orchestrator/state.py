"""The workflow phase machine as a pure transition function.

``run()`` is a fold of :func:`step` over the events it produces while
driving the gateway and tools; keeping ``step`` pure makes every
transition unit-testable in isolation. Illegal (phase, event) pairs raise
WorkflowBugError: they indicate an orchestrator bug, never a model fault.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from ..errors import WorkflowBugError
from .config import ABLATION_AGENTIC, ABLATION_LLM_ONLY, WorkflowConfig


class Phase(Enum):
    RETRIEVE_OPA = "RetrieveOpa"
    GENERATE_RULES = "GenerateRules"
    CHECK_RULES = "CheckRules"
    PREPROCESS = "Preprocess"
    VALIDATE = "Validate"
    RETRIEVE_IAC = "RetrieveIac"
    PATCH_INFRA = "PatchInfra"
    DONE = "Done"
    FAILED = "Failed"


STATUS_COMPLIANT = "compliant"
STATUS_GAVE_UP = "non-compliant-gave-up"
STATUS_RULE_FAILED = "rule-generation-failed"
STATUS_ERROR = "error"


# events
@dataclass(frozen=True)
class RetrievalFinished:
    pass


@dataclass(frozen=True)
class PolicyProposed:
    pass


@dataclass(frozen=True)
class CheckPassed:
    pass


@dataclass(frozen=True)
class CheckFailed:
    pass


@dataclass(frozen=True)
class PlanReady:
    pass


@dataclass(frozen=True)
class VerdictCompliant:
    pass


@dataclass(frozen=True)
class VerdictViolations:
    pass


@dataclass(frozen=True)
class PatchApplied:
    pass


@dataclass(frozen=True)
class PatchRejected:
    pass


@dataclass(frozen=True)
class BudgetExhausted:
    """A per-phase budget ran out; carries the terminal status to take."""

    status: str


@dataclass(frozen=True)
class StepState:
    phase: Phase
    rule_attempts: int = 0
    repair_iterations: int = 0
    status: str | None = None  # set when phase is DONE or FAILED

    @property
    def terminal(self) -> bool:
        return self.phase in (Phase.DONE, Phase.FAILED)


def initial_state(config: WorkflowConfig) -> StepState:
    if config.ablation_mode == ABLATION_LLM_ONLY:
        return StepState(phase=Phase.GENERATE_RULES)
    return StepState(phase=Phase.RETRIEVE_OPA)


def step(state: StepState, event, config: WorkflowConfig) -> StepState:
    """Pure transition function over (phase, event)."""
    if state.terminal:
        raise WorkflowBugError(f"step on terminal state {state.phase.value}")
    agentic = config.ablation_mode == ABLATION_AGENTIC
    phase = state.phase

    if isinstance(event, BudgetExhausted):
        return replace(state, phase=Phase.FAILED, status=event.status)

    if phase == Phase.RETRIEVE_OPA and isinstance(event, RetrievalFinished):
        return replace(state, phase=Phase.GENERATE_RULES)

    if phase == Phase.GENERATE_RULES and isinstance(event, PolicyProposed):
        return replace(
            state, phase=Phase.CHECK_RULES, rule_attempts=state.rule_attempts + 1
        )

    if phase == Phase.CHECK_RULES and isinstance(event, CheckPassed):
        return replace(state, phase=Phase.PREPROCESS)

    if phase == Phase.CHECK_RULES and isinstance(event, CheckFailed):
        if not agentic or state.rule_attempts >= config.max_rule_retries:
            return replace(state, phase=Phase.FAILED, status=STATUS_RULE_FAILED)
        return replace(state, phase=Phase.GENERATE_RULES)

    if phase == Phase.PREPROCESS and isinstance(event, PlanReady):
        return replace(state, phase=Phase.VALIDATE)

    if phase == Phase.VALIDATE and isinstance(event, VerdictCompliant):
        return replace(state, phase=Phase.DONE, status=STATUS_COMPLIANT)

    if phase == Phase.VALIDATE and isinstance(event, VerdictViolations):
        if not agentic or state.repair_iterations >= config.max_iterations:
            return replace(state, phase=Phase.FAILED, status=STATUS_GAVE_UP)
        return replace(
            state,
            phase=Phase.RETRIEVE_IAC,
            repair_iterations=state.repair_iterations + 1,
        )

    if phase == Phase.RETRIEVE_IAC and isinstance(event, RetrievalFinished):
        return replace(state, phase=Phase.PATCH_INFRA)

    if phase == Phase.PATCH_INFRA and isinstance(event, PatchApplied):
        return replace(state, phase=Phase.PREPROCESS)

    if phase == Phase.PATCH_INFRA and isinstance(event, PatchRejected):
        return state  # model retries; the engine enforces the patch budget

    raise WorkflowBugError(
        f"illegal transition: {type(event).__name__} in phase {phase.value}"
    )
