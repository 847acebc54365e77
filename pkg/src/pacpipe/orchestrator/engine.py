"""Workflow engine: drives the gateway and tools through the phase graph.

retrieve -> generate -> check (retry on rejection) -> preprocess ->
validate -> repair (retrieve -> patch -> preprocess -> validate), with the
rule-retry and repair-iteration caps from the config and per-phase budgets
that bound the run for any gateway behavior, scripted or adversarial.

Ablation modes reshape the graph: ``llm-only`` skips retrieval and tools
entirely; ``rag`` performs one orchestrator-initiated retrieval and then
scores the generated rule without feedback. In both non-agentic modes the
post-generation checks run as plain library calls so the transcript
carries no tool events beyond the rag lookup.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..errors import InvalidToolCallError, PacpipeError, WorkflowBugError
from ..iac.preprocess import MODE_EXTERNAL, MODE_PLAN_JSON
from ..llm.gateway import Gateway
from ..llm.types import ChatMessage, KIND_TEXT, KIND_TOOL_CALL, ToolCallRecord
from ..rego import check_syntax, evaluate, parse_policy
from ..tools.checks import CheckResult, Verdict, policy_validate, rule_check
from ..tools.pipeline import (
    PipelineTools, TOOL_KB_SEARCH, TOOL_PATCH, TOOL_PREPROCESS,
    TOOL_RULE_CHECK, TOOL_VALIDATE,
)
from .config import ABLATION_AGENTIC, ABLATION_RAG, WorkflowConfig, WorkflowRequest
from .prompts import PromptLibrary, retrieval_slot
from .state import (
    BudgetExhausted, CheckFailed, CheckPassed, PatchApplied, PatchRejected,
    Phase, PlanReady, PolicyProposed, RetrievalFinished, STATUS_COMPLIANT,
    STATUS_ERROR, STATUS_GAVE_UP, STATUS_RULE_FAILED, StepState,
    VerdictCompliant, VerdictViolations, initial_state, step,
)
from .transcript import (
    EVENT_LLM_REQUEST, EVENT_LLM_TURN, EVENT_OUTCOME, EVENT_PHASE,
    EVENT_TOOL_CALL, EVENT_TOOL_RESULT, Transcript,
)

NUDGE_WRITE_RULE = (
    "The knowledge-base budget for this step is spent. "
    "Write the rule now; reply with only the Rego source."
)
NUDGE_SUBMIT_PATCH = (
    "Submit the corrected Terraform file with the patch_infra tool now."
)
NUDGE_INVALID_CALL = "That tool call was invalid: "

_VALUE_PREVIEW_CHARS = 200


@dataclass
class WorkflowOutcome:
    status: str
    transcript: Transcript
    policy_source: str | None = None
    infra_source: str | None = None
    check_result: CheckResult | None = None
    verdict: Verdict | None = None
    infra_modified: bool = False
    rule_attempts: int = 0
    repair_iterations: int = 0
    error: str | None = None


class _HardFault(Exception):
    """Unrecoverable run failure; becomes an error outcome."""


def run(
    request: WorkflowRequest,
    gateway: Gateway,
    tools: PipelineTools,
    clock=None,
    template_dir=None,
) -> WorkflowOutcome:
    """Execute one workflow; never raises for model-induced failures."""
    engine = _Engine(request, gateway, tools, clock, template_dir)
    return engine.run()


class _Engine:
    def __init__(self, request, gateway, tools, clock, template_dir):
        self.request = request
        self.config: WorkflowConfig = request.config
        self.gateway = gateway
        self.tools = tools
        self.tools.policy_prompt = request.policy_prompt
        self.tools.k = self.config.k
        self.tools.context_budget = self.config.context_budget
        self.registry = tools.build_registry()
        self.prompts = PromptLibrary(template_dir)
        self.transcript = Transcript(clock=clock)
        self.state: StepState = initial_state(self.config)
        self.conversation: list[ChatMessage] = []
        self.policy_source: str | None = None
        self.check_result: CheckResult | None = None
        self.verdict: Verdict | None = None

    @property
    def agentic(self) -> bool:
        return self.config.ablation_mode == ABLATION_AGENTIC

    # --- event plumbing ---

    def advance(self, event) -> None:
        before = self.state
        self.state = step(before, event, self.config)
        self.transcript.append(
            EVENT_PHASE,
            from_phase=before.phase.value,
            to_phase=self.state.phase.value,
            event=type(event).__name__,
        )

    def dispatch(self, name: str, arguments: dict):
        self.transcript.append(EVENT_TOOL_CALL, tool=name, arguments=arguments)
        result = self.registry.dispatch(name, arguments)
        self.transcript.append(
            EVENT_TOOL_RESULT, tool=name, ok=result.ok, text=result.text
        )
        return result

    def say(self, content: str) -> None:
        self.conversation.append(ChatMessage(role="user", content=content))

    def model_turn(self, offered: tuple):
        descriptors = self.registry.descriptors(list(offered)) if offered else []
        faults = 0
        while True:
            self.transcript.append(
                EVENT_LLM_REQUEST,
                phase=self.state.phase.value,
                messages=len(self.conversation),
                tools=list(offered),
            )
            try:
                turn = self.gateway.complete(self.conversation, descriptors)
            except InvalidToolCallError as exc:
                self.transcript.append(EVENT_LLM_TURN, kind="invalid", error=str(exc))
                faults += 1
                if faults > self.config.fault_retries:
                    raise _HardFault(f"model kept emitting invalid tool calls: {exc}")
                self.say(f"{NUDGE_INVALID_CALL}{exc}. Try again.")
                continue
            if turn.kind == KIND_TEXT:
                self.transcript.append(EVENT_LLM_TURN, kind=KIND_TEXT, text=turn.text)
                self.conversation.append(
                    ChatMessage(role="assistant", content=turn.text)
                )
            else:
                self.transcript.append(
                    EVENT_LLM_TURN,
                    kind=KIND_TOOL_CALL,
                    tool=turn.tool_name,
                    arguments=turn.arguments,
                )
                self.conversation.append(
                    ChatMessage(
                        role="assistant",
                        content="",
                        tool_call=ToolCallRecord(
                            tool_call_id=turn.tool_call_id,
                            tool_name=turn.tool_name,
                            arguments=turn.arguments,
                        ),
                    )
                )
            return turn

    def run_tool_turn_result(self, turn, result) -> None:
        self.conversation.append(
            ChatMessage(role="tool", content=result.text, tool_call_id=turn.tool_call_id)
        )

    # --- stages ---

    def run(self) -> WorkflowOutcome:
        try:
            self._generation_stage()
            if not self.state.terminal:
                self._compliance_stage()
        except _HardFault as fault:
            return self._finalize(error=str(fault))
        except WorkflowBugError:
            raise
        except PacpipeError as exc:
            return self._finalize(error=str(exc))
        self._score_non_agentic_leftovers()
        self._reverify_if_done()
        return self._finalize()

    def _generation_stage(self) -> None:
        config = self.config
        context = {
            "policy_prompt": self.request.policy_prompt,
            "retrieved_context": retrieval_slot(config.ablation_mode),
        }
        if config.ablation_mode == ABLATION_RAG:
            result = self.dispatch(
                TOOL_KB_SEARCH,
                {"query": self.request.policy_prompt, "collection": "opa"},
            )
            if not result.ok:
                raise _HardFault(f"knowledge base missing: {result.text}")
            context["retrieved_context"] = retrieval_slot(
                ABLATION_RAG, result.text
            )
            self.advance(RetrievalFinished())
        self.conversation = self.prompts.render_prompts(Phase.GENERATE_RULES, context)

        kb_calls = 0
        while not self.state.terminal:
            phase = self.state.phase
            if phase == Phase.CHECK_RULES:
                check = self._check_rules()
                self.check_result = check
                if check.accepted:
                    self.advance(CheckPassed())
                    return
                self.advance(CheckFailed())
                if not self.state.terminal:
                    self.say(
                        self.prompts.render(
                            "fix_rules", {"diagnostics": _check_feedback(check)}
                        )
                    )
                    kb_calls = 0
                continue
            if phase not in (Phase.RETRIEVE_OPA, Phase.GENERATE_RULES):
                raise WorkflowBugError(f"generation stage in phase {phase.value}")

            kb_available = self.agentic and kb_calls < self.config.retrieval_budget
            offered = (TOOL_KB_SEARCH,) if kb_available else ()
            turn = self.model_turn(offered)
            if turn.kind == KIND_TOOL_CALL:
                # gateway has already checked the name against `offered`
                result = self.dispatch(turn.tool_name, turn.arguments)
                self.run_tool_turn_result(turn, result)
                kb_calls += 1
                if phase == Phase.RETRIEVE_OPA and kb_calls >= self.config.retrieval_budget:
                    self.advance(RetrievalFinished())
                    self.say(NUDGE_WRITE_RULE)
                continue
            if phase == Phase.RETRIEVE_OPA:
                self.advance(RetrievalFinished())
            self.policy_source = _extract_policy(turn.text)
            self.advance(PolicyProposed())

    def _check_rules(self) -> CheckResult:
        if self.agentic:
            result = self.dispatch(
                TOOL_RULE_CHECK, {"policy_source": self.policy_source}
            )
            return result.data
        return rule_check(self.policy_source, self.tools.oracle, self.request.policy_prompt)

    def _compliance_stage(self) -> None:
        while not self.state.terminal:
            phase = self.state.phase
            if phase == Phase.PREPROCESS:
                self._preprocess()
            elif phase == Phase.VALIDATE:
                self._validate()
            elif phase in (Phase.RETRIEVE_IAC, Phase.PATCH_INFRA):
                self._repair_iteration()
            else:
                raise WorkflowBugError(f"compliance stage in phase {phase.value}")

    def _preprocess(self) -> None:
        if self.agentic:
            result = self.dispatch(TOOL_PREPROCESS, {})
            if not result.ok:
                raise _HardFault(f"preprocessing failed: {result.text}")
        else:
            self.tools.workspace.refresh_plan()
        self.advance(PlanReady())

    def _validate(self) -> None:
        if self.agentic:
            result = self.dispatch(
                TOOL_VALIDATE, {"policy_source": self.policy_source}
            )
            verdict = result.data
            if verdict is None:
                raise _HardFault(f"validation failed: {result.text}")
        else:
            verdict = policy_validate(
                self.policy_source, self.tools.workspace.current_plan()
            )
        self.verdict = verdict
        self.advance(VerdictCompliant() if verdict.compliant else VerdictViolations())
        if self.state.phase == Phase.RETRIEVE_IAC:
            self.say(
                self.prompts.render(
                    "repair_infra",
                    {
                        "verdict_traces": _render_traces(verdict),
                        "infra_source": self.tools.workspace.infra_source(),
                        "retrieved_context": retrieval_slot(self.config.ablation_mode),
                    },
                )
            )

    def _repair_iteration(self) -> None:
        kb_calls = 0
        patch_attempts = 0
        faults = 0
        while not self.state.terminal and self.state.phase in (
            Phase.RETRIEVE_IAC, Phase.PATCH_INFRA,
        ):
            if kb_calls < self.config.retrieval_budget:
                offered = (TOOL_KB_SEARCH, TOOL_PATCH)
            else:
                offered = (TOOL_PATCH,)
            turn = self.model_turn(offered)
            if turn.kind == KIND_TEXT:
                faults += 1
                if faults > self.config.fault_retries:
                    self.advance(BudgetExhausted(STATUS_GAVE_UP))
                    return
                self.say(NUDGE_SUBMIT_PATCH)
                continue
            if turn.tool_name == TOOL_KB_SEARCH:
                result = self.dispatch(turn.tool_name, turn.arguments)
                self.run_tool_turn_result(turn, result)
                kb_calls += 1
                if (
                    self.state.phase == Phase.RETRIEVE_IAC
                    and kb_calls >= self.config.retrieval_budget
                ):
                    self.advance(RetrievalFinished())
                    self.say(NUDGE_SUBMIT_PATCH)
                continue
            # patch_infra
            if self.state.phase == Phase.RETRIEVE_IAC:
                self.advance(RetrievalFinished())
            result = self.dispatch(turn.tool_name, turn.arguments)
            self.run_tool_turn_result(turn, result)
            if result.ok:
                self.advance(PatchApplied())
                return
            patch_attempts += 1
            self.advance(PatchRejected())
            if patch_attempts >= self.config.patch_budget:
                self.advance(BudgetExhausted(STATUS_GAVE_UP))
                return
            self.say(
                self.prompts.render("retry_patch", {"diagnostics": result.text})
            )

    # --- post-run bookkeeping ---

    def _score_non_agentic_leftovers(self) -> None:
        """Fill detection stats for non-agentic runs that failed checking.

        The rule is still validated against the plan (plain library calls,
        no feedback, no tool events) so reports can score detection.
        """
        if self.agentic or self.verdict is not None:
            return
        if self.state.status != STATUS_RULE_FAILED:
            return
        check = self.check_result
        if check is None or not check.syntax_ok or self.policy_source is None:
            return
        try:
            plan = self.tools.workspace.refresh_plan()
            self.verdict = policy_validate(self.policy_source, plan)
        except PacpipeError:
            pass

    def _reverify_if_done(self) -> None:
        """Independently re-check the Done invariant on final artifacts."""
        if self.state.status != STATUS_COMPLIANT:
            return
        if self.check_result is None or not self.check_result.accepted:
            raise WorkflowBugError("Done without an accepted rule check")
        diagnostics = check_syntax(self.policy_source or "")
        if diagnostics:
            raise WorkflowBugError(f"Done with an unparsable policy: {diagnostics[0]}")
        workspace = self.tools.workspace
        if workspace.mode == MODE_EXTERNAL:
            plan = workspace.current_plan()  # avoid a second terraform run
        else:
            plan = workspace.refresh_plan()
        deny = evaluate(
            parse_policy(self.policy_source), plan.root,
            max_candidates=self.config.max_candidates,
        )
        if deny:
            raise WorkflowBugError(f"Done but re-evaluation denies: {sorted(deny)}")

    def _finalize(self, error: str | None = None) -> WorkflowOutcome:
        status = self.state.status if error is None else STATUS_ERROR
        if status is None:
            status = STATUS_ERROR
            error = error or "workflow ended without a terminal state"
        infra_source = None
        try:
            if self.tools.workspace.mode != MODE_PLAN_JSON:
                infra_source = self.tools.workspace.infra_source()
        except (PacpipeError, OSError):
            pass
        self.transcript.append(
            EVENT_OUTCOME,
            status=status,
            rule_attempts=self.state.rule_attempts,
            repair_iterations=self.state.repair_iterations,
            error=error,
        )
        return WorkflowOutcome(
            status=status,
            transcript=self.transcript,
            policy_source=self.policy_source,
            infra_source=infra_source,
            check_result=self.check_result,
            verdict=self.verdict,
            infra_modified=self.tools.workspace.modified,
            rule_attempts=self.state.rule_attempts,
            repair_iterations=self.state.repair_iterations,
            error=error,
        )


# --- helpers ---------------------------------------------------------------


def _extract_policy(text: str) -> str:
    """Strip a markdown fence if the model wrapped the rule in one."""
    body = text.strip()
    if body.startswith("```"):
        lines = body.splitlines()
        if lines[-1].strip().startswith("```"):
            lines = lines[1:-1]
        else:
            lines = lines[1:]
        body = "\n".join(lines).strip()
    return body + "\n"


def _check_feedback(check: CheckResult) -> str:
    if not check.syntax_ok:
        return "\n".join(str(d) for d in check.diagnostics)
    note = f": {check.oracle_note}" if check.oracle_note else ""
    return f"rejected by the reviewer{note}"


def _render_traces(verdict: Verdict) -> str:
    lines = []
    for trace in verdict.traces:
        lines.append(f"- rule {trace.rule_index}: {trace.message}")
        for pv in trace.paths:
            preview = json.dumps(pv.value, sort_keys=True, default=str)
            if len(preview) > _VALUE_PREVIEW_CHARS:
                preview = preview[:_VALUE_PREVIEW_CHARS] + "..."
            lines.append(f"  {pv.path} = {preview}")
    if not lines:
        lines = [f"- {m}" for m in sorted(verdict.deny_messages)]
    return "\n".join(lines)
