"""The five workflow tools, bound to a run's index, workspace, and oracle.

Expected failures (empty knowledge base, unparsable infrastructure,
rejected patches) come back as error text for the model to react to; the
orchestrator reads the structured ``data`` side of each result.
"""

from __future__ import annotations

from ..errors import (
    EmptyIndexError, EvaluationLimitError, HclParseError, PatchRejectedError,
    PlanError, ExternalToolError, PacpipeError,
)
from ..llm.types import ToolDescriptor
from ..rag.index import DEFAULT_K, VectorIndex
from .checks import CheckResult, Verdict, policy_validate, rule_check
from .registry import ToolFault, ToolRegistry, ToolResult
from .workspace import InfraWorkspace

DEFAULT_CONTEXT_BUDGET = 6000

TOOL_KB_SEARCH = "kb_search"
TOOL_PREPROCESS = "preprocess_infra"
TOOL_RULE_CHECK = "rule_check"
TOOL_VALIDATE = "policy_validate"
TOOL_PATCH = "patch_infra"


class PipelineTools:
    def __init__(
        self,
        index: VectorIndex | None,
        workspace: InfraWorkspace,
        oracle,
        policy_prompt: str = "",
        k: int = DEFAULT_K,
        context_budget: int = DEFAULT_CONTEXT_BUDGET,
    ):
        self.index = index
        self.workspace = workspace
        self.oracle = oracle
        self.policy_prompt = policy_prompt
        self.k = k
        self.context_budget = context_budget

    # --- handlers ---

    def kb_search(self, query: str, collection: str) -> ToolResult:
        if self.index is None:
            raise ToolFault(f"knowledge base {collection!r} is empty")
        try:
            hits = self.index.query(query, collection, self.k)
        except EmptyIndexError:
            raise ToolFault(f"knowledge base {collection!r} is empty")
        except ValueError as exc:
            raise ToolFault(str(exc))
        text = _format_hits(hits, self.context_budget)
        return ToolResult(text=text, data=hits)

    def preprocess_infra(self) -> ToolResult:
        try:
            plan = self.workspace.refresh_plan()
        except (HclParseError, PlanError, ExternalToolError, OSError) as exc:
            first = getattr(exc, "diagnostics", None)
            raise ToolFault(str(first[0]) if first else str(exc))
        lines = []
        if not plan.resources:
            lines.append("0 resources")
        else:
            lines.append(f"{len(plan.resources)} resource(s)")
            for res in plan.resources:
                keys = ", ".join(res.values.keys()) or "(no values)"
                lines.append(f"- {res.address}: {keys}")
        return ToolResult(text="\n".join(lines), data=plan)

    def rule_check(self, policy_source: str) -> ToolResult:
        result: CheckResult = rule_check(policy_source, self.oracle, self.policy_prompt)
        if not result.syntax_ok:
            text = "syntax check failed:\n" + "\n".join(
                str(d) for d in result.diagnostics
            )
            return ToolResult(text=text, ok=False, data=result)
        if result.oracle_verdict == "accepted":
            return ToolResult(text="rule accepted", data=result)
        note = f": {result.oracle_note}" if result.oracle_note else ""
        return ToolResult(text=f"rule rejected by reviewer{note}", ok=False, data=result)

    def policy_validate(self, policy_source: str) -> ToolResult:
        plan = self.workspace.current_plan()
        try:
            verdict: Verdict = policy_validate(policy_source, plan)
        except EvaluationLimitError as exc:
            raise ToolFault(f"evaluation aborted: {exc}")
        if verdict.compliant:
            return ToolResult(text="compliant: the deny set is empty", data=verdict)
        lines = ["non-compliant:"]
        for message in sorted(verdict.deny_messages):
            lines.append(f"- {message}")
        return ToolResult(text="\n".join(lines), ok=False, data=verdict)

    def patch_infra(self, new_source: str) -> ToolResult:
        try:
            self.workspace.patch(new_source)
        except PatchRejectedError as exc:
            return ToolResult(
                text="patch rejected:\n" + "\n".join(exc.reasons), ok=False, data=exc
            )
        except PacpipeError as exc:
            raise ToolFault(str(exc))
        return ToolResult(text="patch applied", data=True)

    # --- registry ---

    def build_registry(self) -> ToolRegistry:
        registry = ToolRegistry()
        registry.register(
            ToolDescriptor(
                name=TOOL_KB_SEARCH,
                description=(
                    "Search the knowledge base. Collection 'opa' holds policy-language "
                    "documentation, 'iac' holds infrastructure documentation."
                ),
                parameters={
                    "type": "object",
                    "properties": {
                        "query": {"type": "string"},
                        "collection": {"type": "string", "enum": ["opa", "iac"]},
                    },
                    "required": ["query", "collection"],
                    "additionalProperties": False,
                },
            ),
            self.kb_search,
        )
        registry.register(
            ToolDescriptor(
                name=TOOL_PREPROCESS,
                description="Preprocess the infrastructure file into an execution plan.",
                parameters={
                    "type": "object",
                    "properties": {},
                    "additionalProperties": False,
                },
            ),
            self.preprocess_infra,
        )
        registry.register(
            ToolDescriptor(
                name=TOOL_RULE_CHECK,
                description="Syntax-check a generated rule and submit it for review.",
                parameters={
                    "type": "object",
                    "properties": {"policy_source": {"type": "string"}},
                    "required": ["policy_source"],
                    "additionalProperties": False,
                },
            ),
            self.rule_check,
        )
        registry.register(
            ToolDescriptor(
                name=TOOL_VALIDATE,
                description="Validate the current execution plan against a policy.",
                parameters={
                    "type": "object",
                    "properties": {"policy_source": {"type": "string"}},
                    "required": ["policy_source"],
                    "additionalProperties": False,
                },
            ),
            self.policy_validate,
        )
        registry.register(
            ToolDescriptor(
                name=TOOL_PATCH,
                description=(
                    "Replace the infrastructure file with a corrected whole-file "
                    "version. Existing resources must be kept."
                ),
                parameters={
                    "type": "object",
                    "properties": {"new_source": {"type": "string"}},
                    "required": ["new_source"],
                    "additionalProperties": False,
                },
            ),
            self.patch_infra,
        )
        return registry


def _format_hits(hits, context_budget: int) -> str:
    """Join hit bodies under source headers, trimming lowest-ranked first."""
    sections = []
    for rank, hit in enumerate(hits, start=1):
        header = f"[{rank}] {hit.chunk.doc_path} (score {hit.score:.4f})"
        sections.append(f"{header}\n{hit.chunk.body}")
    while sections:
        total = sum(len(s) for s in sections) + 2 * (len(sections) - 1)
        if total <= context_budget:
            break
        overflow = total - context_budget
        last = sections[-1]
        if len(last) - overflow < 80:  # not worth keeping a sliver
            sections.pop()
        else:
            sections[-1] = last[: len(last) - overflow]
    return "\n\n".join(sections)
