"""Prompt rendering from literal template files.

Templates live in the package's ``templates/`` directory (overridable via
a config directory) and use ``$name`` placeholders: policy_prompt,
retrieved_context, diagnostics, verdict_traces, infra_source. A missing
placeholder value is an error, not a silent blank.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from string import Template

from ..errors import PacpipeError
from ..llm.types import ChatMessage
from .config import ABLATION_AGENTIC, ABLATION_LLM_ONLY, ABLATION_RAG
from .state import Phase

TEMPLATE_NAMES = (
    "system", "generate_rules", "fix_rules", "repair_infra", "retry_patch",
)

AGENTIC_CONTEXT_HEADER = (
    "(use the kb_search tool to look up documentation before answering)"
)
EMPTY_CONTEXT = "(none)"


class PromptLibrary:
    def __init__(self, template_dir: str | Path | None = None):
        self._templates: dict[str, Template] = {}
        for name in TEMPLATE_NAMES:
            self._templates[name] = Template(_load_template(name, template_dir))

    def render(self, name: str, context: dict) -> str:
        template = self._templates.get(name)
        if template is None:
            raise PacpipeError(f"unknown prompt template {name!r}")
        try:
            return template.substitute(context)
        except KeyError as exc:
            raise PacpipeError(
                f"template {name!r}: missing placeholder value for {exc.args[0]!r}"
            ) from exc

    def system_message(self) -> ChatMessage:
        return ChatMessage(role="system", content=self.render("system", {}))

    def render_prompts(self, phase: Phase, context: dict) -> list[ChatMessage]:
        """Messages for entering ``phase``; GenerateRules includes system."""
        if phase in (Phase.RETRIEVE_OPA, Phase.GENERATE_RULES):
            user = self.render("generate_rules", context)
            return [self.system_message(), ChatMessage(role="user", content=user)]
        if phase == Phase.CHECK_RULES:
            return [ChatMessage(role="user", content=self.render("fix_rules", context))]
        if phase in (Phase.RETRIEVE_IAC, Phase.PATCH_INFRA):
            return [ChatMessage(role="user", content=self.render("repair_infra", context))]
        raise PacpipeError(f"no prompt is rendered for phase {phase.value}")


def retrieval_slot(ablation_mode: str, retrieved_context: str | None = None) -> str:
    """Fill the retrieval slot per ablation: empty, embedded, or tool header."""
    if ablation_mode == ABLATION_LLM_ONLY:
        return EMPTY_CONTEXT
    if ablation_mode == ABLATION_RAG:
        return retrieved_context if retrieved_context else EMPTY_CONTEXT
    if ablation_mode == ABLATION_AGENTIC:
        return AGENTIC_CONTEXT_HEADER
    raise PacpipeError(f"unknown ablation mode {ablation_mode!r}")


def _load_template(name: str, template_dir: str | Path | None) -> str:
    if template_dir is not None:
        path = Path(template_dir) / f"{name}.txt"
        if not path.is_file():
            raise PacpipeError(f"prompt template not found: {path}")
        return path.read_text(encoding="utf-8")
    ref = resources.files("pacpipe.orchestrator") / "templates" / f"{name}.txt"
    return ref.read_text(encoding="utf-8")
