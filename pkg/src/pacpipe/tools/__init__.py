"""Workflow tools: registry, oracle modes, workspace, and handlers."""

from .checks import CheckResult, ORACLE_NOT_CONSULTED, Verdict, policy_validate, rule_check
from .oracle import (
    AutoAcceptOracle, FileOracle, InteractiveOracle, OracleDecision,
    VERDICT_ACCEPTED, VERDICT_REJECTED, oracle_from_spec, policy_hash,
)
from .pipeline import (
    DEFAULT_CONTEXT_BUDGET, PipelineTools, TOOL_KB_SEARCH, TOOL_PATCH,
    TOOL_PREPROCESS, TOOL_RULE_CHECK, TOOL_VALIDATE,
)
from .registry import ToolFault, ToolRegistry, ToolResult
from .workspace import InfraWorkspace

__all__ = [
    "AutoAcceptOracle",
    "CheckResult",
    "DEFAULT_CONTEXT_BUDGET",
    "FileOracle",
    "InfraWorkspace",
    "InteractiveOracle",
    "ORACLE_NOT_CONSULTED",
    "OracleDecision",
    "PipelineTools",
    "TOOL_KB_SEARCH",
    "TOOL_PATCH",
    "TOOL_PREPROCESS",
    "TOOL_RULE_CHECK",
    "TOOL_VALIDATE",
    "ToolFault",
    "ToolRegistry",
    "ToolResult",
    "VERDICT_ACCEPTED",
    "VERDICT_REJECTED",
    "Verdict",
    "oracle_from_spec",
    "policy_hash",
    "policy_validate",
    "rule_check",
]
