"""Rule checking and policy validation.

``rule_check`` gates the oracle behind the syntax check: the oracle is
consulted only for syntactically valid rules. ``policy_validate`` assumes
a syntax-checked policy (the caller enforces it) and produces the Verdict
the workflow branches on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import WorkflowBugError
from ..iac.plan import PlanDocument
from ..rego import check_syntax, evaluate, explain, parse_policy
from .oracle import VERDICT_ACCEPTED, OracleDecision

ORACLE_NOT_CONSULTED = "not-consulted"


@dataclass(frozen=True)
class CheckResult:
    syntax_ok: bool
    diagnostics: tuple = ()
    oracle_verdict: str = ORACLE_NOT_CONSULTED  # accepted | rejected | not-consulted
    oracle_note: str | None = None

    @property
    def accepted(self) -> bool:
        return self.syntax_ok and self.oracle_verdict == VERDICT_ACCEPTED


@dataclass(frozen=True)
class Verdict:
    compliant: bool
    deny_messages: frozenset = frozenset()
    traces: tuple = ()

    def __post_init__(self):
        if self.compliant != (len(self.deny_messages) == 0):
            raise WorkflowBugError("verdict: compliant must mirror an empty deny set")


def rule_check(policy_source: str, oracle, policy_prompt: str = "") -> CheckResult:
    """Syntax-check a rule and, when clean, ask the oracle about it."""
    diagnostics = check_syntax(policy_source)
    if diagnostics:
        return CheckResult(syntax_ok=False, diagnostics=tuple(diagnostics))
    decision: OracleDecision = oracle.decide(policy_source, policy_prompt)
    return CheckResult(
        syntax_ok=True,
        oracle_verdict=decision.verdict,
        oracle_note=decision.note,
    )


def policy_validate(policy_source: str, plan: PlanDocument) -> Verdict:
    """Evaluate a (pre-checked) policy against a plan document."""
    diagnostics = check_syntax(policy_source)
    if diagnostics:
        raise WorkflowBugError(
            f"policy_validate called with an unchecked policy: {diagnostics[0]}"
        )
    policy = parse_policy(policy_source)
    deny = evaluate(policy, plan.root)
    traces = explain(policy, plan.root)
    return Verdict(
        compliant=not deny,
        deny_messages=frozenset(deny),
        traces=tuple(traces),
    )
