"""Exception hierarchy shared across the package."""

from __future__ import annotations


class PacpipeError(Exception):
    """Base class for all package-specific errors."""


class PolicyParseError(PacpipeError):
    """Raised when policy source cannot be parsed into a document.

    Carries the positioned diagnostics that explain the failure.
    """

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else None
        super().__init__(str(first) if first else "policy parse error")


class EvaluationLimitError(PacpipeError):
    """Candidate-binding budget exceeded while evaluating a rule."""

    def __init__(self, rule_index: int, limit: int):
        self.rule_index = rule_index
        self.limit = limit
        super().__init__(
            f"rule {rule_index}: exceeded {limit} candidate bindings"
        )


class HclParseError(PacpipeError):
    """Raised when mini-HCL source cannot be parsed. Carries diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else None
        super().__init__(str(first) if first else "HCL parse error")


class PlanError(PacpipeError):
    """Execution-plan JSON is malformed or violates the plan shape."""


class PatchRejectedError(PacpipeError):
    """An infrastructure patch was rejected; reasons listed in .reasons."""

    def __init__(self, reasons):
        self.reasons = list(reasons)
        super().__init__("; ".join(str(r) for r in self.reasons))


class ExternalToolError(PacpipeError):
    """An external executable (terraform) is missing or failed."""


class KnowledgeBaseError(PacpipeError):
    """Base for retrieval-store failures."""


class EmptyIndexError(KnowledgeBaseError):
    """Query against a collection with no indexed chunks."""


class IndexFormatError(KnowledgeBaseError):
    """Persisted index file is corrupt or has an unsupported version."""


class EmbeddingError(KnowledgeBaseError):
    """Embedding backend failed; .retriable marks transport-level faults."""

    def __init__(self, message: str, retriable: bool = False):
        self.retriable = retriable
        super().__init__(message)


class GatewayError(PacpipeError):
    """Base for LLM gateway failures."""


class TransportError(GatewayError):
    """HTTP-level failure (connect/timeout); retried with backoff."""


class InvalidToolCallError(GatewayError):
    """Model emitted a tool call that fails gateway-side validation.

    Surfaced to the orchestrator as a retriable model fault.
    """


class ScriptError(GatewayError):
    """Scripted backend could not load or replay its script."""


class ScriptExhaustedError(ScriptError):
    """No scripted entries left, or the next entry does not match."""


class OracleUnavailableError(PacpipeError):
    """Interactive oracle requested outside a TTY context."""


class WorkflowBugError(PacpipeError):
    """Illegal orchestrator transition; indicates a bug, never model fault."""
