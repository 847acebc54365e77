"""Workflow request and configuration."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..iac.preprocess import MODE_SYNTHESIZE, MODES

ABLATION_LLM_ONLY = "llm-only"
ABLATION_RAG = "rag"
ABLATION_AGENTIC = "agentic"
ABLATIONS = (ABLATION_LLM_ONLY, ABLATION_RAG, ABLATION_AGENTIC)


@dataclass(frozen=True)
class WorkflowConfig:
    max_iterations: int = 3  # repair loops through preprocess/validate
    max_rule_retries: int = 3  # total rule generation attempts
    ablation_mode: str = ABLATION_AGENTIC
    k: int = 4
    context_budget: int = 6000
    # per-phase budgets that keep any gateway behavior bounded
    retrieval_budget: int = 4  # kb_search calls per retrieval phase
    patch_budget: int = 3  # patch attempts per repair iteration
    fault_retries: int = 2  # invalid/unexpected model turns tolerated per phase
    max_candidates: int = 1_000_000

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.max_rule_retries < 1:
            raise ValueError("max_rule_retries must be >= 1")
        if self.ablation_mode not in ABLATIONS:
            raise ValueError(
                f"unknown ablation mode {self.ablation_mode!r}; pick one of {ABLATIONS}"
            )


@dataclass(frozen=True)
class WorkflowRequest:
    policy_prompt: str
    infra_path: str
    preprocess_mode: str = MODE_SYNTHESIZE
    config: WorkflowConfig = field(default_factory=WorkflowConfig)
    terraform_bin: str = "terraform"

    def __post_init__(self):
        if not self.policy_prompt.strip():
            raise ValueError("policy_prompt must be non-empty")
        if self.preprocess_mode not in MODES:
            raise ValueError(f"unknown preprocess mode {self.preprocess_mode!r}")
