"""Infrastructure model: mini-HCL, plan JSON, synthesis, patching."""

from .hcl import InfraFile, NestedBlock, ResourceBlock, check_hcl, parse_hcl_mini
from .patch import apply_patch
from .plan import PlanDocument, ResourceEntry, dump_plan, parse_plan_json, plan_from_value
from .preprocess import (
    MODE_EXTERNAL, MODE_PLAN_JSON, MODE_SYNTHESIZE, MODES, cache_path, preprocess,
)
from .synthesize import synthesize_plan

__all__ = [
    "InfraFile",
    "MODE_EXTERNAL",
    "MODE_PLAN_JSON",
    "MODE_SYNTHESIZE",
    "MODES",
    "NestedBlock",
    "PlanDocument",
    "ResourceBlock",
    "ResourceEntry",
    "apply_patch",
    "cache_path",
    "check_hcl",
    "dump_plan",
    "parse_hcl_mini",
    "parse_plan_json",
    "plan_from_value",
    "preprocess",
    "synthesize_plan",
]
