"""Rego-subset parser, syntax checker, pretty-printer, and evaluator."""

from .ast import Diagnostic, PolicyDocument
from .evaluator import (
    DEFAULT_MAX_CANDIDATES, PathValue, ViolationTrace, evaluate, explain,
)
from .parser import check_syntax, parse_policy
from .printer import format_policy

__all__ = [
    "DEFAULT_MAX_CANDIDATES",
    "Diagnostic",
    "PathValue",
    "PolicyDocument",
    "ViolationTrace",
    "check_syntax",
    "evaluate",
    "explain",
    "format_policy",
    "parse_policy",
]
