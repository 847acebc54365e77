"""AST for the supported Rego subset.

The subset covers partial-set deny rules over ``input``-rooted JSON
documents: ``:=`` assignment, the six comparison operators, ``not``
prefixing, bare reference truthiness, and the ``count``/``contains``
builtins. Structural equality of nodes ignores source positions so a
document can be compared against its re-parsed pretty-printed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

COMPARISON_OPS = ("==", "!=", "<", "<=", ">", ">=")
BUILTINS = ("count", "contains")

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"


@dataclass(frozen=True)
class Pos:
    line: int  # 1-based
    col: int  # 1-based


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str
    severity: str = SEVERITY_ERROR

    def render(self, path: str) -> str:
        return f"{path}:{self.line}:{self.column}: {self.severity}: {self.message}"

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


# --- terms ---------------------------------------------------------------


@dataclass(frozen=True)
class StringLit:
    value: str
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class NumberLit:
    value: float  # int or float; ints preserved
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class BoolLit:
    value: bool
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class ArrayLit:
    items: tuple
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class Var:
    name: str
    pos: Pos = field(compare=False, default=Pos(0, 0))


# Reference segments. `.field` and `["field"]` canonicalize to KeySeg.
# A `[_]` bracket (WildSeg) is a fresh existential per occurrence.
@dataclass(frozen=True)
class KeySeg:
    key: str


@dataclass(frozen=True)
class IndexSeg:
    index: int


@dataclass(frozen=True)
class VarSeg:
    name: str


@dataclass(frozen=True)
class WildSeg:
    pass


Segment = Union[KeySeg, IndexSeg, VarSeg, WildSeg]


@dataclass(frozen=True)
class Ref:
    """A path rooted at ``input`` or at a rule-local variable."""

    root: str  # "input" or a variable name
    segments: tuple  # of Segment
    pos: Pos = field(compare=False, default=Pos(0, 0))

    @property
    def is_input_rooted(self) -> bool:
        return self.root == "input"


@dataclass(frozen=True)
class Call:
    func: str  # one of BUILTINS
    args: tuple  # of Term
    pos: Pos = field(compare=False, default=Pos(0, 0))


Term = Union[StringLit, NumberLit, BoolLit, ArrayLit, Var, Ref, Call]


# --- body expressions ----------------------------------------------------


@dataclass(frozen=True)
class AssignExpr:
    target: str
    value: Term
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class ComparisonExpr:
    op: str  # one of COMPARISON_OPS
    left: Term
    right: Term
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class TruthyExpr:
    """Bare reference/variable/builtin-call used as a condition."""

    term: Term
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class NotExpr:
    inner: Union[ComparisonExpr, TruthyExpr]
    pos: Pos = field(compare=False, default=Pos(0, 0))


Expr = Union[AssignExpr, ComparisonExpr, TruthyExpr, NotExpr]


@dataclass(frozen=True)
class DenyRule:
    head_name: str
    message: Term  # variable or literal
    body: tuple  # of Expr, non-empty
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class PolicyDocument:
    source: str = field(compare=False)
    package_name: str = ""
    rules: tuple = ()  # of DenyRule
