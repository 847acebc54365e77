"""Canonical pretty-printer for parsed policies.

The printed form stays inside the supported subset, so a printed document
re-parses to a structurally equal AST (round-trip stability).
"""

from __future__ import annotations

import json
import re

from .ast import (
    ArrayLit, AssignExpr, BoolLit, Call, ComparisonExpr, DenyRule,
    IndexSeg, KeySeg, NotExpr, NumberLit, PolicyDocument, Ref, StringLit,
    TruthyExpr, Var, VarSeg, WildSeg,
)

_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def format_policy(doc: PolicyDocument) -> str:
    parts = [f"package {doc.package_name}"]
    for rule in doc.rules:
        parts.append("")
        parts.append(format_rule(rule))
    return "\n".join(parts) + "\n"


def format_rule(rule: DenyRule) -> str:
    lines = [f"{rule.head_name}[{format_term(rule.message)}] if {{"]
    for expr in rule.body:
        lines.append(f"    {format_expr(expr)}")
    lines.append("}")
    return "\n".join(lines)


def format_expr(expr) -> str:
    if isinstance(expr, AssignExpr):
        return f"{expr.target} := {format_term(expr.value)}"
    if isinstance(expr, ComparisonExpr):
        return f"{format_term(expr.left)} {expr.op} {format_term(expr.right)}"
    if isinstance(expr, TruthyExpr):
        return format_term(expr.term)
    if isinstance(expr, NotExpr):
        return f"not {format_expr(expr.inner)}"
    raise TypeError(f"not an expression: {expr!r}")


def format_term(term) -> str:
    if isinstance(term, StringLit):
        return json.dumps(term.value)
    if isinstance(term, NumberLit):
        return _format_number(term.value)
    if isinstance(term, BoolLit):
        return "true" if term.value else "false"
    if isinstance(term, ArrayLit):
        return "[" + ", ".join(format_term(t) for t in term.items) + "]"
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Ref):
        out = [term.root]
        for seg in term.segments:
            if isinstance(seg, KeySeg):
                if _IDENT_RE.match(seg.key):
                    out.append(f".{seg.key}")
                else:
                    out.append(f"[{json.dumps(seg.key)}]")
            elif isinstance(seg, IndexSeg):
                out.append(f"[{seg.index}]")
            elif isinstance(seg, VarSeg):
                out.append(f"[{seg.name}]")
            elif isinstance(seg, WildSeg):
                out.append("[_]")
            else:
                raise TypeError(f"not a segment: {seg!r}")
        return "".join(out)
    if isinstance(term, Call):
        return f"{term.func}({', '.join(format_term(a) for a in term.args)})"
    raise TypeError(f"not a term: {term!r}")


def _format_number(v) -> str:
    if isinstance(v, int):
        return str(v)
    if float(v).is_integer():
        return f"{v:.1f}"
    return repr(v)
