"""Deterministic evaluator for parsed deny-rule policies.

Evaluation enumerates candidate variable bindings per rule, left to right
over the body expressions. Reference brackets drive the search: ``[_]``
iterates a container without binding, ``[v]`` iterates and binds ``v`` (or
looks it up when already bound). A rule contributes its message for every
satisfying binding; the deny set collapses duplicates.

Failure semantics follow partial-set evaluation: a missing path or a
type-mismatched comparison silently fails the candidate binding instead of
raising. The only runtime error is the candidate budget (default one
million bindings per rule), a guard against pathological documents.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .ast import (
    ArrayLit, AssignExpr, BoolLit, Call, ComparisonExpr, DenyRule,
    IndexSeg, KeySeg, NotExpr, NumberLit, PolicyDocument, Ref, StringLit,
    TruthyExpr, Var, VarSeg, WildSeg,
)
from ..errors import EvaluationLimitError
from ..jsonval import (
    JsonValue, compare_numbers, compare_strings, is_number, is_truthy,
    values_equal,
)

DEFAULT_MAX_CANDIDATES = 1_000_000

_IDENT_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")


@dataclass(frozen=True)
class PathValue:
    """A concrete input path dereferenced by a satisfying binding."""

    path: str
    value: JsonValue


@dataclass(frozen=True)
class ViolationTrace:
    rule_index: int
    message: str
    bindings: dict = field(default_factory=dict)  # var name -> value
    paths: tuple = ()  # of PathValue, in dereference order


@dataclass
class _Bound:
    value: JsonValue
    path: tuple | None  # concrete input path segments, when known


class _Budget:
    def __init__(self, rule_index: int, limit: int):
        self.rule_index = rule_index
        self.limit = limit
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise EvaluationLimitError(self.rule_index, self.limit)


def evaluate(
    policy: PolicyDocument,
    input_doc: JsonValue,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> set[str]:
    """Return the deny set: one message per satisfiable (rule, binding)."""
    messages: set[str] = set()
    for index, rule in enumerate(policy.rules):
        budget = _Budget(index, max_candidates)
        for env, _paths in _rule_candidates(rule, input_doc, budget):
            messages.add(_message_text(rule.message, env))
    return messages


def explain(
    policy: PolicyDocument,
    input_doc: JsonValue,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> list[ViolationTrace]:
    """One trace per satisfied (rule, binding), in enumeration order."""
    traces: list[ViolationTrace] = []
    seen: set[str] = set()
    for index, rule in enumerate(policy.rules):
        budget = _Budget(index, max_candidates)
        for env, paths in _rule_candidates(rule, input_doc, budget):
            trace = ViolationTrace(
                rule_index=index,
                message=_message_text(rule.message, env),
                bindings={name: b.value for name, b in env.items()},
                paths=tuple(PathValue(p, v) for p, v in paths),
            )
            key = json.dumps(
                [trace.rule_index, trace.message,
                 sorted(trace.bindings), [(pv.path) for pv in trace.paths]],
                sort_keys=True, default=str,
            )
            if key not in seen:
                seen.add(key)
                traces.append(trace)
    return traces


# --- rule machinery --------------------------------------------------------


def _rule_candidates(rule: DenyRule, doc: JsonValue, budget: _Budget):
    candidates = [({}, ())]
    for expr in rule.body:
        nxt = []
        for env, paths in candidates:
            nxt.extend(_expand_expr(expr, env, paths, doc, budget))
        candidates = nxt
        if not candidates:
            return []
    return candidates


def _expand_expr(expr, env, paths, doc, budget):
    if isinstance(expr, AssignExpr):
        for value, path, env2 in _resolve_term(expr.value, env, doc, budget):
            budget.tick()
            env3 = dict(env2)
            env3[expr.target] = _Bound(value, path)
            yield env3, _note_path(paths, path, value)
    elif isinstance(expr, ComparisonExpr):
        for lv, lp, env2 in _resolve_term(expr.left, env, doc, budget):
            for rv, rp, env3 in _resolve_term(expr.right, env2, doc, budget):
                budget.tick()
                if _compare(expr.op, lv, rv):
                    out = _note_path(paths, lp, lv)
                    out = _note_path(out, rp, rv)
                    yield env3, out
    elif isinstance(expr, TruthyExpr):
        for value, path, env2 in _resolve_term(expr.term, env, doc, budget):
            budget.tick()
            if is_truthy(value):
                yield env2, _note_path(paths, path, value)
    elif isinstance(expr, NotExpr):
        budget.tick()
        for _ in _expand_expr(expr.inner, env, paths, doc, budget):
            return  # inner succeeded for some binding: negation fails
        yield env, paths
    else:  # pragma: no cover - parser emits only the above
        raise TypeError(f"not an expression: {expr!r}")


def _compare(op: str, a: JsonValue, b: JsonValue) -> bool:
    """Comparison with fail-on-type-mismatch semantics.

    ``==`` and ``!=`` require like types (ints and floats unify); ordering
    operators accept two numbers or two strings. Anything else fails the
    candidate binding rather than erroring.
    """
    if op == "==":
        return values_equal(a, b)
    if op == "!=":
        if not _same_type(a, b):
            return False
        return not values_equal(a, b)
    if is_number(a) and is_number(b):
        return compare_numbers(a, b, op)
    if isinstance(a, str) and isinstance(b, str):
        return compare_strings(a, b, op)
    return False


def _same_type(a: JsonValue, b: JsonValue) -> bool:
    if is_number(a) and is_number(b):
        return True
    kinds = (
        (type(None), type(None)), (bool, bool), (str, str),
        (list, list), (dict, dict),
    )
    return any(isinstance(a, ka) and isinstance(b, kb) for ka, kb in kinds) and (
        isinstance(a, bool) == isinstance(b, bool)
    )


# --- term resolution --------------------------------------------------------


def _resolve_term(term, env, doc, budget):
    """Yield (value, input_path_or_None, possibly-extended env) triples."""
    if isinstance(term, (StringLit, NumberLit, BoolLit)):
        yield term.value, None, env
    elif isinstance(term, ArrayLit):
        yield _literal_value(term), None, env
    elif isinstance(term, Var):
        bound = env.get(term.name)
        if bound is not None:
            yield bound.value, bound.path, env
    elif isinstance(term, Ref):
        yield from _resolve_ref(term, env, doc, budget)
    elif isinstance(term, Call):
        yield from _resolve_call(term, env, doc, budget)
    else:  # pragma: no cover
        raise TypeError(f"not a term: {term!r}")


def _literal_value(term) -> JsonValue:
    if isinstance(term, ArrayLit):
        return [_literal_value(t) for t in term.items]
    return term.value


def _resolve_ref(ref: Ref, env, doc, budget):
    if ref.root == "input":
        states = [(doc, (), env)]
    else:
        bound = env.get(ref.root)
        if bound is None:
            return
        states = [(bound.value, bound.path, env)]
    for seg in ref.segments:
        nxt = []
        for value, path, cur_env in states:
            for child, part, env2 in _step_segment(seg, value, cur_env):
                budget.tick()
                nxt.append((child, _extend_path(path, part), env2))
        states = nxt
        if not states:
            return
    yield from states


def _step_segment(seg, value, env):
    """Yield (child value, path part or None, env) for one path segment."""
    if isinstance(seg, KeySeg):
        if isinstance(value, dict) and seg.key in value:
            yield value[seg.key], seg.key, env
    elif isinstance(seg, IndexSeg):
        if isinstance(value, list) and 0 <= seg.index < len(value):
            yield value[seg.index], seg.index, env
    elif isinstance(seg, WildSeg):
        if isinstance(value, list):
            for i, item in enumerate(value):
                yield item, i, env
        elif isinstance(value, dict):
            for k in value:
                yield value[k], k, env
    elif isinstance(seg, VarSeg):
        bound = env.get(seg.name)
        if bound is not None:
            key = bound.value
            if isinstance(value, list) and is_number(key) and float(key).is_integer():
                i = int(key)
                if 0 <= i < len(value):
                    yield value[i], i, env
            elif isinstance(value, dict) and isinstance(key, str) and key in value:
                yield value[key], key, env
        else:
            if isinstance(value, list):
                for i, item in enumerate(value):
                    env2 = dict(env)
                    env2[seg.name] = _Bound(i, None)
                    yield item, i, env2
            elif isinstance(value, dict):
                for k in value:
                    env2 = dict(env)
                    env2[seg.name] = _Bound(k, None)
                    yield value[k], k, env2
    else:  # pragma: no cover
        raise TypeError(f"not a segment: {seg!r}")


def _resolve_call(call: Call, env, doc, budget):
    if len(call.args) == 1:
        for value, _path, env2 in _resolve_term(call.args[0], env, doc, budget):
            result = _apply_builtin(call.func, (value,))
            if result is not _UNDEFINED:
                yield result, None, env2
    else:
        for a, _pa, env2 in _resolve_term(call.args[0], env, doc, budget):
            for b, _pb, env3 in _resolve_term(call.args[1], env2, doc, budget):
                result = _apply_builtin(call.func, (a, b))
                if result is not _UNDEFINED:
                    yield result, None, env3


_UNDEFINED = object()


def _apply_builtin(func: str, args: tuple):
    if func == "count":
        (v,) = args
        if isinstance(v, (list, dict, str)):
            return len(v)
        return _UNDEFINED
    if func == "contains":
        haystack, needle = args
        if isinstance(haystack, str) and isinstance(needle, str):
            return needle in haystack
        return _UNDEFINED
    raise TypeError(f"unknown builtin {func!r}")  # pragma: no cover


# --- paths and messages ------------------------------------------------------


def _extend_path(path, part):
    if path is None:
        return None
    return path + (part,)


def _note_path(paths, path, value):
    if path is None or len(path) == 0:
        return paths
    rendered = _render_path(path)
    if any(p == rendered for p, _v in paths):
        return paths
    return paths + ((rendered, value),)


def _render_path(path: tuple) -> str:
    out: list[str] = []
    for part in path:
        if isinstance(part, int):
            out.append(f"[{part}]")
        elif set(part) <= _IDENT_CHARS and part and not part[0].isdigit():
            out.append(f".{part}" if out else part)
        else:
            out.append(f"[{json.dumps(part)}]")
    return "".join(out)


def _message_text(message, env) -> str:
    if isinstance(message, Var):
        value = env[message.name].value
    else:
        value = _literal_value(message)
    if isinstance(value, str):
        return value
    return json.dumps(value, sort_keys=True)
