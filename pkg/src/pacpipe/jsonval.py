"""Helpers over plain-Python JSON values.

A JSON value is represented directly as ``None | bool | int | float | str |
list | dict`` (string keys). Numbers keep their parsed type so integers
survive round-trips, but all comparisons treat ints and floats as one
numeric domain. Booleans are never numbers here, unlike raw Python.
"""

from __future__ import annotations

from typing import Union

JsonValue = Union[None, bool, int, float, str, list, dict]


def is_number(v: JsonValue) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def json_type_name(v: JsonValue) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "boolean"
    if is_number(v):
        return "number"
    if isinstance(v, str):
        return "string"
    if isinstance(v, list):
        return "array"
    if isinstance(v, dict):
        return "object"
    raise TypeError(f"not a JSON value: {type(v)!r}")


def values_equal(a: JsonValue, b: JsonValue) -> bool:
    """Deep equality with int/float unification and strict bool typing.

    ``4 == 4.0`` holds; ``True == 1`` does not. Object key order is
    irrelevant. Values of different JSON types are never equal.
    """
    ta, tb = json_type_name(a), json_type_name(b)
    if ta != tb:
        return False
    if ta == "number":
        return float(a) == float(b)
    if ta == "array":
        return len(a) == len(b) and all(
            values_equal(x, y) for x, y in zip(a, b)
        )
    if ta == "object":
        if a.keys() != b.keys():
            return False
        return all(values_equal(a[k], b[k]) for k in a)
    return a == b


def compare_numbers(a: JsonValue, b: JsonValue, op: str) -> bool:
    """Ordering comparison; both operands must already be numbers."""
    fa, fb = float(a), float(b)
    if op == "<":
        return fa < fb
    if op == "<=":
        return fa <= fb
    if op == ">":
        return fa > fb
    if op == ">=":
        return fa >= fb
    raise ValueError(f"not an ordering operator: {op}")


def compare_strings(a: str, b: str, op: str) -> bool:
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    raise ValueError(f"not an ordering operator: {op}")


def is_truthy(v: JsonValue) -> bool:
    """Rule-body truthiness: every defined value except ``false``."""
    return not (isinstance(v, bool) and v is False)
