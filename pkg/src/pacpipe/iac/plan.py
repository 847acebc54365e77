"""Execution-plan document model and JSON ingestion.

A plan document guarantees the ``planned_values.root_module.resources``
path (normalized to an empty array when absent) while preserving the rest
of the JSON verbatim; policies evaluate against the full document root.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import PlanError
from ..jsonval import JsonValue

RESOURCES_PATH = ("planned_values", "root_module", "resources")


@dataclass(frozen=True)
class ResourceEntry:
    address: str
    type: str
    name: str
    values: dict

    def __post_init__(self):
        if not (self.address and self.type and self.name):
            raise PlanError("resource entries need non-empty address, type, and name")
        if self.address != f"{self.type}.{self.name}":
            raise PlanError(
                f"resource address {self.address!r} does not match type.name "
                f"({self.type}.{self.name}); module or count addressing is unsupported"
            )


@dataclass(frozen=True)
class PlanDocument:
    format_version: str
    root: dict = field(compare=True)
    resources: tuple = ()  # of ResourceEntry

    @property
    def addresses(self) -> tuple:
        return tuple(r.address for r in self.resources)


def parse_plan_json(text: str) -> PlanDocument:
    """Parse plan JSON; raises PlanError on a malformed document."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PlanError(f"not valid JSON: {exc}") from exc
    return plan_from_value(raw)


def plan_from_value(raw: JsonValue) -> PlanDocument:
    if not isinstance(raw, dict):
        raise PlanError("plan JSON must be an object")
    if "planned_values" not in raw:
        raise PlanError("missing planned_values")
    planned = raw["planned_values"]
    if not isinstance(planned, dict) or "root_module" not in planned:
        raise PlanError("missing root_module under planned_values")
    module = planned["root_module"]
    if not isinstance(module, dict):
        raise PlanError("root_module must be an object")
    raw_resources = module.get("resources", [])
    if raw_resources is None:
        raw_resources = []
    if not isinstance(raw_resources, list):
        raise PlanError("planned_values.root_module.resources must be an array")
    module = dict(module)
    module["resources"] = raw_resources
    planned = dict(planned)
    planned["root_module"] = module
    root = dict(raw)
    root["planned_values"] = planned

    entries = []
    for i, res in enumerate(raw_resources):
        if not isinstance(res, dict):
            raise PlanError(f"resource entry {i} must be an object")
        entries.append(
            ResourceEntry(
                address=str(res.get("address", "")),
                type=str(res.get("type", "")),
                name=str(res.get("name", "")),
                values=res.get("values", {}) if isinstance(res.get("values", {}), dict) else {},
            )
        )
    return PlanDocument(
        format_version=str(root.get("format_version", "")),
        root=root,
        resources=tuple(entries),
    )


def dump_plan(plan: PlanDocument) -> str:
    return json.dumps(plan.root, indent=2, sort_keys=True) + "\n"
