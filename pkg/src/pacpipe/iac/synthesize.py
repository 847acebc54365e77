"""Local stand-in for `terraform plan`: plan JSON from parsed mini-HCL.

Nested blocks always become arrays of objects (repeats append in source
order), matching the shape Terraform itself emits, so policies can iterate
`values.cpu[_]` whether the plan came from here or from the real tool.
"""

from __future__ import annotations

from ..errors import PlanError
from .hcl import InfraFile
from .plan import PlanDocument, plan_from_value

SYNTHETIC_FORMAT_VERSION = "1.2"


def synthesize_plan(infra: InfraFile) -> PlanDocument:
    """Build a PlanDocument from an InfraFile; raises PlanError on duplicates."""
    resources = []
    seen: set[str] = set()
    for block in infra.blocks:
        address = block.address
        if address in seen:
            raise PlanError(f"duplicate resource address {address!r}")
        seen.add(address)
        values: dict = {}
        for attr, value in block.attributes.items():
            values[attr] = value
        for nested in block.nested:
            values.setdefault(nested.name, []).append(dict(nested.attributes))
        resources.append(
            {
                "address": address,
                "type": block.type,
                "name": block.name,
                "values": values,
            }
        )
    raw = {
        "format_version": SYNTHETIC_FORMAT_VERSION,
        "planned_values": {"root_module": {"resources": resources}},
    }
    return plan_from_value(raw)
