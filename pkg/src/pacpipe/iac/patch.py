"""Whole-file infrastructure patches with deletion protection."""

from __future__ import annotations

from ..errors import HclParseError, PatchRejectedError
from .hcl import InfraFile, parse_hcl_mini


def apply_patch(original: InfraFile, patched_source: str) -> InfraFile:
    """Validate a whole-file replacement against the original.

    The patch must parse under the mini-HCL grammar and must keep every
    resource address present in the original (additions are fine).
    Raises PatchRejectedError otherwise.
    """
    try:
        patched = parse_hcl_mini(patched_source)
    except HclParseError as exc:
        raise PatchRejectedError(
            [f"patch does not parse: {d}" for d in exc.diagnostics]
        ) from exc
    before = {b.address for b in original.blocks}
    after = {b.address for b in patched.blocks}
    removed = sorted(before - after)
    if removed:
        raise PatchRejectedError([f"resource removed: {addr}" for addr in removed])
    return patched
