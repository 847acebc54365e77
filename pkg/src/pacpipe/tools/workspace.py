"""Per-run infrastructure workspace: the documented file/plan cache.

Handlers stay stateless apart from this object. It owns the current
InfraFile, the current PlanDocument, and the patch protocol: accepted
patches are written atomically (temp file + rename) with a ``.bak`` of the
original preserved, and the cached plan is invalidated so the workflow is
forced back through preprocessing.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

from ..errors import PacpipeError
from ..iac.hcl import InfraFile, parse_hcl_mini
from ..iac.patch import apply_patch
from ..iac.plan import PlanDocument
from ..iac.preprocess import MODE_PLAN_JSON, MODES, cache_path, preprocess


class InfraWorkspace:
    def __init__(self, infra_path: str | Path, mode: str, terraform_bin: str = "terraform"):
        if mode not in MODES:
            raise ValueError(f"unknown preprocess mode {mode!r}")
        self.infra_path = Path(infra_path)
        self.mode = mode
        self.terraform_bin = terraform_bin
        self.infra: InfraFile | None = None
        self.plan: PlanDocument | None = None
        self.patches_applied = 0

    @property
    def modified(self) -> bool:
        return self.patches_applied > 0

    def load_infra(self) -> InfraFile | None:
        """Parse the infrastructure file; None in plan-json mode."""
        if self.mode == MODE_PLAN_JSON:
            return None
        if self.infra is None:
            self.infra = parse_hcl_mini(self.infra_path.read_text(encoding="utf-8"))
        return self.infra

    def infra_source(self) -> str:
        if self.mode == MODE_PLAN_JSON:
            raise PacpipeError("no infrastructure source in plan-json mode")
        return self.infra_path.read_text(encoding="utf-8")

    def refresh_plan(self) -> PlanDocument:
        self.load_infra()
        self.plan = preprocess(self.infra_path, self.mode, self.terraform_bin)
        return self.plan

    def current_plan(self) -> PlanDocument:
        if self.plan is None:
            return self.refresh_plan()
        return self.plan

    def patch(self, new_source: str) -> InfraFile:
        """Validate and apply a whole-file patch; raises PatchRejectedError."""
        if self.mode == MODE_PLAN_JSON:
            raise PacpipeError("cannot patch infrastructure in plan-json mode")
        original = self.load_infra()
        patched = apply_patch(original, new_source)
        self._write_atomic(new_source)
        self.infra = patched
        self.plan = None  # force re-preprocess
        cache = cache_path(self.infra_path)
        if cache.exists():
            try:
                cache.unlink()
            except OSError:
                pass
        self.patches_applied += 1
        return patched

    def _write_atomic(self, new_source: str) -> None:
        backup = self.infra_path.with_name(self.infra_path.name + ".bak")
        if not backup.exists():
            backup.write_text(
                self.infra_path.read_text(encoding="utf-8"), encoding="utf-8"
            )
        fd, tmp_name = tempfile.mkstemp(
            dir=str(self.infra_path.parent), prefix=self.infra_path.name, suffix=".tmp"
        )
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(new_source)
            os.replace(tmp_name, self.infra_path)
        except OSError:
            try:
                os.unlink(tmp_name)
            except OSError:
                pass
            raise
