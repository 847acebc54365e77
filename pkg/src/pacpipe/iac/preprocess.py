"""Plan acquisition: synthesize locally, pass plan JSON through, or shell
out to a real terraform binary.

The normalized plan is cached as JSON next to the input file so repeated
runs (and external inspection) see exactly what the policies evaluated.
"""

from __future__ import annotations

import shutil
import subprocess
import threading
from collections import defaultdict
from pathlib import Path

from ..errors import ExternalToolError, HclParseError, PlanError
from .hcl import parse_hcl_mini
from .plan import PlanDocument, dump_plan, parse_plan_json
from .synthesize import synthesize_plan

MODE_SYNTHESIZE = "synthesize"
MODE_EXTERNAL = "external-terraform"
MODE_PLAN_JSON = "plan-json"
MODES = (MODE_SYNTHESIZE, MODE_EXTERNAL, MODE_PLAN_JSON)

CACHE_SUFFIX = ".plan-cache.json"

# one `terraform plan` at a time per working directory
_dir_locks: dict = defaultdict(threading.Lock)
_dir_locks_guard = threading.Lock()


def _lock_for(directory: Path) -> threading.Lock:
    with _dir_locks_guard:
        return _dir_locks[str(directory.resolve())]


def cache_path(input_path: Path) -> Path:
    return input_path.with_name(input_path.name + CACHE_SUFFIX)


def preprocess(
    input_path: str | Path,
    mode: str = MODE_SYNTHESIZE,
    terraform_bin: str = "terraform",
    write_cache: bool = True,
) -> PlanDocument:
    """Produce the PlanDocument for an infrastructure or plan file."""
    path = Path(input_path)
    if mode not in MODES:
        raise ValueError(f"unknown preprocess mode {mode!r}; pick one of {MODES}")
    if not path.exists():
        raise FileNotFoundError(f"input file not found: {path}")

    if mode == MODE_PLAN_JSON:
        plan = parse_plan_json(path.read_text(encoding="utf-8"))
    elif mode == MODE_SYNTHESIZE:
        infra = parse_hcl_mini(path.read_text(encoding="utf-8"))
        plan = synthesize_plan(infra)
    else:
        plan = _external_plan(path, terraform_bin)

    if write_cache and not path.name.endswith(CACHE_SUFFIX):
        try:
            cache_path(path).write_text(dump_plan(plan), encoding="utf-8")
        except OSError:
            pass  # caching is best-effort
    return plan


def _external_plan(path: Path, terraform_bin: str) -> PlanDocument:
    exe = shutil.which(terraform_bin)
    if exe is None:
        raise ExternalToolError(
            f"external tool unavailable: {terraform_bin!r} not found on PATH; "
            "use synthesize or plan-json mode"
        )
    workdir = path.parent
    with _lock_for(workdir):
        _run_terraform([exe, "init", "-input=false", "-no-color"], workdir)
        _run_terraform(
            [exe, "plan", "-input=false", "-no-color", "-out=pacpipe.tfplan"], workdir
        )
        show = _run_terraform([exe, "show", "-json", "pacpipe.tfplan"], workdir)
    try:
        return parse_plan_json(show)
    except PlanError as exc:
        raise ExternalToolError(f"terraform produced an unusable plan: {exc}") from exc


def _run_terraform(argv: list, workdir: Path) -> str:
    try:
        proc = subprocess.run(
            argv, cwd=str(workdir), capture_output=True, text=True, timeout=300
        )
    except (OSError, subprocess.TimeoutExpired) as exc:
        raise ExternalToolError(f"failed to run {argv[0]}: {exc}") from exc
    if proc.returncode != 0:
        tail = (proc.stderr or proc.stdout).strip().splitlines()[-5:]
        raise ExternalToolError(
            f"{' '.join(argv[1:])} failed (exit {proc.returncode}): " + " / ".join(tail)
        )
    return proc.stdout
