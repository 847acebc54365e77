"""Rule-checker oracle: the accept/reject decision on a generated rule.

Three modes: an interactive terminal prompt for real use, a decisions file
keyed by policy hash for reproducible runs, and auto-accept for tests. The
oracle always sees the originating natural-language prompt alongside the
rule, since judging semantic fit requires both.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from ..errors import OracleUnavailableError, PacpipeError

VERDICT_ACCEPTED = "accepted"
VERDICT_REJECTED = "rejected"


@dataclass(frozen=True)
class OracleDecision:
    verdict: str  # accepted | rejected
    note: str | None = None


def policy_hash(policy_source: str) -> str:
    return hashlib.sha256(policy_source.encode("utf-8")).hexdigest()


class AutoAcceptOracle:
    mode = "auto"

    def decide(self, policy_source: str, policy_prompt: str) -> OracleDecision:
        return OracleDecision(VERDICT_ACCEPTED)


class FileOracle:
    """Looks up verdicts in a JSON map of sha256(policy) -> {verdict, note}."""

    mode = "file"

    def __init__(self, path: str | Path):
        self.path = Path(path)
        try:
            raw = json.loads(self.path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise PacpipeError(f"cannot load oracle decisions {self.path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise PacpipeError(f"{self.path}: decisions file must be a JSON object")
        self.decisions = raw

    def decide(self, policy_source: str, policy_prompt: str) -> OracleDecision:
        key = policy_hash(policy_source)
        entry = self.decisions.get(key)
        if entry is None:
            return OracleDecision(
                VERDICT_REJECTED, f"no recorded decision for policy hash {key[:12]}"
            )
        verdict = entry.get("verdict", VERDICT_REJECTED)
        if verdict not in (VERDICT_ACCEPTED, VERDICT_REJECTED):
            raise PacpipeError(f"{self.path}: bad verdict {verdict!r} for {key[:12]}")
        return OracleDecision(verdict, entry.get("note"))


class InteractiveOracle:
    mode = "interactive"

    def __init__(self, stdin=None, stdout=None):
        self._stdin = stdin if stdin is not None else sys.stdin
        self._stdout = stdout if stdout is not None else sys.stdout

    def decide(self, policy_source: str, policy_prompt: str) -> OracleDecision:
        if not getattr(self._stdin, "isatty", lambda: False)():
            raise OracleUnavailableError(
                "interactive oracle needs a terminal; use --oracle file:PATH or auto"
            )
        w = self._stdout.write
        w("\n--- rule check ---\n")
        w(f"policy prompt: {policy_prompt}\n\n{policy_source}\n")
        while True:
            w("accept this rule? [y/n] ")
            self._stdout.flush()
            answer = self._stdin.readline().strip().lower()
            if answer in ("y", "yes"):
                return OracleDecision(VERDICT_ACCEPTED)
            if answer in ("n", "no"):
                w("reason (optional): ")
                self._stdout.flush()
                note = self._stdin.readline().strip() or None
                return OracleDecision(VERDICT_REJECTED, note)


def oracle_from_spec(spec: str):
    """Parse an oracle spec: ``auto``, ``interactive``, or ``file:PATH``."""
    if spec == "auto":
        return AutoAcceptOracle()
    if spec == "interactive":
        return InteractiveOracle()
    if spec.startswith("file:"):
        return FileOracle(spec[len("file:"):])
    raise ValueError(f"unknown oracle spec {spec!r}; use interactive, auto, or file:PATH")
