from __future__ import annotations

import time
from typing import Any, Dict, Optional

STATUSES = ("queued", "running", "done", "error")


# -------------------------
# Registry of background check runs
# -------------------------
class RunRegistry:
    def __init__(self, max_runs: int = 256):
        self.runs: Dict[str, Dict[str, Any]] = {}
        self.max_runs = max_runs

    def export(self) -> Dict[str, Any]:
        return {"runs": [self._summary(r) for r in self.runs.values()]}

    @staticmethod
    def _summary(run: Dict[str, Any]) -> Dict[str, Any]:
        return {k: run.get(k) for k in ("run_id", "status", "instance", "framework", "mode", "created")}

    def add_run(self, run_id: str, instance: str, framework: str, mode: str) -> Dict[str, Any]:
        """Store a queued run; the oldest finished runs are dropped beyond max_runs."""
        while len(self.runs) >= self.max_runs:
            finished = [k for k, r in self.runs.items() if r["status"] in ("done", "error")]
            if not finished:
                break
            del self.runs[finished[0]]
        run = {
            "run_id": run_id,
            "status": "queued",
            "instance": instance,
            "framework": framework,
            "mode": mode,
            "created": time.time(),
            "report": None,
            "error": None,
        }
        self.runs[run_id] = run
        return run

    def upsert_status(self, run_id: str, status: str, **fields: Any) -> bool:
        """
        Update a run's status and extra fields (report, error).
        Returns True if the status changed.
        """
        if status not in STATUSES:
            raise ValueError(f"unknown run status {status!r}")
        run = self.runs.setdefault(run_id, {"run_id": run_id, "status": None, "created": time.time()})
        changed = run.get("status") != status
        run["status"] = status
        run.update(fields)
        return changed

    def get(self, run_id: str) -> Optional[Dict[str, Any]]:
        return self.runs.get(run_id)
