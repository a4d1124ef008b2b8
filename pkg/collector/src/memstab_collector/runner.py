"""Parent-side orchestration: one child process per task, bounded parallelism."""

from __future__ import annotations

import json
import logging
import subprocess
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable, Sequence

from .task import ExecutionTask, task_to_obj

logger = logging.getLogger(__name__)

# Child enforces the run budget itself (and keeps captured samples); the
# parent's hard kill only catches children wedged below the interpreter.
STARTUP_GRACE_S = 5.0


def run_and_trace(task: ExecutionTask, python: str | None = None) -> dict:
    """Execute one task in a fresh child process and return its wire record."""
    task.validate()
    python = python or sys.executable
    with tempfile.TemporaryDirectory(prefix="memstab-task-") as tmp:
        task_path = Path(tmp) / "task.json"
        out_path = Path(tmp) / "record.json"
        task_path.write_text(json.dumps(task_to_obj(task)), encoding="utf-8")
        budget = task.timeout_s * 1.5 + STARTUP_GRACE_S
        try:
            proc = subprocess.run(
                [python, "-m", "memstab_collector.child", str(task_path), str(out_path)],
                capture_output=True,
                text=True,
                timeout=budget,
            )
        except subprocess.TimeoutExpired:
            logger.warning("hard-killed child for %s after %.1fs", task.solution_id, budget)
            return _fallback_record(task, "timeout")
        if out_path.exists():
            try:
                return json.loads(out_path.read_text(encoding="utf-8"))
            except json.JSONDecodeError:
                logger.warning("unreadable record from child for %s", task.solution_id)
        logger.warning(
            "child for %s exited %d without a record: %s",
            task.solution_id,
            proc.returncode,
            proc.stderr.strip()[:500],
        )
        return _fallback_record(task, "error")


def _fallback_record(task: ExecutionTask, status: str) -> dict:
    record = {
        "problem_id": task.problem_id,
        "solution_id": task.solution_id,
        "test_id": task.test_id,
    }
    if task.model is not None:
        record["model"] = task.model
    if task.temperature is not None:
        record["temperature"] = task.temperature
    record["sampling_mode"] = task.sampling_mode
    if task.sampling_mode == "line":
        record["stride"] = task.stride
    else:
        record["interval_ms"] = task.interval_ms
    record["quant_bytes"] = task.quant_bytes
    record["samples"] = []
    record["status"] = status
    return record


def batch_collect(tasks: Sequence[ExecutionTask], out_path, parallelism: int = 1) -> dict:
    """Run every task and write one JSONL line per task, in input order.

    Children run concurrently up to ``parallelism``; ordering of the output
    file never depends on scheduling.
    """
    tasks = list(tasks)
    records: list[dict | None] = [None] * len(tasks)
    if tasks:
        with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
            futures = {pool.submit(run_and_trace, task): idx for idx, task in enumerate(tasks)}
            for future, idx in futures.items():
                records[idx] = future.result()
    with open(out_path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record) + "\n")
    statuses: dict[str, int] = {}
    for record in records:
        statuses[record["status"]] = statuses.get(record["status"], 0) + 1
    return {
        "command": "collect",
        "tasks": len(tasks),
        "statuses": dict(sorted(statuses.items())),
    }
