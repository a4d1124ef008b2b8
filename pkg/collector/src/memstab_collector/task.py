"""Execution tasks: one candidate program run against one test input."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

DEFAULT_TIMEOUT_S = 10.0
DEFAULT_STRIDE = 1
DEFAULT_INTERVAL_MS = 1.0
DEFAULT_QUANT_BYTES = 64


@dataclass(frozen=True)
class ExecutionTask:
    """One profiled execution request.

    ``source_code`` is a script that reads standard input and writes its
    answer to standard output. ``aux_files`` are extra modules written next to
    the contestant file (importable, but never attributed to it).
    """

    problem_id: str
    solution_id: str
    test_id: str
    source_code: str
    test_input: str = ""
    expected_output: str | None = None
    timeout_s: float = DEFAULT_TIMEOUT_S
    sampling_mode: str = "line"
    stride: int = DEFAULT_STRIDE
    interval_ms: float = DEFAULT_INTERVAL_MS
    quant_bytes: int = DEFAULT_QUANT_BYTES
    model: str | None = None
    temperature: float | None = None
    aux_files: dict = field(default_factory=dict)

    def validate(self) -> None:
        if not self.source_code:
            raise ValueError("source_code must be non-empty")
        if not self.timeout_s > 0:
            raise ValueError("timeout_s must be > 0")
        if self.sampling_mode not in ("line", "time"):
            raise ValueError(f"unknown sampling_mode {self.sampling_mode!r}")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")
        if not self.interval_ms > 0:
            raise ValueError("interval_ms must be > 0")


def task_from_obj(obj: dict, defaults: dict | None = None) -> ExecutionTask:
    merged = dict(defaults or {})
    merged.update(obj)
    task = ExecutionTask(
        problem_id=str(merged["problem_id"]),
        solution_id=str(merged["solution_id"]),
        test_id=str(merged["test_id"]),
        source_code=str(merged["source_code"]),
        test_input=str(merged.get("test_input", "")),
        expected_output=(
            str(merged["expected_output"]) if merged.get("expected_output") is not None else None
        ),
        timeout_s=float(merged.get("timeout_s", DEFAULT_TIMEOUT_S)),
        sampling_mode=str(merged.get("sampling_mode", "line")),
        stride=int(merged.get("stride", DEFAULT_STRIDE)),
        interval_ms=float(merged.get("interval_ms", DEFAULT_INTERVAL_MS)),
        quant_bytes=int(merged.get("quant_bytes", DEFAULT_QUANT_BYTES)),
        model=str(merged["model"]) if merged.get("model") is not None else None,
        temperature=(
            float(merged["temperature"]) if merged.get("temperature") is not None else None
        ),
        aux_files=dict(merged.get("aux_files", {})),
    )
    task.validate()
    return task


def task_to_obj(task: ExecutionTask) -> dict:
    obj = {
        "problem_id": task.problem_id,
        "solution_id": task.solution_id,
        "test_id": task.test_id,
        "source_code": task.source_code,
        "test_input": task.test_input,
        "timeout_s": task.timeout_s,
        "sampling_mode": task.sampling_mode,
        "stride": task.stride,
        "interval_ms": task.interval_ms,
        "quant_bytes": task.quant_bytes,
    }
    if task.expected_output is not None:
        obj["expected_output"] = task.expected_output
    if task.model is not None:
        obj["model"] = task.model
    if task.temperature is not None:
        obj["temperature"] = task.temperature
    if task.aux_files:
        obj["aux_files"] = dict(task.aux_files)
    return obj


def iter_tasks(path, defaults: dict | None = None) -> Iterator[ExecutionTask]:
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield task_from_obj(json.loads(line), defaults)
            except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: bad task record: {exc}") from exc
