"""Single profiled execution, run as `python -m memstab_collector.child task.json out.json`.

Allocation tracking is process-global, so the process boundary is the
isolation boundary: the parent spawns one of these per task. The contestant
script is compiled with the contestant file path as its filename, executed
with redirected stdio, and sampled by the configured sampler. The wire record
is written to the output path even on timeout or error, carrying whatever
samples were captured; the wall-clock budget is enforced in-process with an
interval timer so those samples survive.
"""

from __future__ import annotations

import io
import json
import signal
import sys
import tempfile
import traceback
from pathlib import Path

from .sampler import make_sampler
from .task import task_from_obj


class _Timeout(BaseException):
    pass


def _raise_timeout(signum, frame):
    raise _Timeout()


def normalize_output(text: str) -> str:
    """Trailing-whitespace and trailing-newline insensitive form for comparison."""
    return "\n".join(line.rstrip() for line in text.splitlines()).rstrip("\n")


def execute_task(task, workdir: str) -> dict:
    contestant_file = str(Path(workdir) / "contestant.py")
    Path(contestant_file).write_text(task.source_code, encoding="utf-8")
    for name, content in task.aux_files.items():
        aux = Path(workdir) / name
        if aux.parent != Path(workdir):
            raise ValueError(f"aux file {name!r} escapes the work directory")
        aux.write_text(str(content), encoding="utf-8")

    code = compile(task.source_code, contestant_file, "exec")
    sampler = make_sampler(task.sampling_mode, contestant_file, task.stride, task.interval_ms)

    sys.path.insert(0, workdir)
    stdin, stdout = sys.stdin, sys.stdout
    sys.stdin = io.StringIO(task.test_input)
    sys.stdout = captured = io.StringIO()

    import tracemalloc

    tracemalloc.start(1)
    status = "ok"
    detail = ""
    # Keep the module namespace alive until the final sample so retained
    # allocations stay visible.
    module_globals = {"__name__": "__main__", "__file__": contestant_file}
    old_handler = signal.signal(signal.SIGALRM, _raise_timeout)
    signal.setitimer(signal.ITIMER_REAL, task.timeout_s)
    try:
        sampler.start()
        try:
            exec(code, module_globals)
        except SystemExit as exc:
            if exc.code not in (None, 0):
                status = "error"
                detail = f"exit code {exc.code}"
        except _Timeout:
            status = "timeout"
        except BaseException:
            status = "error"
            detail = traceback.format_exc(limit=3)
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0.0)
        signal.signal(signal.SIGALRM, old_handler)
        sampler.stop()
        del module_globals
        sys.stdin, sys.stdout = stdin, stdout
        tracemalloc.stop()
        try:
            sys.path.remove(workdir)
        except ValueError:
            pass

    if status == "ok" and task.expected_output is not None:
        if normalize_output(captured.getvalue()) != normalize_output(task.expected_output):
            status = "mismatch"

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
    record["samples"] = [int(v) for v in sampler.samples]
    record["status"] = status
    if detail:
        record["detail"] = detail.strip()
    return record


def main(argv=None) -> int:
    argv = argv if argv is not None else sys.argv[1:]
    if len(argv) != 2:
        print("usage: python -m memstab_collector.child TASK_JSON OUT_JSON", file=sys.stderr)
        return 2
    task_path, out_path = argv
    with open(task_path, "r", encoding="utf-8") as handle:
        task = task_from_obj(json.load(handle))
    with tempfile.TemporaryDirectory(prefix="memstab-run-") as workdir:
        record = execute_task(task, workdir)
    with open(out_path, "w", encoding="utf-8") as handle:
        json.dump(record, handle)
        handle.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
