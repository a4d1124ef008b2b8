"""memstab-collector: profiled execution of candidate solutions, one process per run."""

from .runner import batch_collect, run_and_trace
from .task import ExecutionTask, iter_tasks, task_from_obj, task_to_obj

__version__ = "0.1.0"

__all__ = [
    "ExecutionTask",
    "batch_collect",
    "iter_tasks",
    "run_and_trace",
    "task_from_obj",
    "task_to_obj",
]
