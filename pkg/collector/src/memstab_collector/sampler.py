"""Allocation samplers scoped to the contestant file.

Attribution is strict: a block counts only if its allocation site (the
innermost traced frame) is the contestant file. Allocations made on the
contestant's behalf inside imported modules are therefore attributed to those
modules, not the contestant.
"""

from __future__ import annotations

import sys
import threading
import tracemalloc


def contestant_bytes(contestant_file: str) -> int:
    """Currently allocated bytes whose allocation site is the contestant file."""
    snapshot = tracemalloc.take_snapshot()
    snapshot = snapshot.filter_traces([tracemalloc.Filter(True, contestant_file)])
    return sum(stat.size for stat in snapshot.statistics("filename"))


class LineSampler:
    """Samples contestant-scoped bytes on every stride-th executed contestant line.

    The first sample fires at the first line event, before any contestant code
    has run: it is the process's contestant-scoped baseline (frame setup the
    runtime attributes to the file), which downstream baseline correction
    subtracts. A final sample at stop captures allocations on the last lines.
    """

    def __init__(self, contestant_file: str, stride: int = 1):
        self.contestant_file = contestant_file
        self.stride = max(1, int(stride))
        self.samples: list[int] = []
        self._events = 0

    def start(self) -> None:
        sys.settrace(self._global_trace)

    def stop(self) -> None:
        sys.settrace(None)
        self.samples.append(contestant_bytes(self.contestant_file))

    def _global_trace(self, frame, event, arg):
        if frame.f_code.co_filename == self.contestant_file:
            return self._local_trace
        return None

    def _local_trace(self, frame, event, arg):
        if event == "line":
            if self._events % self.stride == 0:
                self.samples.append(contestant_bytes(self.contestant_file))
            self._events += 1
        return self._local_trace


class TimeSampler:
    """Samples contestant-scoped bytes from a background thread every interval."""

    def __init__(self, contestant_file: str, interval_ms: float = 1.0):
        self.contestant_file = contestant_file
        self.interval_s = float(interval_ms) / 1000.0
        self.samples: list[int] = []
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    def start(self) -> None:
        self.samples.append(contestant_bytes(self.contestant_file))
        self._thread = threading.Thread(target=self._loop, daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2.0)
        self.samples.append(contestant_bytes(self.contestant_file))

    def _loop(self) -> None:
        while not self._stop.wait(self.interval_s):
            self.samples.append(contestant_bytes(self.contestant_file))


def make_sampler(mode: str, contestant_file: str, stride: int, interval_ms: float):
    if mode == "time":
        return TimeSampler(contestant_file, interval_ms)
    return LineSampler(contestant_file, stride)
