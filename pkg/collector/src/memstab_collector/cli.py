"""CLI: collect allocation traces for a JSONL task list."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .runner import batch_collect
from .task import (
    DEFAULT_INTERVAL_MS,
    DEFAULT_QUANT_BYTES,
    DEFAULT_STRIDE,
    DEFAULT_TIMEOUT_S,
    iter_tasks,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="memstab-collect",
        description="Run candidate solutions under the allocation profiler and emit trace JSONL.",
    )
    parser.add_argument("--tasks", required=True, help="JSONL file of execution tasks")
    parser.add_argument("--out", required=True, help="output trace JSONL path")
    parser.add_argument("--parallelism", type=int, default=1)
    parser.add_argument("--timeout-s", type=float, default=DEFAULT_TIMEOUT_S,
                        help="default per-run timeout for tasks that do not set one")
    parser.add_argument("--mode", choices=("line", "time"), default="line")
    parser.add_argument("--stride", type=int, default=DEFAULT_STRIDE)
    parser.add_argument("--interval-ms", type=float, default=DEFAULT_INTERVAL_MS)
    parser.add_argument("--quant-bytes", type=int, default=DEFAULT_QUANT_BYTES)
    parser.add_argument("--log-level", default="WARNING",
                        choices=("DEBUG", "INFO", "WARNING", "ERROR"))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), stream=sys.stderr)
    defaults = {
        "timeout_s": args.timeout_s,
        "sampling_mode": args.mode,
        "stride": args.stride,
        "interval_ms": args.interval_ms,
        "quant_bytes": args.quant_bytes,
    }
    try:
        tasks = list(iter_tasks(args.tasks, defaults))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        summary = batch_collect(tasks, args.out, parallelism=args.parallelism)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(summary, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
