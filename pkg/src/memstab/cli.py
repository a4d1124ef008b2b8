"""Command-line surface: transform, dmpd, aggregate, nmv, ablate, correlate, report."""

from __future__ import annotations

import json
import logging
import os
import random
import sys

import click

from . import pipeline
from .burstiness import DEFAULT_P_MIN, NMVConfig
from .errors import MemstabError

logger = logging.getLogger("memstab")


def _echo_summary(summary: dict) -> None:
    click.echo(json.dumps(summary, sort_keys=True))


def _write_summary_file(summary: dict, path: str | None) -> None:
    if path:
        from . import io as wire

        wire.write_summary(path, summary)


@click.group()
@click.option(
    "--log-level",
    default="WARNING",
    show_default=True,
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
)
@click.version_option(package_name="memstab")
def main(log_level: str) -> None:
    """Quantify runtime-memory stability across correct program variants."""
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    # Core math is seed-free; honored for reproducibility of any future
    # randomized ordering.
    seed = os.environ.get("MEMSTAB_SEED")
    if seed is not None:
        random.seed(int(seed))


def _run(func, *args, **kwargs) -> dict:
    try:
        return func(*args, **kwargs)
    except MemstabError as exc:
        raise click.ClickException(str(exc)) from exc
    except OSError as exc:
        raise click.ClickException(f"I/O failure: {exc}") from exc


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False, writable=True))
@click.option("--quant-bytes", default=pipeline.DEFAULT_QUANT_BYTES, show_default=True, type=int)
@click.option("--stride", default=pipeline.DEFAULT_STRIDE, show_default=True, type=int)
@click.option("--summary", "summary_path", default=None, type=click.Path(dir_okay=False))
def transform(in_path, out, quant_bytes, stride, summary_path):
    """Turn raw trace JSONL into monotonic peak envelopes (JSONL)."""
    summary = _run(pipeline.run_transform, in_path, out, quant_bytes=quant_bytes, stride=stride)
    _write_summary_file(summary, summary_path)
    _echo_summary(summary)


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False, writable=True))
@click.option("--exact", is_flag=True, help="Also write a full-precision JSON sidecar.")
@click.option("--summary", "summary_path", default=None, type=click.Path(dir_okay=False))
def dmpd(in_path, out, exact, summary_path):
    """Pairwise shape-divergence table from an envelope store (CSV)."""
    summary = _run(pipeline.run_dmpd, in_path, out, exact=exact)
    _write_summary_file(summary, summary_path)
    _echo_summary(summary)


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False, writable=True))
@click.option("--exact", is_flag=True)
@click.option("--summary", "summary_path", default=None, type=click.Path(dir_okay=False))
def aggregate(in_path, out, exact, summary_path):
    """Per-problem scores plus the macro/micro instability summary."""
    summary = _run(pipeline.run_aggregate, in_path, out, exact=exact)
    _write_summary_file(summary, summary_path)
    _echo_summary(summary)


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False, writable=True))
@click.option("--means-out", default=None, type=click.Path(dir_okay=False),
              help="Per-solution mean table path [default: <out base>_means.csv].")
@click.option("--pmin-bytes", default=DEFAULT_P_MIN, show_default=True, type=int,
              help="Minimum own-peak for a run to count toward per-solution means.")
@click.option("--clip-nmv", is_flag=True, help="Clamp velocity ratios to [0, 1].")
@click.option("--exact", is_flag=True)
@click.option("--summary", "summary_path", default=None, type=click.Path(dir_okay=False))
def nmv(in_path, out, means_out, pmin_bytes, clip_nmv, exact, summary_path):
    """Normalized maximum velocity per run plus per-solution means."""
    if means_out is None:
        from pathlib import Path

        p = Path(out)
        means_out = str(p.with_name(p.stem + "_means" + p.suffix))
    config = NMVConfig(p_min=pmin_bytes, clip_to_unit=clip_nmv)
    summary = _run(pipeline.run_nmv, in_path, out, means_out, config=config, exact=exact)
    _write_summary_file(summary, summary_path)
    _echo_summary(summary)


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--grid", required=True, type=click.Path(exists=True, dir_okay=False),
              help="JSON list of sampling settings; exactly one marks baseline=true.")
@click.option("--out", required=True, type=click.Path(dir_okay=False, writable=True))
@click.option("--exact", is_flag=True)
@click.option("--summary", "summary_path", default=None, type=click.Path(dir_okay=False))
def ablate(in_path, grid, out, exact, summary_path):
    """Sensitivity report: rerun the pipeline under each sampling setting."""
    summary = _run(pipeline.run_ablate, in_path, grid, out, exact=exact)
    _write_summary_file(summary, summary_path)
    _echo_summary(summary)


@main.command()
@click.option("--pairwise", "pairwise_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--nmv-means", "nmv_means_path", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False, writable=True))
@click.option("--summary", "summary_path", default=None, type=click.Path(dir_okay=False))
def report(pairwise_path, nmv_means_path, out, summary_path):
    """Per-solution proxy table: divergence means joined with velocity means."""
    summary = _run(pipeline.run_report, pairwise_path, nmv_means_path, out)
    _write_summary_file(summary, summary_path)
    _echo_summary(summary)


@main.command()
@click.option("--proxies", "proxies_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Per-solution proxy table produced by the report command.")
@click.option("--metrics", "metrics_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="CSV with problem_id, solution_id and quality-metric columns.")
@click.option("--out", required=True, type=click.Path(dir_okay=False, writable=True))
@click.option("--summary", "summary_path", default=None, type=click.Path(dir_okay=False))
def correlate(proxies_path, metrics_path, out, summary_path):
    """Correlate stability proxies with externally supplied quality metrics."""
    summary = _run(pipeline.run_correlate, proxies_path, metrics_path, out)
    _write_summary_file(summary, summary_path)
    _echo_summary(summary)


if __name__ == "__main__":
    main()
