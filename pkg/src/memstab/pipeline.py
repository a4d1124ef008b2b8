"""Command implementations behind the CLI: each returns a machine-readable summary.

Summaries count what was read, produced, and skipped; they never include
timestamps so a rerun over identical inputs is byte-identical.
"""

from __future__ import annotations

import dataclasses
import json
import logging
from collections import Counter
from dataclasses import dataclass

from . import io as wire
from .aggregation import (
    model_score,
    pairwise_table,
    problem_scores,
    solution_dmpd_means,
)
from .burstiness import NMVConfig, nmv_records, nmv_solution_mean
from .errors import ConfigurationError, NoDataError
from .profiles import MonotonicPeakProfile, RawTrace, resample_stride, to_mpp
from .stats import correlation_table, paired_diff_summary

logger = logging.getLogger(__name__)

DEFAULT_QUANT_BYTES = 64
DEFAULT_STRIDE = 1


def _transform_one(trace: RawTrace, quant_bytes: int, stride: int) -> MonotonicPeakProfile:
    if stride > 1:
        trace = resample_stride(trace, stride)
    trace = dataclasses.replace(trace, quant_bytes=quant_bytes)
    return to_mpp(trace)


def run_transform(
    in_path,
    out_path,
    quant_bytes: int = DEFAULT_QUANT_BYTES,
    stride: int = DEFAULT_STRIDE,
) -> dict:
    """Read trace JSONL, emit envelope JSONL; non-ok and malformed lines are skipped."""
    mpps = []
    skip_reasons: Counter = Counter()
    read = 0
    for lineno, trace, error in wire.iter_trace_lines(in_path):
        read += 1
        if error is not None:
            logger.warning("%s:%d: skipping malformed line: %s", in_path, lineno, error)
            skip_reasons["malformed"] += 1
            continue
        if trace.status != "ok":
            logger.info("%s:%d: skipping run with status %s", in_path, lineno, trace.status)
            skip_reasons[f"status:{trace.status}"] += 1
            continue
        mpps.append(_transform_one(trace, quant_bytes, stride))
    wire.write_mpps(out_path, mpps)
    return {
        "command": "transform",
        "records_read": read,
        "profiles_written": len(mpps),
        "skipped": sum(skip_reasons.values()),
        "skip_reasons": dict(sorted(skip_reasons.items())),
        "quant_bytes": quant_bytes,
        "stride": stride,
    }


def run_dmpd(mpp_path, out_path, exact: bool = False) -> dict:
    """Pairwise divergence table from an envelope store; sorted CSV output."""
    mpps = wire.read_mpps(mpp_path)
    skips: list = []
    records = pairwise_table(mpps, skip_log=skips)
    wire.write_pairwise_csv(out_path, records)
    if exact:
        wire.write_exact_sidecar(
            out_path,
            {
                "records": [
                    {
                        "problem_id": r.problem_id,
                        "test_id": r.test_id,
                        "sol_i": r.sol_i,
                        "sol_j": r.sol_j,
                        "dmpd": r.dmpd,
                    }
                    for r in records
                ]
            },
        )
    return {
        "command": "dmpd",
        "profiles_read": len(mpps),
        "pairs_written": len(records),
        "skipped": len(skips),
        "skip_reasons": sorted(
            f"{s.problem_id}/{s.test_id}: {s.reason}" for s in skips
        ),
    }


def run_aggregate(pairwise_path, scores_path, exact: bool = False) -> dict:
    """Problem scores plus the macro/micro instability summary."""
    records = wire.read_pairwise_csv(pairwise_path)
    if not records:
        raise NoDataError(f"{pairwise_path} holds no pairwise records")
    scores = problem_scores(records)
    overall = model_score(scores)
    wire.write_scores_csv(scores_path, scores)
    if exact:
        wire.write_exact_sidecar(
            scores_path,
            {
                "problems": [
                    {
                        "problem_id": s.problem_id,
                        "d_p": s.d_p,
                        "n_pairs": s.n_pairs,
                        "n_tests": s.n_tests,
                        "weight": s.weight,
                    }
                    for s in scores
                ],
                "mis_macro": overall.mis_macro,
                "mis_micro": overall.mis_micro,
            },
        )
    return {
        "command": "aggregate",
        "pairs_read": len(records),
        "n_problems": overall.n_problems,
        "mis_macro": overall.mis_macro,
        "mis_micro": overall.mis_micro,
    }


def run_nmv(
    mpp_path,
    out_path,
    means_path,
    config: NMVConfig = NMVConfig(),
    exact: bool = False,
) -> dict:
    """Velocity table per (problem, solution, test) plus per-solution means."""
    mpps = wire.read_mpps(mpp_path)
    records = nmv_records(mpps, config)
    means = nmv_solution_mean(records)
    wire.write_nmv_csv(out_path, records)
    wire.write_nmv_means_csv(means_path, means)
    if exact:
        wire.write_exact_sidecar(
            out_path,
            {
                "records": [
                    {
                        "problem_id": r.problem_id,
                        "solution_id": r.solution_id,
                        "test_id": r.test_id,
                        "max_vel": r.max_vel,
                        "median_peak": r.median_peak,
                        "nmv": r.nmv,
                        "eligible": r.eligible,
                    }
                    for r in records
                ]
            },
        )
    return {
        "command": "nmv",
        "profiles_read": len(mpps),
        "records_written": len(records),
        "solution_means_written": len(means),
        "p_min": config.p_min,
        "clip_to_unit": config.clip_to_unit,
    }


# --------------------------------------------------------------------------
# ablation


@dataclass(frozen=True)
class AblationSetting:
    """One sampling configuration to re-derive the pipeline under."""

    name: str
    mode: str = "line"
    stride: int = 1
    quant_bytes: int = DEFAULT_QUANT_BYTES
    interval_ms: float | None = None
    baseline: bool = False


def load_settings_grid(path) -> list[AblationSetting]:
    with open(path, "r", encoding="utf-8") as handle:
        raw = json.load(handle)
    if not isinstance(raw, list) or not raw:
        raise ConfigurationError(f"{path}: settings grid must be a non-empty JSON list")
    settings = []
    for entry in raw:
        try:
            settings.append(
                AblationSetting(
                    name=str(entry["name"]),
                    mode=str(entry.get("mode", "line")),
                    stride=int(entry.get("stride", 1)),
                    quant_bytes=int(entry.get("quant_bytes", DEFAULT_QUANT_BYTES)),
                    interval_ms=(
                        float(entry["interval_ms"]) if entry.get("interval_ms") is not None else None
                    ),
                    baseline=bool(entry.get("baseline", False)),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"{path}: bad settings entry {entry!r}: {exc}") from exc
    if sum(1 for s in settings if s.baseline) != 1:
        raise ConfigurationError(f"{path}: exactly one settings entry must set baseline=true")
    return settings


def _decimation_factor(trace: RawTrace, setting: AblationSetting) -> int | None:
    """How much to thin this trace to emulate the setting; None = not applicable."""
    if trace.sampling_mode != setting.mode:
        return None
    if setting.mode == "line":
        if setting.stride % trace.stride != 0:
            return None
        return setting.stride // trace.stride
    native = trace.interval_ms or 0.0
    wanted = setting.interval_ms or 0.0
    if native <= 0 or wanted <= 0:
        return None
    factor = wanted / native
    if abs(factor - round(factor)) > 1e-9 or round(factor) < 1:
        return None
    return int(round(factor))


def _setting_problem_scores(traces: list[RawTrace], setting: AblationSetting):
    """Rebuild the envelope -> pairwise -> problem-score pipeline under a setting."""
    mpps = []
    for trace in traces:
        factor = _decimation_factor(trace, setting)
        if factor is None:
            continue
        thinned = resample_stride(trace, factor)
        thinned = dataclasses.replace(thinned, quant_bytes=setting.quant_bytes)
        mpps.append(to_mpp(thinned))
    return problem_scores(pairwise_table(mpps))


def _pct_change(value: float, base: float) -> float | None:
    if base == 0.0:
        return None
    return 100.0 * (value - base) / base


def run_ablate(trace_path, grid_path, out_path, exact: bool = False) -> dict:
    """Re-derive instability under each sampling setting and compare to the baseline.

    Output mirrors the sensitivity-table layout: per setting the macro/micro
    scores, percent change versus baseline, and paired per-problem statistics
    (median difference, IQR, signed-rank p, dominance delta). The baseline row
    reports exact-zero deltas and blank paired statistics.
    """
    settings = load_settings_grid(grid_path)
    traces = []
    for lineno, trace, error in wire.iter_trace_lines(trace_path):
        if error is not None:
            logger.warning("%s:%d: skipping malformed line: %s", trace_path, lineno, error)
            continue
        if trace.status != "ok":
            continue
        traces.append(trace)

    baseline_setting = next(s for s in settings if s.baseline)
    baseline_scores = _setting_problem_scores(traces, baseline_setting)
    if not baseline_scores:
        raise NoDataError("baseline setting produced no problem scores")
    baseline_dp = {s.problem_id: s.d_p for s in baseline_scores}
    base_overall = model_score(baseline_scores)

    ordered = [baseline_setting] + [s for s in settings if not s.baseline]
    rows = []
    exact_rows = []
    for setting in ordered:
        scores = (
            baseline_scores
            if setting is baseline_setting
            else _setting_problem_scores(traces, setting)
        )
        dp_map = {s.problem_id: s.d_p for s in scores}
        if not dp_map:
            raise NoDataError(f"setting {setting.name!r} produced no problem scores")
        overall = model_score(scores)
        if setting is baseline_setting:
            d_macro, d_micro = 0.0, 0.0
            paired = None
        else:
            d_macro = _pct_change(overall.mis_macro, base_overall.mis_macro)
            d_micro = _pct_change(overall.mis_micro, base_overall.mis_micro)
            paired = paired_diff_summary(baseline_dp, dp_map)
        rows.append(
            [
                setting.name,
                setting.mode,
                str(setting.stride) if setting.mode == "line" else "",
                str(setting.quant_bytes),
                wire.fmt(setting.interval_ms) if setting.interval_ms is not None else "",
                str(overall.n_problems),
                wire.fmt(overall.mis_macro),
                wire.fmt(d_macro) if d_macro is not None else "",
                wire.fmt(overall.mis_micro),
                wire.fmt(d_micro) if d_micro is not None else "",
                wire.fmt(paired.median_diff) if paired else "",
                wire.fmt(paired.iqr) if paired else "",
                wire.fmt(paired.wilcoxon_p) if paired else "",
                wire.fmt(paired.cliffs_delta) if paired else "",
            ]
        )
        exact_rows.append(
            {
                "setting": setting.name,
                "mis_macro": overall.mis_macro,
                "mis_micro": overall.mis_micro,
                "delta_macro_pct": d_macro,
                "delta_micro_pct": d_micro,
            }
        )

    wire._write_csv(out_path, wire.ABLATE_HEADER, rows)
    if exact:
        wire.write_exact_sidecar(out_path, {"settings": exact_rows})
    return {
        "command": "ablate",
        "traces_read": len(traces),
        "settings": [s.name for s in ordered],
        "baseline": baseline_setting.name,
        "rows_written": len(rows),
    }


# --------------------------------------------------------------------------
# reporting and correlation


def run_report(pairwise_path, nmv_means_path, out_path) -> dict:
    """Join per-solution divergence means with velocity means into one proxy table."""
    records = wire.read_pairwise_csv(pairwise_path)
    dmpd_means = solution_dmpd_means(records)
    nmv_means = wire.read_nmv_means_csv(nmv_means_path) if nmv_means_path else []
    wire.write_solutions_csv(out_path, dmpd_means, nmv_means)
    return {
        "command": "report",
        "pairs_read": len(records),
        "solutions_written": len({(m.problem_id, m.solution_id) for m in dmpd_means}
                                 | {(m.problem_id, m.solution_id) for m in nmv_means}),
    }


def run_correlate(solutions_path, metrics_path, out_path) -> dict:
    """Correlate stability proxies against externally supplied quality metrics."""
    proxies = wire.read_solutions_csv(solutions_path)
    metrics = wire.read_se_metrics_csv(metrics_path)
    by_key = {(m["problem_id"], m["solution_id"]): m for m in metrics}
    joined = []
    for row in proxies:
        match = by_key.get((row["problem_id"], row["solution_id"]))
        if match is None:
            continue
        merged = dict(row)
        for col in wire.SE_METRIC_COLUMNS:
            merged[col] = match[col]
        joined.append(merged)
    if not joined:
        raise NoDataError("proxy table and metrics share no (problem_id, solution_id) keys")
    rows = correlation_table(
        joined,
        proxy_cols=("dmpd_mean", "nmv_mean"),
        metric_cols=wire.SE_METRIC_COLUMNS,
    )
    wire.write_correlation_csv(out_path, rows)
    return {
        "command": "correlate",
        "joined_solutions": len(joined),
        "rows_written": len(rows),
    }
