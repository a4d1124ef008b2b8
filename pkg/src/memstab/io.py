"""Wire formats: trace and envelope JSONL, result CSVs, and run summaries.

Traces travel as one JSON object per line (streamable, append-only); result
tables are CSVs with fixed headers and 6-decimal numeric formatting so runs
are byte-for-byte reproducible. Unknown JSON keys survive a round-trip.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Iterable, Iterator

from .aggregation import PairwiseDistanceRecord, ProblemScore, SolutionDmpdMean
from .burstiness import NMVRecord, NMVSolutionMean
from .errors import InvalidTraceError, ValidationError
from .profiles import MonotonicPeakProfile, RawTrace
from .stats import CorrelationRow
from .validation import validate_trace

TRACE_FIELDS = (
    "problem_id",
    "solution_id",
    "test_id",
    "model",
    "temperature",
    "sampling_mode",
    "stride",
    "interval_ms",
    "quant_bytes",
    "samples",
    "status",
)

PAIRWISE_HEADER = ["problem_id", "test_id", "sol_i", "sol_j", "dmpd"]
SCORES_HEADER = ["problem_id", "d_p", "n_pairs", "n_tests", "weight"]
NMV_HEADER = ["problem_id", "solution_id", "test_id", "max_vel", "median_peak", "nmv", "eligible"]
NMV_MEANS_HEADER = ["problem_id", "solution_id", "nmv_mean", "n_eligible"]
SOLUTIONS_HEADER = ["problem_id", "solution_id", "dmpd_mean", "n_dmpd", "nmv_mean", "n_eligible"]
ABLATE_HEADER = [
    "setting",
    "mode",
    "stride",
    "quant_bytes",
    "interval_ms",
    "n_problems",
    "mis_macro",
    "delta_macro_pct",
    "mis_micro",
    "delta_micro_pct",
    "median_delta_dp",
    "iqr_delta_dp",
    "wilcoxon_p",
    "cliffs_delta",
]
CORRELATION_HEADER = ["proxy", "metric", "rho_spearman", "r_pearson", "cliffs_delta_t1_t3", "n"]
SE_METRIC_COLUMNS = ("cognitive_complexity", "cyclomatic_complexity", "maintainability_index")
SE_HEADER = ["problem_id", "solution_id", *SE_METRIC_COLUMNS]


def fmt(value: float) -> str:
    """Fixed 6-decimal rendering used in every CSV."""
    return f"{float(value):.6f}"


# --------------------------------------------------------------------------
# trace JSONL


def trace_from_obj(obj: dict) -> RawTrace:
    if not isinstance(obj, dict):
        raise ValidationError(f"trace record must be a JSON object, got {type(obj).__name__}")
    for key in ("problem_id", "solution_id", "test_id", "status"):
        if key not in obj:
            raise ValidationError(f"trace record missing required key {key!r}")
    extra = {k: v for k, v in obj.items() if k not in TRACE_FIELDS}
    samples = obj.get("samples") or []
    trace = RawTrace(
        problem_id=str(obj["problem_id"]),
        solution_id=str(obj["solution_id"]),
        test_id=str(obj["test_id"]),
        samples=tuple(int(s) for s in samples),
        status=str(obj["status"]),
        sampling_mode=str(obj.get("sampling_mode", "line")),
        stride=int(obj["stride"]) if obj.get("stride") is not None else 1,
        interval_ms=float(obj["interval_ms"]) if obj.get("interval_ms") is not None else None,
        quant_bytes=int(obj.get("quant_bytes", 0)),
        model=str(obj["model"]) if obj.get("model") is not None else None,
        temperature=float(obj["temperature"]) if obj.get("temperature") is not None else None,
        extra=extra,
    )
    validate_trace(trace)
    return trace


def trace_to_obj(trace: RawTrace) -> dict:
    obj: dict[str, Any] = {
        "problem_id": trace.problem_id,
        "solution_id": trace.solution_id,
        "test_id": trace.test_id,
    }
    if trace.model is not None:
        obj["model"] = trace.model
    if trace.temperature is not None:
        obj["temperature"] = trace.temperature
    obj["sampling_mode"] = trace.sampling_mode
    if trace.sampling_mode == "line":
        obj["stride"] = trace.stride
    else:
        obj["interval_ms"] = trace.interval_ms
    obj["quant_bytes"] = trace.quant_bytes
    obj["samples"] = list(trace.samples)
    obj["status"] = trace.status
    obj.update(trace.extra)
    return obj


def iter_trace_lines(path) -> Iterator[tuple[int, RawTrace | None, str | None]]:
    """Yield (lineno, trace, error) per non-blank line; bad lines yield an error string."""
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield lineno, trace_from_obj(json.loads(line)), None
            except (
                json.JSONDecodeError,
                ValidationError,
                InvalidTraceError,
                ValueError,
                TypeError,
            ) as exc:
                yield lineno, None, str(exc)


def write_traces(path, traces: Iterable[RawTrace]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for trace in traces:
            handle.write(json.dumps(trace_to_obj(trace), sort_keys=False) + "\n")


# --------------------------------------------------------------------------
# envelope JSONL


def mpp_to_obj(mpp: MonotonicPeakProfile) -> dict:
    obj: dict[str, Any] = {
        "problem_id": mpp.problem_id,
        "solution_id": mpp.solution_id,
        "test_id": mpp.test_id,
    }
    if mpp.model is not None:
        obj["model"] = mpp.model
    obj["values"] = [float(v) for v in mpp.values]
    return obj


def mpp_from_obj(obj: dict) -> MonotonicPeakProfile:
    for key in ("problem_id", "solution_id", "test_id", "values"):
        if key not in obj:
            raise ValidationError(f"envelope record missing required key {key!r}")
    return MonotonicPeakProfile(
        values=obj["values"],
        problem_id=str(obj["problem_id"]),
        solution_id=str(obj["solution_id"]),
        test_id=str(obj["test_id"]),
        model=str(obj["model"]) if obj.get("model") is not None else None,
    )


def write_mpps(path, mpps: Iterable[MonotonicPeakProfile]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for mpp in mpps:
            handle.write(json.dumps(mpp_to_obj(mpp)) + "\n")


def read_mpps(path) -> list[MonotonicPeakProfile]:
    out = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(mpp_from_obj(json.loads(line)))
            except (json.JSONDecodeError, ValidationError, ValueError) as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from exc
    return out


# --------------------------------------------------------------------------
# CSV tables


def _write_csv(path, header: list[str], rows: Iterable[list[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)


def write_pairwise_csv(path, records: Iterable[PairwiseDistanceRecord]) -> None:
    _write_csv(
        path,
        PAIRWISE_HEADER,
        ([r.problem_id, r.test_id, r.sol_i, r.sol_j, fmt(r.dmpd)] for r in records),
    )


def read_pairwise_csv(path) -> list[PairwiseDistanceRecord]:
    records = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or list(reader.fieldnames) != PAIRWISE_HEADER:
            raise ValidationError(
                f"{path}: expected header {PAIRWISE_HEADER}, got {reader.fieldnames}"
            )
        for lineno, row in enumerate(reader, start=2):
            try:
                value = float(row["dmpd"])
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"{path}:{lineno}: bad dmpd value {row['dmpd']!r}") from exc
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{path}:{lineno}: dmpd {value} outside [0, 1]")
            if not row["sol_i"] or not row["sol_j"] or row["sol_i"] >= row["sol_j"]:
                raise ValidationError(
                    f"{path}:{lineno}: solution pair must satisfy sol_i < sol_j"
                )
            records.append(
                PairwiseDistanceRecord(
                    row["problem_id"], row["test_id"], row["sol_i"], row["sol_j"], value
                )
            )
    return records


def write_scores_csv(path, scores: Iterable[ProblemScore]) -> None:
    _write_csv(
        path,
        SCORES_HEADER,
        (
            [s.problem_id, fmt(s.d_p), str(s.n_pairs), str(s.n_tests), str(s.weight)]
            for s in scores
        ),
    )


def write_nmv_csv(path, records: Iterable[NMVRecord]) -> None:
    _write_csv(
        path,
        NMV_HEADER,
        (
            [
                r.problem_id,
                r.solution_id,
                r.test_id,
                fmt(r.max_vel),
                fmt(r.median_peak),
                fmt(r.nmv),
                "true" if r.eligible else "false",
            ]
            for r in records
        ),
    )


def write_nmv_means_csv(path, means: Iterable[NMVSolutionMean]) -> None:
    _write_csv(
        path,
        NMV_MEANS_HEADER,
        ([m.problem_id, m.solution_id, fmt(m.nmv_mean), str(m.n_eligible)] for m in means),
    )


def read_nmv_means_csv(path) -> list[NMVSolutionMean]:
    out = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or list(reader.fieldnames) != NMV_MEANS_HEADER:
            raise ValidationError(
                f"{path}: expected header {NMV_MEANS_HEADER}, got {reader.fieldnames}"
            )
        for row in reader:
            out.append(
                NMVSolutionMean(
                    row["problem_id"],
                    row["solution_id"],
                    float(row["nmv_mean"]),
                    int(row["n_eligible"]),
                )
            )
    return out


def write_solutions_csv(
    path,
    dmpd_means: Iterable[SolutionDmpdMean],
    nmv_means: Iterable[NMVSolutionMean],
) -> None:
    """Per-solution proxy table: outer join of divergence and velocity means."""
    joined: dict[tuple[str, str], dict[str, Any]] = {}
    for m in dmpd_means:
        joined.setdefault((m.problem_id, m.solution_id), {})
        joined[(m.problem_id, m.solution_id)].update(dmpd_mean=m.dmpd_mean, n_dmpd=m.n)
    for m in nmv_means:
        joined.setdefault((m.problem_id, m.solution_id), {})
        joined[(m.problem_id, m.solution_id)].update(nmv_mean=m.nmv_mean, n_eligible=m.n_eligible)
    rows = []
    for (problem_id, solution_id) in sorted(joined):
        cells = joined[(problem_id, solution_id)]
        rows.append(
            [
                problem_id,
                solution_id,
                fmt(cells["dmpd_mean"]) if "dmpd_mean" in cells else "",
                str(cells.get("n_dmpd", "")),
                fmt(cells["nmv_mean"]) if "nmv_mean" in cells else "",
                str(cells.get("n_eligible", "")),
            ]
        )
    _write_csv(path, SOLUTIONS_HEADER, rows)


def read_solutions_csv(path) -> list[dict]:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or list(reader.fieldnames) != SOLUTIONS_HEADER:
            raise ValidationError(
                f"{path}: expected header {SOLUTIONS_HEADER}, got {reader.fieldnames}"
            )
        for row in reader:
            rows.append(
                {
                    "problem_id": row["problem_id"],
                    "solution_id": row["solution_id"],
                    "dmpd_mean": float(row["dmpd_mean"]) if row["dmpd_mean"] else None,
                    "nmv_mean": float(row["nmv_mean"]) if row["nmv_mean"] else None,
                }
            )
    return rows


def read_se_metrics_csv(path) -> list[dict]:
    """Externally computed quality metrics keyed by (problem_id, solution_id)."""
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise ValidationError(f"{path}: missing header row")
        missing = [c for c in SE_HEADER if c not in reader.fieldnames]
        if missing:
            raise ValidationError(f"{path}: header missing required columns {missing}")
        for lineno, row in enumerate(reader, start=2):
            parsed = {"problem_id": row["problem_id"], "solution_id": row["solution_id"]}
            for col in SE_METRIC_COLUMNS:
                cell = row.get(col, "")
                try:
                    parsed[col] = float(cell) if cell not in ("", None) else None
                except ValueError as exc:
                    raise ValidationError(f"{path}:{lineno}: bad {col} value {cell!r}") from exc
            rows.append(parsed)
    return rows


def write_correlation_csv(path, rows: Iterable[CorrelationRow]) -> None:
    def cell(v):
        return fmt(v) if v is not None else ""

    _write_csv(
        path,
        CORRELATION_HEADER,
        (
            [r.proxy, r.metric_name, cell(r.rho_spearman), cell(r.r_pearson),
             cell(r.cliffs_delta_t1_t3), str(r.n)]
            for r in rows
        ),
    )


# --------------------------------------------------------------------------
# run summaries


def write_summary(path, summary: dict) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(summary, handle, indent=2, sort_keys=True)
        handle.write("\n")


def write_exact_sidecar(out_path, payload: dict) -> Path:
    """Full-precision JSON next to a rounded CSV, for consumers that need it."""
    sidecar = Path(str(out_path) + ".exact.json")
    with open(sidecar, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return sidecar
