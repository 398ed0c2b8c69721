"""Verification driver: run identity checks over an (identity, n, N, p)
grid of seeded trials and assemble a machine-readable report.

The report is deterministic: identical jobs (including the seed) produce
byte-identical JSON except for the `timing` sub-object, which is the only
place wall-clock data lives.  Trials are ordered by (catalog position of
the identity, n, N, p position, trial index); failing trials embed the
full instance so they can be replayed standalone.

Trial evaluation is embarrassingly parallel.  The ELLSUM_JOBS environment
variable sets the default number of worker processes (1 = in-process);
the report bytes do not depend on the degree.

Box limits for the box-arity identity are derived from the grid's (n, N)
by spreading N over n coordinates round-robin, e.g. n=3, N=4 -> (2, 1, 1),
so the box total always matches the grid's N.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any

from ._version import __version__
from .catalog import (
    CATALOG,
    IDENTITY_IDS,
    SCALAR_N,
    VECTOR_BOX,
    VECTOR_ONLY,
    IdentityInstance,
)
from .errors import BalancingError, ResampleExhaustedError
from .evaluate import evaluate_lhs, relative_error
from .sampler import REJECTION_REASONS, SampleConfig, _sample_with_values, sample_instance

SCHEMA_VERSION = 1
TOOL_NAME = "ellsum"

#: Environment variable holding the default parallelism degree.
JOBS_ENV_VAR = "ELLSUM_JOBS"


@dataclass(frozen=True)
class VerificationJob:
    """One verification run over a grid of cells."""

    identities: tuple[str, ...]
    n_values: tuple[int, ...] = (1, 2, 3, 4)
    N_values: tuple[int, ...] = (0, 1, 2, 3, 4)
    trials: int = 25
    tolerance: float = 1e-8
    config: SampleConfig = field(default_factory=SampleConfig)
    output_format: str = "json"

    def __post_init__(self):
        ids = self.identities
        if isinstance(ids, str):
            ids = IDENTITY_IDS if ids == "all" else (ids,)
        elif tuple(ids) == ("all",):
            ids = IDENTITY_IDS
        object.__setattr__(self, "identities", tuple(ids))
        for identity_id in self.identities:
            if identity_id not in CATALOG:
                raise BalancingError(f"unknown identity id {identity_id!r}")
        object.__setattr__(self, "n_values", tuple(int(v) for v in self.n_values))
        object.__setattr__(self, "N_values", tuple(int(v) for v in self.N_values))
        if not self.identities:
            raise ValueError("job needs at least one identity")
        if any(v < 1 for v in self.n_values):
            raise ValueError(f"n values must be >= 1, got {self.n_values}")
        if any(v < 0 for v in self.N_values):
            raise ValueError(f"N values must be >= 0, got {self.N_values}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.tolerance < 0:
            raise ValueError("tolerance must be >= 0")
        if self.output_format not in ("json", "table"):
            raise ValueError(f"unknown output format {self.output_format!r}")


@dataclass(frozen=True)
class TrialResult:
    identity_id: str
    n: int | None
    N: int | None
    box: tuple[int, ...] | None
    p: complex
    trial_index: int
    status: str  # pass | fail | resample-exhausted
    lhs: complex = 0.0
    rhs: complex = 0.0
    relative_error: float = float("nan")
    condition_ratio: float = float("nan")
    rejections: dict[str, int] = field(default_factory=dict)
    instance: IdentityInstance | None = None


@dataclass(frozen=True)
class VerificationReport:
    job: VerificationJob
    cells: list[dict]
    trials: list[TrialResult]
    verdict: str  # pass | fail
    timing: dict


def spread_box(n: int, total: int) -> tuple[int, ...]:
    """Round-robin spread of a total over n box coordinates."""
    base, extra = divmod(total, n)
    return tuple(base + (1 if i < extra else 0) for i in range(n))


def _cells_of(job: VerificationJob):
    """Deterministic cell list: (identity, n, N-or-box, p index)."""
    cells = []
    for identity_id in sorted(job.identities, key=IDENTITY_IDS.index):
        arity = CATALOG[identity_id].arity
        if arity == SCALAR_N:
            n_list = [None]
        else:
            n_list = list(job.n_values)
        for n in n_list:
            if arity == VECTOR_ONLY:
                N_list = [None]
            else:
                N_list = list(job.N_values)
            for N in N_list:
                box = spread_box(n, N) if arity == VECTOR_BOX else None
                for p_index, p in enumerate(job.config.p_values):
                    cells.append((identity_id, n, N, box, p_index, complex(p)))
    return cells


def _run_cell(job: VerificationJob, cell) -> list[TrialResult]:
    identity_id, n, N, box, _p_index, p = cell
    results = []
    for trial_index in range(job.trials):
        try:
            instance, lhs, rhs, condition, rejections = _sample_with_values(
                identity_id, n=n, N=N if box is None else None, box=box,
                config=job.config, trial_index=trial_index, p=p)
        except ResampleExhaustedError as exc:
            results.append(TrialResult(
                identity_id=identity_id, n=n, N=N, box=box, p=p,
                trial_index=trial_index, status="resample-exhausted",
                rejections=exc.histogram))
            continue
        error = relative_error(lhs, rhs)
        status = "pass" if error <= job.tolerance else "fail"
        results.append(TrialResult(
            identity_id=identity_id, n=n, N=N, box=box, p=p,
            trial_index=trial_index, status=status, lhs=lhs, rhs=rhs,
            relative_error=error, condition_ratio=condition,
            rejections=rejections,
            instance=None if status == "pass" else instance))
    return results


def _cell_worker(payload):
    job, cell = payload
    t0 = time.perf_counter()
    results = _run_cell(job, cell)
    return results, time.perf_counter() - t0


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV_VAR, "1")))
    except ValueError:
        return 1


def run_job(job: VerificationJob, *, jobs: int | None = None) -> VerificationReport:
    """Execute every cell of the job; deterministic given the job."""
    cells = _cells_of(job)
    degree = default_jobs() if jobs is None else max(1, jobs)
    started_at = datetime.now(timezone.utc).isoformat()
    t0 = time.perf_counter()
    if degree > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=degree) as pool:
            timed = list(pool.map(_cell_worker, [(job, c) for c in cells]))
    else:
        timed = [_cell_worker((job, cell)) for cell in cells]
    per_cell = [results for results, _ in timed]
    cell_seconds = [seconds for _, seconds in timed]
    total_seconds = time.perf_counter() - t0

    trials: list[TrialResult] = []
    cell_summaries: list[dict] = []
    for cell, results in zip(cells, per_cell):
        identity_id, n, N, box, _p_index, p = cell
        trials.extend(results)
        errors = sorted(r.relative_error for r in results if r.status != "resample-exhausted")
        rejections = {reason: 0 for reason in REJECTION_REASONS}
        for r in results:
            for reason, count in r.rejections.items():
                rejections[reason] = rejections.get(reason, 0) + count
        cell_summaries.append({
            "identity": identity_id,
            "n": n,
            "N": list(box) if box is not None else N,
            "p": _complex_json(p),
            "trials": len(results),
            "passes": sum(r.status == "pass" for r in results),
            "max_relative_error": errors[-1] if errors else None,
            "median_relative_error": errors[len(errors) // 2] if errors else None,
            "max_condition_ratio": max(
                (r.condition_ratio for r in results if r.status != "resample-exhausted"),
                default=None),
            "rejections": rejections,
        })
    verdict = "pass" if all(r.status == "pass" for r in trials) else "fail"
    timing = {
        "started_at": started_at,
        "total_seconds": total_seconds,
        "cell_seconds": cell_seconds,
    }
    return VerificationReport(job=job, cells=cell_summaries, trials=trials,
                              verdict=verdict, timing=timing)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _complex_json(value: complex) -> dict:
    value = complex(value)
    return {"re": value.real, "im": value.imag}


def _config_json(config: SampleConfig) -> dict:
    return {
        "seed": config.seed,
        "modulus_range": list(config.modulus_range),
        "p_values": [_complex_json(p) for p in config.p_values],
        "q_range": list(config.q_range),
        "pole_floor": config.pole_floor,
        "condition_cap": config.condition_cap,
        "max_resamples": config.max_resamples,
        "min_z_separation": config.min_z_separation,
        "truncation": {"epsilon": config.truncation.epsilon,
                       "max_terms": config.truncation.max_terms},
    }


def _instance_json(instance: IdentityInstance) -> dict:
    return {
        "identity": instance.identity_id,
        "params": {name: _complex_json(v) for name, v in instance.params.items()},
        "z": None if instance.z is None else [_complex_json(v) for v in instance.z],
        "N": instance.N,
        "box": None if instance.box is None else list(instance.box),
        "nome": {
            "p": _complex_json(instance.nome.p),
            "q": _complex_json(instance.nome.q),
            "truncation": {"epsilon": instance.nome.truncation.epsilon,
                           "max_terms": instance.nome.truncation.max_terms},
        },
    }


def _trial_json(result: TrialResult) -> dict:
    out: dict[str, Any] = {
        "identity": result.identity_id,
        "n": result.n,
        "N": list(result.box) if result.box is not None else result.N,
        "p": _complex_json(result.p),
        "trial": result.trial_index,
        "status": result.status,
    }
    if result.status != "resample-exhausted":
        out.update({
            "lhs": _complex_json(result.lhs),
            "rhs": _complex_json(result.rhs),
            "relative_error": result.relative_error,
            "condition_ratio": result.condition_ratio,
        })
    out["rejections"] = dict(result.rejections)
    if result.instance is not None:
        out["instance"] = _instance_json(result.instance)
    return out


def report_to_dict(report: VerificationReport) -> dict:
    job = report.job
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": TOOL_NAME,
        "version": __version__,
        "job": {
            "identities": list(job.identities),
            "n_values": list(job.n_values),
            "N_values": list(job.N_values),
            "trials": job.trials,
            "tolerance": job.tolerance,
            "format": job.output_format,
            "sample_config": _config_json(job.config),
        },
        "cells": report.cells,
        "trials": [_trial_json(r) for r in report.trials],
        "verdict": report.verdict,
        "timing": report.timing,
    }


def report_to_json(report: VerificationReport) -> str:
    return json.dumps(report_to_dict(report), indent=2)


def report_to_table(report: VerificationReport) -> str:
    lines = []
    header = (f"{'identity':<16} {'n':>3} {'N':>9} {'p':>12} "
              f"{'pass':>5} {'max rel err':>12} {'max cond':>10}")
    lines.append(header)
    lines.append("-" * len(header))
    for cell in report.cells:
        n_text = "-" if cell["n"] is None else str(cell["n"])
        N_value = cell["N"]
        if N_value is None:
            N_text = "-"
        elif isinstance(N_value, list):
            N_text = "(" + ",".join(map(str, N_value)) + ")"
        else:
            N_text = str(N_value)
        p = cell["p"]
        p_text = f"{p['re']:g}" if p["im"] == 0 else f"{p['re']:g}{p['im']:+g}i"
        err = cell["max_relative_error"]
        err_text = "-" if err is None else f"{err:.3e}"
        cond = cell["max_condition_ratio"]
        cond_text = "-" if cond is None else f"{cond:.2e}"
        lines.append(f"{cell['identity']:<16} {n_text:>3} {N_text:>9} {p_text:>12} "
                     f"{cell['passes']:>3}/{cell['trials']:<2} {err_text:>12} {cond_text:>10}")
    lines.append(f"verdict: {report.verdict}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Benchmark
# ---------------------------------------------------------------------------


def _count_terms(instance: IdentityInstance) -> int:
    from .evaluate import _LHS

    domain, _ = _LHS[instance.identity_id]
    return sum(1 for _ in domain(instance))


def run_bench(identity_id: str, *, n: int | None, N_values, config: SampleConfig,
              p: complex | None = None, min_seconds: float = 0.05) -> list[dict]:
    """Time evaluate_lhs with and without memoization over growing N.

    Returns one row per N with term counts and terms/second both ways.
    """
    rows = []
    for N in N_values:
        entry = CATALOG[identity_id]
        box = spread_box(n, N) if entry.arity == VECTOR_BOX else None
        instance = sample_instance(
            identity_id, n=n, N=N if box is None else None, box=box,
            config=config, trial_index=0, p=p)
        terms = _count_terms(instance)
        row = {"identity": identity_id, "n": n, "N": N, "terms": terms}
        for label, memoize in (("memoized", True), ("plain", False)):
            reps = 0
            t0 = time.perf_counter()
            elapsed = 0.0
            while elapsed < min_seconds:
                evaluate_lhs(instance, memoize=memoize)
                reps += 1
                elapsed = time.perf_counter() - t0
            seconds = elapsed / reps
            row[f"{label}_seconds"] = seconds
            row[f"{label}_terms_per_second"] = terms / seconds if seconds > 0 else float("inf")
        rows.append(row)
    return rows
