"""Timing harness: closed-form evaluation versus the quadrature oracle.

Wall times are medians over repetitions (robust to scheduler noise), the
two routes are timed in separate non-interleaved blocks, and the
coefficient-table build is timed once and reported separately since it
amortizes over evaluations. Every timed pair is also checked for value
agreement; a fast wrong answer must fail the run, not win it.
"""

from __future__ import annotations

import io
import json
import math
import platform
import statistics
import time
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .closed_form import build_closed_form, evaluate
from .coefficients import CoeffTable
from .errors import BenchmarkAgreementError, DomainError, InsufficientDataError
from .oracles import QuadratureConfig, quadrature_transform


@dataclass(frozen=True)
class BenchEntry:
    l: int
    p: float
    closed_form_ns: int
    quadrature_ns: int
    speedup: float


@dataclass(frozen=True)
class BenchReport:
    entries: Tuple[BenchEntry, ...]
    environment: str
    reps: int
    table_build_ns: int


@dataclass(frozen=True)
class GrowthFit:
    b: float
    residual: float


def _median_ns(samples) -> int:
    return int(statistics.median(samples))


def run_benchmark(
    l_values: Sequence[int],
    p_values: Sequence[float],
    reps: int = 9,
    out_precision_bits: int = 64,
    cfg: Optional[QuadratureConfig] = None,
) -> BenchReport:
    """Time both routes for every (l, p) pair and return medians.

    The quadrature route is the baseline being beaten; its value also
    cross-checks the closed form, and disagreement beyond the oracle's
    error budget aborts the run.
    """
    if reps < 5:
        raise DomainError(f"reps must be at least 5, got {reps}")
    for p in p_values:
        if not (float(p) > 0.0) or math.isnan(float(p)) or math.isinf(float(p)):
            raise DomainError(f"transform argument must be a finite positive real, got {p}")
    if cfg is None:
        cfg = QuadratureConfig()

    environment = f"{platform.platform()} / Python {platform.python_version()}"

    if not l_values:
        return BenchReport(entries=(), environment=environment, reps=reps, table_build_ns=0)

    for l in l_values:
        if l < 0:
            raise DomainError(f"order must be nonnegative, got {l}")

    t0 = time.perf_counter_ns()
    table = CoeffTable.build(max(l_values))
    forms = {l: build_closed_form(l, table) for l in sorted(set(l_values))}
    table_build_ns = time.perf_counter_ns() - t0

    entries = []
    for l in l_values:
        cf = forms[l]
        for p in p_values:
            p = float(p)

            closed_val = float(evaluate(cf, p, out_precision_bits).value)  # warm-up
            closed_samples = []
            for _ in range(reps):
                t0 = time.perf_counter_ns()
                evaluate(cf, p, out_precision_bits)
                closed_samples.append(time.perf_counter_ns() - t0)

            oracle = quadrature_transform(l, p, cfg)  # warm-up
            quad_samples = []
            for _ in range(reps):
                t0 = time.perf_counter_ns()
                quadrature_transform(l, p, cfg)
                quad_samples.append(time.perf_counter_ns() - t0)

            budget = max(10.0 * oracle.error_estimate, 100.0 * cfg.abs_tolerance)
            if abs(closed_val - oracle.value) > budget:
                raise BenchmarkAgreementError(
                    f"routes disagree at l={l}, p={p}: closed form {closed_val!r}, "
                    f"quadrature {oracle.value!r}, budget {budget:.3e}"
                )

            closed_ns = _median_ns(closed_samples)
            quad_ns = _median_ns(quad_samples)
            entries.append(
                BenchEntry(
                    l=l,
                    p=p,
                    closed_form_ns=closed_ns,
                    quadrature_ns=quad_ns,
                    speedup=quad_ns / closed_ns,
                )
            )

    return BenchReport(
        entries=tuple(entries),
        environment=environment,
        reps=reps,
        table_build_ns=table_build_ns,
    )


def fit_growth(report: BenchReport, p: Optional[float] = None) -> GrowthFit:
    """Least-squares exponent b of speedup ~ a*exp(b*l) at one fixed p.

    With p omitted, the p value carrying the most distinct orders is used.
    Needs at least 4 distinct orders; the residual is the root-mean-square
    misfit of log speedup.
    """
    by_p = {}
    for e in report.entries:
        by_p.setdefault(e.p, {})[e.l] = e.speedup
    if p is None:
        candidates = [q for q, d in by_p.items() if len(d) >= 4]
        if not candidates:
            raise InsufficientDataError(
                "growth fit needs at least 4 distinct orders at a common p"
            )
        p = max(candidates, key=lambda q: (len(by_p[q]), -q))
    if p not in by_p or len(by_p[p]) < 4:
        raise InsufficientDataError(
            f"growth fit needs at least 4 distinct orders at p={p}"
        )
    points = sorted(by_p[p].items())
    xs = [float(l) for l, _ in points]
    ys = [math.log(s) for _, s in points]
    slope, intercept = statistics.linear_regression(xs, ys)
    residual = math.sqrt(
        sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys)) / len(xs)
    )
    return GrowthFit(b=slope, residual=residual)


def report_to_json(report: BenchReport) -> str:
    payload = {
        "environment": report.environment,
        "reps": report.reps,
        "table_build_ns": report.table_build_ns,
        "entries": [
            {
                "l": e.l,
                "p": e.p,
                "closed_form_ns": e.closed_form_ns,
                "quadrature_ns": e.quadrature_ns,
                "speedup": e.speedup,
            }
            for e in report.entries
        ],
    }
    return json.dumps(payload, separators=(",", ":"))


def report_to_csv(report: BenchReport) -> str:
    out = io.StringIO()
    out.write("l,p,closed_ns,quad_ns,speedup\n")
    for e in report.entries:
        out.write(f"{e.l},{e.p!r},{e.closed_form_ns},{e.quadrature_ns},{e.speedup!r}\n")
    return out.getvalue()
