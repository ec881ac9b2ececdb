"""Reproducible benchmark suites.

Each trial draws its instance from the PRNG stream ``(seed, index)``, so
rows are independent of scheduling; they are sorted by id before writing.
Wall-clock time is measured per row but kept out of the CSV, which must be
byte-identical across runs with the same seed.
"""

from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .core import evaluate, feasibility
from .evc import solve_evc
from .exact import ground_energy
from .gadgets import TIMInstance, gadget_convergence
from .generate import PRNG_NAME, make_rng, random_instance
from .localratio import TPCVC_RATIO, TVC_RATIO, solve_lr

CSV_COLUMNS = ("id", "seed", "n", "edges", "kind", "energy", "exact", "ratio", "delta", "gap_error")
SUITES = ("tvc-small", "pcvc-small", "evc-small", "gadget-sweep")
DEFAULT_TRIALS = {"tvc-small": 200, "pcvc-small": 200, "evc-small": 100, "gadget-sweep": 0}
DEFAULT_DELTAS = (8.0, 16.0, 32.0, 64.0)
RATIO_SLACK = 1e-7
EVC_MATCH_TOL = 1e-8
GAP_SLACK = 0.05
ENV_THREADS = "QLR_THREADS"


@dataclass
class BenchRow:
    id: str
    seed: int
    n: int
    edges: int
    kind: str
    energy: float
    exact: float | None = None
    ratio: float | None = None
    delta: float | None = None
    gap_error: float | None = None
    wall_ms: float = 0.0
    violation: str | None = None

    def cells(self) -> list[str]:
        def f(x):
            return "" if x is None else format(float(x), ".17g")

        return [self.id, str(self.seed), str(self.n), str(self.edges), self.kind,
                f(self.energy), f(self.exact), f(self.ratio), f(self.delta), f(self.gap_error)]


@dataclass
class BenchResult:
    suite: str
    seed: int
    rows: list[BenchRow]
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(CSV_COLUMNS)
        for r in self.rows:
            wr.writerow(r.cells())
        return buf.getvalue()

    def timings_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(("id", "wall_ms"))
        for r in self.rows:
            wr.writerow((r.id, format(r.wall_ms, ".6g")))
        return buf.getvalue()

    def summary(self) -> dict:
        ratios = [r.ratio for r in self.rows if r.ratio is not None]
        gaps = [r.gap_error for r in self.rows if r.gap_error is not None]
        out = {
            "suite": self.suite,
            "seed": self.seed,
            "prng": PRNG_NAME,
            "rows": len(self.rows),
            "max_ratio": max(ratios) if ratios else None,
            "mean_ratio": sum(ratios) / len(ratios) if ratios else None,
            "failures": len(self.failures),
        }
        if self.suite == "evc-small":
            out["max_abs_error"] = max((abs(r.energy - r.exact) for r in self.rows), default=0.0)
        if gaps:
            out["final_gap_error"] = gaps[-1]
        return out


def resolve_threads(flag: int | None) -> int:
    env = os.environ.get(ENV_THREADS)
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ValueError(f"{ENV_THREADS} must be an integer, got {env!r}") from exc
    return max(1, flag or 1)


def _trial_params(seed: int, index: int, n_max: int, n_min: int = 2) -> tuple[int, float]:
    # a separate stream from the instance itself so parameters never shift its draws
    rng = make_rng(seed, 1_000_000 + index)
    return int(rng.integers(n_min, n_max + 1)), float(rng.uniform(0.05, 0.6))


def _lr_row(suite: str, kind: str, bound: float, seed: int, index: int) -> BenchRow:
    n, density = _trial_params(seed, index, 10)
    t0 = time.perf_counter()
    inst = random_instance(kind, n, density, seed, index)
    state, _ = solve_lr(inst)
    energy = evaluate(inst, state)
    exact = ground_energy(inst).ground
    wall = 1e3 * (time.perf_counter() - t0)
    ratio = energy / exact if exact > 1e-12 else None
    row = BenchRow(f"{suite}-{index:05d}", seed, n, inst.m, kind, energy, exact, ratio, wall_ms=wall)
    if kind == "tvc" and not feasibility(inst, state):
        row.violation = "infeasible output"
    elif energy > bound * exact + RATIO_SLACK * max(1.0, abs(exact)):
        row.violation = f"ratio {energy / exact if exact else math.inf:.9g} exceeds {bound:.9g}"
    return row


def _evc_row(seed: int, index: int) -> BenchRow:
    case = index % 3
    n, density = _trial_params(seed, index, 9, 3 if case == 2 else 2)
    shape, psi = [("bipartite", "diagonal"), ("any", "singlet"), ("nonbipartite", "diagonal")][case]
    t0 = time.perf_counter()
    inst = random_instance("evc", n, density, seed, index, psi=psi, shape=shape)
    energy = solve_evc(inst).energy
    exact = ground_energy(inst).ground
    wall = 1e3 * (time.perf_counter() - t0)
    ratio = energy / exact if abs(exact) > 1e-12 else None
    row = BenchRow(f"evc-small-{index:05d}", seed, n, inst.m, "evc", energy, exact, ratio, wall_ms=wall)
    if abs(energy - exact) > EVC_MATCH_TOL:
        row.violation = f"|evc - oracle| = {abs(energy - exact):.3g}"
    return row


def _gadget_rows(seed: int, deltas: Sequence[float], threads: int) -> list[BenchRow]:
    tim = TIMInstance(2, ((0, 1),), (1.0,), (-0.5, -0.5))
    t0 = time.perf_counter()
    rep = gadget_convergence(tim, deltas, k=4, threads=threads)
    wall = 1e3 * (time.perf_counter() - t0) / max(1, len(deltas))
    rows = []
    for k, r in enumerate(rep.rows):
        rows.append(BenchRow(
            f"gadget-sweep-{k:05d}", seed, 2 * tim.n + 4 * len(tim.edges), tim.n + 8 * len(tim.edges),
            "tim", r.eigs[0], rep.tim_eigs[0], None, r.delta, r.max_gap_error, wall,
        ))
    errs = rep.errors
    for k in range(1, len(errs)):
        if errs[k] > errs[k - 1] * (1.0 + GAP_SLACK):
            rows[k].violation = "gap error increased with Delta"
    return rows


def run_suite(suite: str, trials: int | None = None, seed: int = 0, threads: int = 1,
              deltas: Sequence[float] | None = None) -> BenchResult:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    trials = DEFAULT_TRIALS[suite] if trials is None else trials
    if suite == "gadget-sweep":
        rows = _gadget_rows(seed, deltas or DEFAULT_DELTAS, threads)
    else:
        job: Callable[[int], BenchRow]
        if suite == "tvc-small":
            job = lambda i: _lr_row(suite, "tvc", TVC_RATIO, seed, i)  # noqa: E731
        elif suite == "pcvc-small":
            job = lambda i: _lr_row(suite, "pcvc", TPCVC_RATIO, seed, i)  # noqa: E731
        else:
            job = lambda i: _evc_row(seed, i)  # noqa: E731
        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                rows = list(pool.map(job, range(trials)))
        else:
            rows = [job(i) for i in range(trials)]
    rows.sort(key=lambda r: r.id)
    failures = [f"{r.id}: {r.violation}" for r in rows if r.violation]
    return BenchResult(suite, seed, rows, failures)
