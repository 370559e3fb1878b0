"""Experiment harness: brute-force ground truth, convergence sweeps over
synthetic oracles, and deterministic CSV reports.

Every achieved error is measured against two witnesses where possible: the
analytic minimum declared on the test function and an independent dense-grid
minimum. Disagreement beyond the grid's resolution fails the run loudly
rather than producing a quietly wrong report.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .bounds import (
    budget_report,
    grm_error_bound,
    grm_iterations,
    inner_accuracy,
    noiseless_inner_iterations,
    outer_iterations,
)
from .core import NoiseKind, NoiseModel, Point2, ProblemSpec, Rect, Segment
from .grm import grm_run
from .oracles import SyntheticOracle, TestFunction
from .square_search import square_run

_REL_SLACK = 1e-9

CSV_COLUMNS = (
    "function_id",
    "noise_kind",
    "delta",
    "n_inner",
    "k_outer",
    "seed",
    "achieved_error",
    "bound",
    "comparisons",
    "violated",
)


@dataclass(frozen=True)
class TrialRecord:
    """One trial's outcome. k_outer is 0 for pure line-search trials."""

    function_id: str
    noise_kind: str
    delta: float
    n_inner: int
    k_outer: int
    seed: int
    achieved_error: float
    bound: float
    comparisons: int
    violated: bool

    def sort_key(self):
        return (
            self.function_id,
            self.noise_kind,
            self.delta,
            self.n_inner,
            self.k_outer,
            self.seed,
        )


def violation_slack(bound: float, grid_slack: float = 0.0) -> float:
    """Global numeric-slack policy: relative 1e-9 on the bound plus whatever
    resolution the grid witness contributes."""
    return _REL_SLACK * max(1.0, abs(bound)) + grid_slack


def trial_seed(base_seed: int, *indices: int) -> int:
    """Stable per-trial seed, independent of execution order."""
    return int(np.random.SeedSequence([base_seed, *indices]).generate_state(1)[0])


# ---------------------------------------------------------------------------
# Ground truth


def brute_force_min(f: TestFunction, region: Rect, grid_n: int) -> tuple[Point2, float]:
    """Minimum of f over the (grid_n+1)^2 lattice spanning region, corners
    included. The value overshoots the true minimum by at most
    M * diameter(region) / grid_n."""
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n}")
    xs = np.linspace(region.x_min, region.x_max, grid_n + 1)
    ys = np.linspace(region.y_min, region.y_max, grid_n + 1)
    grid_x, grid_y = np.meshgrid(xs, ys, indexing="ij")
    values = np.asarray(f.fn(grid_x, grid_y), dtype=float)
    i, j = np.unravel_index(int(np.argmin(values)), values.shape)
    return Point2(float(xs[i]), float(ys[j])), float(values[i, j])


def _region_diameter(region: Rect) -> float:
    return math.hypot(2.0 * region.half_width, 2.0 * region.half_height)


def region_min(f: TestFunction, region: Rect, grid_n: int) -> tuple[float, float]:
    """(reference minimum, grid slack) over a rectangle.

    Always evaluates the grid witness. When the function's analytic minimum
    lies inside the region the two must agree within the grid's resolution
    and the analytic value (slack 0) is returned.
    """
    _, grid_value = brute_force_min(f, region, grid_n)
    grid_slack = f.M * _region_diameter(region) / grid_n
    if f.analytic_min is not None:
        point, value = f.analytic_min
        if region.contains(point):
            if not (value - violation_slack(value) <= grid_value <= value + grid_slack + _REL_SLACK):
                raise RuntimeError(
                    f"ground-truth witnesses disagree on {f.id}: "
                    f"analytic {value!r}, grid {grid_value!r}, slack {grid_slack!r}"
                )
            return value, 0.0
    return grid_value, grid_slack


def segment_min(
    f: TestFunction, segment: Segment, grid_n: int, lo: float = 0.0, hi: float = 1.0
) -> tuple[float, float]:
    """(reference minimum, grid slack) over segment.point_at(u), u in [lo, hi].

    Grid witness always runs; an analytic minimum lying on the sampled part
    of the segment (within the lattice spacing) is cross-checked and used.
    """
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n}")
    if not 0.0 <= lo < hi <= 1.0:
        raise ValueError(f"need 0 <= lo < hi <= 1, got [{lo}, {hi}]")
    ts = np.linspace(lo, hi, grid_n + 1)
    xs = segment.p0.x + (segment.p1.x - segment.p0.x) * ts
    ys = segment.p0.y + (segment.p1.y - segment.p0.y) * ts
    values = np.asarray(f.fn(xs, ys), dtype=float)
    grid_value = float(values.min())
    spacing = segment.length * (hi - lo) / grid_n
    grid_slack = f.M * spacing
    if f.analytic_min is not None:
        point, value = f.analytic_min
        # Project the minimizer onto the segment's parameter.
        dx, dy = segment.p1.x - segment.p0.x, segment.p1.y - segment.p0.y
        u = ((point.x - segment.p0.x) * dx + (point.y - segment.p0.y) * dy) / (
            segment.length**2
        )
        on_line = segment.point_at(min(max(u, 0.0), 1.0)).distance_to(point) <= spacing
        if on_line and lo <= u <= hi:
            if not (value - violation_slack(value) <= grid_value <= value + grid_slack + _REL_SLACK):
                raise RuntimeError(
                    f"ground-truth witnesses disagree on {f.id} along a segment: "
                    f"analytic {value!r}, grid {grid_value!r}, slack {grid_slack!r}"
                )
            return value, 0.0
    return grid_value, grid_slack


# ---------------------------------------------------------------------------
# Sweeps


@dataclass(frozen=True)
class GrmSweepConfig:
    """Line-search sweep: functions x noise models x schedule lengths.

    n_values entries may be None, meaning "derive the noise-adapted schedule
    from this trial's (R, M, delta)". segment=None searches each function's
    domain along its horizontal midline. trials repeats each combination
    with per-trial derived seeds.
    """

    functions: tuple[TestFunction, ...]
    noise: tuple[NoiseModel, ...] = (NoiseModel(NoiseKind.ZERO),)
    n_values: tuple[int | None, ...] = (None,)
    trials: int = 1
    base_seed: int = 0
    segment: Segment | None = None
    grid_n: int = 4096


def domain_midline(region: Rect) -> Segment:
    """Horizontal midline of a rectangle, left to right."""
    c, d = region.center, region.half_width
    return Segment(Point2(c.x - d, c.y), Point2(c.x + d, c.y))


def run_grm_sweep(config: GrmSweepConfig) -> list[TrialRecord]:
    """Run the line search on every combination and compare the achieved
    value error at the returned midpoint against the closed-form bound."""
    records: list[TrialRecord] = []
    for fi, f in enumerate(config.functions):
        segment = config.segment if config.segment is not None else domain_midline(f.domain)
        length = segment.length
        reference, grid_slack = segment_min(f, segment, config.grid_n)
        for mi, model in enumerate(config.noise):
            for ni, n_request in enumerate(config.n_values):
                if n_request is None:
                    if model.delta <= 0:
                        raise ValueError(
                            "n=None derives the noise-adapted schedule, which "
                            "needs delta > 0; pass an explicit n for noiseless runs"
                        )
                    n = grm_iterations(length, f.M, model.delta)
                else:
                    n = n_request
                bound = grm_error_bound(length, f.M, model.delta, n)
                for t in range(config.trials):
                    seed = trial_seed(config.base_seed, fi, mi, ni, t)
                    oracle = SyntheticOracle(f, replace(model, seed=seed))
                    result = grm_run(segment, oracle, n)
                    achieved = f.eval(result.point) - reference
                    records.append(
                        TrialRecord(
                            function_id=f.id,
                            noise_kind=model.kind.value,
                            delta=model.delta,
                            n_inner=n,
                            k_outer=0,
                            seed=seed,
                            achieved_error=achieved,
                            bound=bound,
                            comparisons=result.comparisons_used,
                            violated=achieved > bound + violation_slack(bound, grid_slack),
                        )
                    )
    records.sort(key=TrialRecord.sort_key)
    return records


@dataclass(frozen=True)
class SquareSweepConfig:
    """Two-dimensional sweep: functions x target accuracies x noise models.

    n_inner=None derives the budget: the noise-adapted schedule when the
    noise bound is positive, otherwise the noiseless count that brings the
    line-search argument error under the per-search accuracy. k_outer=None
    derives the halving count from (M, side, epsilon).
    """

    functions: tuple[TestFunction, ...]
    epsilons: tuple[float, ...]
    noise: tuple[NoiseModel, ...] = (NoiseModel(NoiseKind.ZERO),)
    trials: int = 1
    base_seed: int = 0
    n_inner: int | None = None
    k_outer: int | None = None
    grid_n: int = 1000


def _derived_budgets(
    f: TestFunction, epsilon: float, model: NoiseModel, config: SquareSweepConfig
) -> tuple[int, int]:
    side = 2.0 * f.domain.half_width
    k = config.k_outer if config.k_outer is not None else outer_iterations(f.M, side, epsilon)
    if config.n_inner is not None:
        n = config.n_inner
    elif model.delta > 0:
        n = grm_iterations(side, f.M, model.delta)
    else:
        n = noiseless_inner_iterations(side, inner_accuracy(epsilon, f.L, side))
    return n, k


def _warn_if_infeasible(f: TestFunction, epsilon: float, model: NoiseModel) -> None:
    if model.delta <= 0 or f.mu is None:
        return
    side = 2.0 * f.domain.half_width
    report = budget_report(
        ProblemSpec(R=side, M=f.M, L=f.L, epsilon=epsilon, delta=model.delta, mu=f.mu)
    )
    if not report.epsilon_feasible:
        warnings.warn(
            f"epsilon={epsilon} is below the feasibility threshold for {f.id} "
            f"at delta={model.delta}; running anyway",
            stacklevel=3,
        )


def run_square_sweep(config: SquareSweepConfig) -> list[TrialRecord]:
    """Run the full two-dimensional search; achieved error is f(final center)
    minus the domain minimum, bounded by the requested epsilon."""
    records: list[TrialRecord] = []
    for fi, f in enumerate(config.functions):
        if not f.domain.is_square:
            raise ValueError(f"{f.id}: two-dimensional sweep needs a square domain")
        reference, grid_slack = region_min(f, f.domain, config.grid_n)
        for ei, epsilon in enumerate(config.epsilons):
            if epsilon <= 0:
                raise ValueError(f"epsilon must be positive, got {epsilon}")
            for mi, model in enumerate(config.noise):
                _warn_if_infeasible(f, epsilon, model)
                n, k = _derived_budgets(f, epsilon, model, config)
                for t in range(config.trials):
                    seed = trial_seed(config.base_seed, fi, ei, mi, t)
                    oracle = SyntheticOracle(f, replace(model, seed=seed))
                    center, transcript = square_run(f.domain, oracle, k, n)
                    achieved = f.eval(center) - reference
                    records.append(
                        TrialRecord(
                            function_id=f.id,
                            noise_kind=model.kind.value,
                            delta=model.delta,
                            n_inner=n,
                            k_outer=k,
                            seed=seed,
                            achieved_error=achieved,
                            bound=epsilon,
                            comparisons=len(transcript.comparisons),
                            violated=achieved > epsilon + violation_slack(epsilon, grid_slack),
                        )
                    )
    records.sort(key=TrialRecord.sort_key)
    return records


# ---------------------------------------------------------------------------
# Reports


def _fmt(value: float) -> str:
    return format(value, ".17g")


def write_report(
    records: Sequence[TrialRecord],
    csv_path: str | Path,
    summary_path: str | Path | None = None,
) -> tuple[Path, Path]:
    """Write the trial CSV (exact column order, 17-significant-digit floats)
    and a per-regime summary. Identical records produce byte-identical files."""
    csv_path = Path(csv_path)
    summary_path = (
        Path(summary_path) if summary_path is not None else csv_path.with_suffix(".summary.txt")
    )
    ordered = sorted(records, key=TrialRecord.sort_key)

    csv_path.parent.mkdir(parents=True, exist_ok=True)
    with csv_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in ordered:
            writer.writerow(
                [
                    r.function_id,
                    r.noise_kind,
                    _fmt(r.delta),
                    r.n_inner,
                    r.k_outer,
                    r.seed,
                    _fmt(r.achieved_error),
                    _fmt(r.bound),
                    r.comparisons,
                    "true" if r.violated else "false",
                ]
            )

    with summary_path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(summarize(ordered))
    return csv_path, summary_path


def summarize(records: Sequence[TrialRecord]) -> str:
    """Per-(noise kind, delta) regime: trial count, violations, and the worst
    achieved/bound ratio."""
    lines = ["regime summary (noise_kind, delta): trials, violations, max error/bound"]
    regimes: dict[tuple[str, float], list[TrialRecord]] = {}
    for r in records:
        regimes.setdefault((r.noise_kind, r.delta), []).append(r)
    for (kind, delta), rs in sorted(regimes.items()):
        ratios = [
            r.achieved_error / r.bound
            if r.bound != 0
            else (0.0 if r.achieved_error <= 0 else math.inf)
            for r in rs
        ]
        worst = max(ratios) if ratios else 0.0
        violations = sum(r.violated for r in rs)
        lines.append(
            f"  {kind}, delta={_fmt(delta)}: trials={len(rs)}, "
            f"violations={violations}, max_ratio={_fmt(worst)}"
        )
    return "\n".join(lines) + "\n"
