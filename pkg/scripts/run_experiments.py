#!/usr/bin/env python3
"""Reproduce the package's synthetic study end to end.

Writes four CSV reports (plus per-regime summaries) into results/:

  grm_noiseless.csv   100 random 1-D quadratics, fixed schedule n=30
  grm_noisy.csv       uniform + adversarial noise, delta grid, auto schedules
  square_noiseless.csv  builtin 2-D suite, accuracy grid, derived budgets
  square_noisy.csv      same suite under uniform noise

Every run is deterministic: rerunning produces byte-identical files.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from ordersearch.core import NoiseKind, NoiseModel
from ordersearch.harness import (
    GrmSweepConfig,
    SquareSweepConfig,
    run_grm_sweep,
    run_square_sweep,
    summarize,
    write_report,
)
from ordersearch.oracles import builtin_function, random_parabola_suite

RESULTS = Path(__file__).resolve().parent.parent / "results"

DELTAS = (1e-2, 1e-3, 1e-4)
EPSILONS = (0.1, 0.03, 0.01)


def main() -> int:
    RESULTS.mkdir(exist_ok=True)
    parabolas = tuple(random_parabola_suite(100, np.random.default_rng(2024)))
    square_suite = (
        builtin_function("quadratic"),
        builtin_function("aniso_quadratic"),
        builtin_function("logsumexp"),
    )

    reports = []

    records = run_grm_sweep(
        GrmSweepConfig(functions=parabolas, n_values=(30,), base_seed=2024)
    )
    reports.append(("grm_noiseless", records))

    noisy_models = tuple(
        NoiseModel(kind, delta=delta)
        for kind in (NoiseKind.UNIFORM_BOUNDED, NoiseKind.ADVERSARIAL_FLIP)
        for delta in DELTAS
    )
    records = run_grm_sweep(
        GrmSweepConfig(
            functions=parabolas[:25],
            noise=noisy_models,
            n_values=(None,),  # noise-adapted schedule per (length, M, delta)
            trials=4,
            base_seed=7,
        )
    )
    reports.append(("grm_noisy", records))

    records = run_square_sweep(
        SquareSweepConfig(functions=square_suite, epsilons=EPSILONS, base_seed=5)
    )
    reports.append(("square_noiseless", records))

    records = run_square_sweep(
        SquareSweepConfig(
            functions=square_suite,
            epsilons=(0.1, 0.03),
            noise=(NoiseModel(NoiseKind.UNIFORM_BOUNDED, delta=1e-4),),
            trials=3,
            base_seed=11,
        )
    )
    reports.append(("square_noisy", records))

    failures = 0
    for name, records in reports:
        csv_path, _ = write_report(records, RESULTS / f"{name}.csv")
        print(f"== {name}: {len(records)} records -> {csv_path}")
        print(summarize(records), end="")
        failures += sum(r.violated for r in records)
    if failures:
        print(f"ERROR: {failures} trials violated their bounds", file=sys.stderr)
        return 1
    print("all trials within bounds")
    return 0


if __name__ == "__main__":
    sys.exit(main())
