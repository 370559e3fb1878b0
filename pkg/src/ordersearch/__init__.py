"""Convex optimization driven only by noisy pairwise comparisons.

The oracle never reveals function values — only which of two points looks
better, with the comparison corrupted by bounded noise. The toolkit provides
a noise-aware golden-section line search with closed-form error bounds, a
two-dimensional square dichotomy built from those line searches, synthetic
noisy oracles and an experiment harness, and an HTTP session service that
lets a human play the oracle (pairwise drink tasting).
"""

from .bounds import (
    BoundReport,
    arg_accuracy,
    budget_report,
    grm_error_bound,
    grm_iterations,
    grm_value_error,
    inner_accuracy,
    noiseless_inner_iterations,
    outer_iterations,
    schedule_constant,
)
from .core import (
    GOLDEN_RATIO,
    NoiseKind,
    NoiseModel,
    OracleHandle,
    Point2,
    Preference,
    ProblemSpec,
    Rect,
    Segment,
    clamp_point,
    make_noise,
)
from .grm import (
    GrmResult,
    GrmState,
    grm_init,
    grm_midpoint,
    grm_question,
    grm_residual,
    grm_run,
    grm_step,
)
from .harness import (
    GrmSweepConfig,
    SquareSweepConfig,
    TrialRecord,
    brute_force_min,
    run_grm_sweep,
    run_square_sweep,
    summarize,
    write_report,
)
from .oracles import (
    QueuedOracle,
    SyntheticOracle,
    TestFunction,
    builtin_function,
    builtin_functions,
    parabola_1d,
    random_parabola_suite,
    scripted_respondent,
    shifted_quadratic,
    synthetic_compare,
)
from .square_search import (
    ComparisonRecord,
    Phase,
    SquareState,
    Transcript,
    replay_answers,
    square_advance,
    square_init,
    square_question,
    square_run,
)

__all__ = [
    "BoundReport",
    "ComparisonRecord",
    "GOLDEN_RATIO",
    "GrmResult",
    "GrmState",
    "GrmSweepConfig",
    "NoiseKind",
    "NoiseModel",
    "OracleHandle",
    "Phase",
    "Point2",
    "Preference",
    "ProblemSpec",
    "QueuedOracle",
    "Rect",
    "Segment",
    "SquareState",
    "SquareSweepConfig",
    "SyntheticOracle",
    "TestFunction",
    "Transcript",
    "TrialRecord",
    "arg_accuracy",
    "brute_force_min",
    "budget_report",
    "builtin_function",
    "builtin_functions",
    "clamp_point",
    "grm_error_bound",
    "grm_init",
    "grm_iterations",
    "grm_midpoint",
    "grm_question",
    "grm_residual",
    "grm_run",
    "grm_step",
    "grm_value_error",
    "inner_accuracy",
    "make_noise",
    "noiseless_inner_iterations",
    "outer_iterations",
    "parabola_1d",
    "random_parabola_suite",
    "replay_answers",
    "run_grm_sweep",
    "run_square_sweep",
    "schedule_constant",
    "scripted_respondent",
    "shifted_quadratic",
    "square_advance",
    "square_init",
    "square_question",
    "square_run",
    "summarize",
    "synthetic_compare",
    "write_report",
]

__version__ = "0.1.0"
