"""Closed-form iteration schedules and error bounds.

Every calculator takes the known problem constants (interval/side length R,
value-Lipschitz M, gradient-Lipschitz L, strong convexity mu, noise bound
delta, target accuracy epsilon) and returns either a guaranteed error or an
integer budget. Fractional budgets are ceiled and clamped below at 1: extra
comparisons never invalidate a guarantee.

Fixed mathematical constants used throughout: the golden ratio
phi = (1 + sqrt(5))/2 and Euler's number e.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import GOLDEN_RATIO, ProblemSpec

_PHI = GOLDEN_RATIO
_LN_PHI = math.log(GOLDEN_RATIO)
# 2 * (2 + sqrt(10)): geometry factor converting inner argument accuracy to
# the value loss accumulated across all region prunes.
_PRUNE_FACTOR = 2.0 * (2.0 + math.sqrt(10.0))


def _require_positive(**values: float) -> None:
    for name, v in values.items():
        if not (math.isfinite(v) and v > 0):
            raise ValueError(f"{name} must be a positive finite number, got {v}")


def schedule_constant(R: float, M: float) -> float:
    """The constant C = e*R*M*ln(phi) / (2*phi) appearing in every schedule."""
    _require_positive(R=R, M=M)
    return math.e * R * M * _LN_PHI / (2.0 * _PHI)


def grm_iterations(R: float, M: float, delta: float) -> int:
    """Noise-adapted line-search budget: ceil(log_phi(C / (e*delta))).

    Stopping earlier leaves interval error on the table, running longer just
    accumulates noise; this is the break-even point. Diverges as delta -> 0,
    so zero noise is rejected: pick the budget yourself in that regime.
    """
    _require_positive(R=R, M=M)
    if delta <= 0:
        raise ValueError("delta must be positive for the noise-adapted schedule")
    ratio = schedule_constant(R, M) / (math.e * delta)
    if ratio <= 1.0:
        return 1
    return max(1, math.ceil(math.log(ratio) / _LN_PHI))


def grm_value_error(R: float, M: float, delta: float) -> float:
    """Guaranteed value error after the noise-adapted budget:
    phi * delta * log_phi(C / delta).
    """
    _require_positive(R=R, M=M)
    if delta <= 0:
        raise ValueError("delta must be positive")
    ratio = schedule_constant(R, M) / delta
    if ratio < 1.0:
        raise ValueError(
            f"noise delta={delta} exceeds the schedule constant {schedule_constant(R, M)}; "
            "the guarantee degenerates"
        )
    return _PHI * delta * math.log(ratio) / _LN_PHI


def grm_error_bound(R: float, M: float, delta: float, n: int) -> float:
    """Value error bound after n line-search steps: R*M/(2*phi^n) + n*phi*delta."""
    _require_positive(R=R, M=M)
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return R * M / (2.0 * _PHI**n) + n * _PHI * delta


def arg_accuracy(epsilon: float, mu: float) -> float:
    """Argument accuracy sqrt(2*epsilon/mu) implied by value accuracy epsilon
    under strong convexity mu.
    """
    _require_positive(epsilon=epsilon, mu=mu)
    return math.sqrt(2.0 * epsilon / mu)


def inner_accuracy(epsilon: float, L: float, R: float) -> float:
    """Argument accuracy each midline search must reach so the square search
    lands within epsilon: epsilon / (2*(2+sqrt(10))*L*R).
    """
    _require_positive(epsilon=epsilon, L=L, R=R)
    return epsilon / (_PRUNE_FACTOR * L * R)


def outer_iterations(M: float, R: float, epsilon: float) -> int:
    """Square-halving iterations: ceil(log2(M*R*sqrt(2)/epsilon)), min 1."""
    _require_positive(M=M, R=R, epsilon=epsilon)
    ratio = M * R * math.sqrt(2.0) / epsilon
    if ratio <= 1.0:
        return 1
    return max(1, math.ceil(math.log2(ratio)))


def noiseless_inner_iterations(segment_length: float, delta_arg: float) -> int:
    """Smallest n with segment_length/(2*phi^n) <= delta_arg, min 1.

    Noiseless alternative to grm_iterations: the residual midpoint is then
    within delta_arg of the segment minimizer.
    """
    _require_positive(segment_length=segment_length, delta_arg=delta_arg)
    ratio = segment_length / (2.0 * delta_arg)
    if ratio <= 1.0:
        return 1
    return max(1, math.ceil(math.log(ratio) / _LN_PHI))


@dataclass(frozen=True)
class BoundReport:
    """Everything the full two-dimensional pipeline needs, precomputed.

    total_comparisons is exactly 4 * k_outer * n_inner: four line searches
    per halving iteration, n_inner comparisons each. epsilon_feasible says
    whether the requested accuracy is reachable at this noise level; the
    numbers are reported either way so callers can decide to warn or abort.
    """

    schedule_constant: float
    n_inner: int
    grm_value_error: float
    arg_accuracy: float
    inner_accuracy: float
    k_outer: int
    total_comparisons: int
    epsilon_feasible: bool


def budget_report(spec: ProblemSpec) -> BoundReport:
    """Assemble schedules and feasibility for a fully-specified problem.

    Requires delta > 0 (the noise-adapted schedule diverges at zero) and mu
    (to convert the line-search value error into argument accuracy).
    """
    if spec.delta <= 0:
        raise ValueError("delta must be positive for the noise-adapted schedule")
    if spec.mu is None:
        raise ValueError("mu is required to convert value accuracy to argument accuracy")

    c = schedule_constant(spec.R, spec.M)
    n_inner = grm_iterations(spec.R, spec.M, spec.delta)
    value_err = grm_value_error(spec.R, spec.M, spec.delta)
    achieved_arg = arg_accuracy(value_err, spec.mu) if value_err > 0 else 0.0
    required_arg = inner_accuracy(spec.epsilon, spec.L, spec.R)
    k = outer_iterations(spec.M, spec.R, spec.epsilon)
    return BoundReport(
        schedule_constant=c,
        n_inner=n_inner,
        grm_value_error=value_err,
        arg_accuracy=achieved_arg,
        inner_accuracy=required_arg,
        k_outer=k,
        total_comparisons=4 * k * n_inner,
        epsilon_feasible=achieved_arg <= required_arg,
    )
