"""Golden-ratio line search driven by a comparison oracle.

The search runs in parameter space [0, 1] along a segment and keeps two
interior probes in golden-ratio positions, so each comparison discards a
1/phi fraction of the interval and reuses one probe. A Tie answer ends the
search immediately (the respondent cannot tell the probes apart); the
midpoint of the residual interval is the answer either way.

State transitions are pure: ``grm_step`` returns a new state and never
mutates its input, so states can be persisted, replayed, and shared.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .core import GOLDEN_RATIO, OracleHandle, Point2, Preference, Segment

_PHI = GOLDEN_RATIO
# Relative drift at which probes are rebalanced from the interval bounds.
_RATIO_TOL = 1e-9


@dataclass(frozen=True)
class GrmState:
    """Residual interval [a, b] with probes s < t, in segment parameters."""

    segment: Segment
    a: float
    b: float
    s: float
    t: float
    i: int
    n_total: int
    finished: bool = False
    tie_stopped: bool = False


@dataclass(frozen=True)
class GrmResult:
    point: Point2
    residual: Segment
    comparisons_used: int
    tie_stopped: bool


def _probe_low(a: float, b: float) -> float:
    return b - (b - a) / _PHI


def _probe_high(a: float, b: float) -> float:
    return a + (b - a) / _PHI


def _ratios_ok(a: float, b: float, s: float, t: float) -> bool:
    width = b - a
    if width <= 0.0 or not (a < s < t < b):
        return False
    lo = (b - s) / (s - a) if s > a else float("inf")
    hi = (t - a) / (b - t) if t < b else float("inf")
    return abs(lo - _PHI) <= _RATIO_TOL * _PHI and abs(hi - _PHI) <= _RATIO_TOL * _PHI


def grm_init(segment: Segment, n_total: int) -> GrmState:
    """Fresh search over the whole segment with a budget of n_total steps."""
    if n_total < 1:
        raise ValueError(f"n_total must be >= 1, got {n_total}")
    return GrmState(
        segment=segment,
        a=0.0,
        b=1.0,
        s=_probe_low(0.0, 1.0),
        t=_probe_high(0.0, 1.0),
        i=0,
        n_total=n_total,
    )


def grm_question(state: GrmState) -> tuple[Point2, Point2]:
    """The two probe points to compare next, in absolute coordinates."""
    if state.finished:
        raise ValueError("search already finished")
    return state.segment.point_at(state.s), state.segment.point_at(state.t)


def grm_step(state: GrmState, answer: Preference) -> GrmState:
    """Advance by one answered comparison.

    FIRST (the low probe looked smaller) keeps [a, t]; SECOND keeps [s, b].
    The surviving probe is carried over bit-identically and the fresh probe
    is recomputed from the new bounds, which keeps golden-ratio drift from
    compounding across steps.
    """
    if state.finished:
        raise ValueError("search already finished")

    if answer is Preference.TIE:
        return replace(state, finished=True, tie_stopped=True)

    if answer is Preference.SECOND:
        a, b = state.s, state.b
        s = state.t
        t = _probe_high(a, b)
    else:
        a, b = state.a, state.t
        t = state.s
        s = _probe_low(a, b)

    if not _ratios_ok(a, b, s, t):
        s = _probe_low(a, b)
        t = _probe_high(a, b)

    i = state.i + 1
    return replace(state, a=a, b=b, s=s, t=t, i=i, finished=(i >= state.n_total))


def grm_midpoint(state: GrmState) -> Point2:
    return state.segment.point_at((state.a + state.b) / 2.0)


def grm_residual(state: GrmState) -> Segment:
    return Segment(state.segment.point_at(state.a), state.segment.point_at(state.b))


def grm_run(segment: Segment, oracle: OracleHandle, n_total: int) -> GrmResult:
    """Drive a full search against an oracle and return the midpoint answer."""
    state = grm_init(segment, n_total)
    comparisons = 0
    while not state.finished:
        p, q = grm_question(state)
        answer = oracle.compare(p, q)
        comparisons += 1
        state = grm_step(state, answer)
    return GrmResult(
        point=grm_midpoint(state),
        residual=grm_residual(state),
        comparisons_used=comparisons,
        tie_stopped=state.tie_stopped,
    )
