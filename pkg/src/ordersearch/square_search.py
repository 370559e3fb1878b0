"""Two-dimensional search on a square via alternating midline line searches.

Each full iteration runs four line searches and two prunes:

1. find the minimum on the horizontal midline (anchor A),
2. find the minimum on the vertical line through A (point B), then keep the
   horizontal half-rectangle containing B,
3. find the minimum on the kept rectangle's vertical midline (new anchor),
4. find the minimum on the horizontal line through that anchor, keep the
   vertical half containing it, and halve the region side.

The kept region is a square again, half the side, a quarter of the area.
Prunes at an exact midline hit keep the lower/left half so transcripts are
reproducible. The state machine is pure and incremental, which is what lets
a human answer one comparison at a time over HTTP; ``square_run`` is the
batch driver for synthetic oracles.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from .core import OracleHandle, Point2, Preference, Rect, Segment
from .grm import GrmState, grm_init, grm_midpoint, grm_question, grm_step


class Phase(enum.Enum):
    HORIZONTAL_MIDLINE = "horizontal_midline"
    VERTICAL_THROUGH_ANCHOR = "vertical_through_anchor"
    VERTICAL_MIDLINE = "vertical_midline"
    HORIZONTAL_THROUGH_ANCHOR = "horizontal_through_anchor"


@dataclass(frozen=True)
class SquareState:
    """Current region, the line search in flight, and the pruning history."""

    region: Rect
    phase: Phase
    inner: GrmState | None
    pending_anchor: Point2 | None
    iteration: int
    k_total: int
    n_inner: int
    comparisons: int
    history: tuple[tuple[Rect, Phase], ...]

    @property
    def finished(self) -> bool:
        return self.iteration >= self.k_total


@dataclass(frozen=True)
class ComparisonRecord:
    first: Point2
    second: Point2
    answer: Preference
    phase: Phase
    iteration: int


@dataclass
class Transcript:
    """Replayable log of one run: every comparison in order, plus the region
    and line-search geometry needed to redraw the search."""

    comparisons: list[ComparisonRecord] = field(default_factory=list)
    regions: list[Rect] = field(default_factory=list)
    segments: list[tuple[Segment, Phase]] = field(default_factory=list)

    @property
    def ties(self) -> list[ComparisonRecord]:
        return [c for c in self.comparisons if c.answer is Preference.TIE]

    def answers(self) -> list[Preference]:
        return [c.answer for c in self.comparisons]


def _horizontal_midline(region: Rect) -> Segment:
    c, d = region.center, region.half_width
    return Segment(Point2(c.x - d, c.y), Point2(c.x + d, c.y))


def square_init(square: Rect, k_total: int, n_inner: int) -> SquareState:
    """Start a search on a square region with the given budgets."""
    if not square.is_square:
        raise ValueError(
            f"region must be a square, got half sides {square.half_width} x {square.half_height}"
        )
    if k_total < 1:
        raise ValueError(f"k_total must be >= 1, got {k_total}")
    if n_inner < 1:
        raise ValueError(f"n_inner must be >= 1, got {n_inner}")
    return SquareState(
        region=square,
        phase=Phase.HORIZONTAL_MIDLINE,
        inner=grm_init(_horizontal_midline(square), n_inner),
        pending_anchor=None,
        iteration=0,
        k_total=k_total,
        n_inner=n_inner,
        comparisons=0,
        history=((square, Phase.HORIZONTAL_MIDLINE),),
    )


def square_question(state: SquareState) -> tuple[Point2, Point2]:
    """Current probe pair in absolute coordinates."""
    if state.finished or state.inner is None:
        raise ValueError("search already finished")
    return grm_question(state.inner)


def square_advance(state: SquareState, answer: Preference) -> SquareState:
    """Feed one answer to the active line search, transitioning phases and
    pruning the region whenever the line search completes."""
    if state.finished or state.inner is None:
        raise ValueError("search already finished")

    inner = grm_step(state.inner, answer)
    comparisons = state.comparisons + 1
    if not inner.finished:
        return replace(state, inner=inner, comparisons=comparisons)

    result = grm_midpoint(inner)
    a, b = state.region.center.x, state.region.center.y
    d = state.region.half_width

    if state.phase is Phase.HORIZONTAL_MIDLINE:
        seg = Segment(Point2(result.x, b - d), Point2(result.x, b + d))
        return replace(
            state,
            phase=Phase.VERTICAL_THROUGH_ANCHOR,
            inner=grm_init(seg, state.n_inner),
            pending_anchor=result,
            comparisons=comparisons,
        )

    if state.phase is Phase.VERTICAL_THROUGH_ANCHOR:
        # Keep the horizontal half-rectangle the minimizer fell into
        # (exactly on the midline keeps the lower half).
        b_new = b + d / 2.0 if result.y > b else b - d / 2.0
        region = Rect(Point2(a, b_new), d, d / 2.0)
        seg = Segment(Point2(a, b_new - d / 2.0), Point2(a, b_new + d / 2.0))
        return replace(
            state,
            region=region,
            phase=Phase.VERTICAL_MIDLINE,
            inner=grm_init(seg, state.n_inner),
            pending_anchor=None,
            comparisons=comparisons,
            history=state.history + ((region, Phase.VERTICAL_MIDLINE),),
        )

    if state.phase is Phase.VERTICAL_MIDLINE:
        seg = Segment(Point2(a - d, result.y), Point2(a + d, result.y))
        return replace(
            state,
            phase=Phase.HORIZONTAL_THROUGH_ANCHOR,
            inner=grm_init(seg, state.n_inner),
            pending_anchor=result,
            comparisons=comparisons,
        )

    # Phase.HORIZONTAL_THROUGH_ANCHOR: prune left/right, then halve the side.
    a_new = a + d / 2.0 if result.x > a else a - d / 2.0
    d_new = d / 2.0
    region = Rect.square(Point2(a_new, b), d_new)
    iteration = state.iteration + 1
    finished = iteration >= state.k_total
    return replace(
        state,
        region=region,
        phase=Phase.HORIZONTAL_MIDLINE,
        inner=None if finished else grm_init(_horizontal_midline(region), state.n_inner),
        pending_anchor=None,
        iteration=iteration,
        comparisons=comparisons,
        history=state.history + ((region, Phase.HORIZONTAL_MIDLINE),),
    )


def _start_transcript(state: SquareState) -> Transcript:
    transcript = Transcript()
    transcript.regions.append(state.region)
    if state.inner is not None:
        transcript.segments.append((state.inner.segment, state.phase))
    return transcript


def _record(transcript: Transcript, before: SquareState, after: SquareState,
            first: Point2, second: Point2, answer: Preference) -> None:
    transcript.comparisons.append(
        ComparisonRecord(first, second, answer, before.phase, before.iteration)
    )
    if after.region != before.region:
        transcript.regions.append(after.region)
    if after.inner is not None and after.phase is not before.phase:
        transcript.segments.append((after.inner.segment, after.phase))


def square_run(
    square: Rect, oracle: OracleHandle, k_total: int, n_inner: int
) -> tuple[Point2, Transcript]:
    """Drive a full search against an oracle; returns the final region center
    and the complete transcript. With no tie answers the comparison count is
    exactly 4 * k_total * n_inner."""
    state = square_init(square, k_total, n_inner)
    transcript = _start_transcript(state)
    while not state.finished:
        p, q = square_question(state)
        answer = oracle.compare(p, q)
        before = state
        state = square_advance(state, answer)
        _record(transcript, before, state, p, q, answer)
    return state.region.center, transcript


def replay_answers(
    square: Rect, k_total: int, n_inner: int, answers: Sequence[Preference]
) -> tuple[SquareState, Transcript]:
    """Rebuild state and transcript from a recorded answer sequence.

    Replays any prefix of a run; feeding more answers than the search can
    consume is an error.
    """
    state = square_init(square, k_total, n_inner)
    transcript = _start_transcript(state)
    for answer in answers:
        if state.finished:
            raise ValueError("answer sequence continues past the end of the search")
        p, q = square_question(state)
        before = state
        state = square_advance(state, answer)
        _record(transcript, before, state, p, q, answer)
    return state, transcript
