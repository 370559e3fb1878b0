import pytest
from hypothesis import given
from hypothesis import strategies as st

from ordersearch.core import Point2, Preference, Rect
from ordersearch.oracles import SyntheticOracle, builtin_function, shifted_quadratic
from ordersearch.square_search import (
    Phase,
    replay_answers,
    square_advance,
    square_init,
    square_question,
    square_run,
)

UNIT = Rect.from_bounds(0.0, 1.0, 0.0, 1.0)

answer_lists = st.lists(
    st.sampled_from([Preference.FIRST, Preference.SECOND, Preference.TIE]),
    min_size=0,
    max_size=60,
)


class AlwaysTie:
    queries_made = 0

    def compare(self, p, q):
        self.queries_made += 1
        return Preference.TIE


class TestInit:
    def test_requires_square(self):
        with pytest.raises(ValueError):
            square_init(Rect(Point2(0, 0), 1.0, 2.0), 2, 5)

    def test_requires_budgets(self):
        with pytest.raises(ValueError):
            square_init(UNIT, 0, 5)
        with pytest.raises(ValueError):
            square_init(UNIT, 2, 0)

    def test_starts_on_horizontal_midline(self):
        state = square_init(UNIT, 2, 5)
        assert state.phase is Phase.HORIZONTAL_MIDLINE
        seg = state.inner.segment
        assert seg.p0 == Point2(0.0, 0.5) and seg.p1 == Point2(1.0, 0.5)
        assert state.history == ((UNIT, Phase.HORIZONTAL_MIDLINE),)
        assert state.comparisons == 0 and not state.finished


class TestPhaseCycle:
    def test_phases_rotate_in_order(self):
        f = builtin_function("quadratic")
        oracle = SyntheticOracle(f)
        state = square_init(UNIT, 1, 3)
        seen = []
        while not state.finished:
            seen.append(state.phase)
            p, q = square_question(state)
            state = square_advance(state, oracle.compare(p, q))
        assert seen == (
            [Phase.HORIZONTAL_MIDLINE] * 3
            + [Phase.VERTICAL_THROUGH_ANCHOR] * 3
            + [Phase.VERTICAL_MIDLINE] * 3
            + [Phase.HORIZONTAL_THROUGH_ANCHOR] * 3
        )

    def test_vertical_search_runs_through_found_anchor(self):
        f = builtin_function("quadratic")
        oracle = SyntheticOracle(f)
        state = square_init(UNIT, 1, 8)
        while state.phase is Phase.HORIZONTAL_MIDLINE:
            p, q = square_question(state)
            state = square_advance(state, oracle.compare(p, q))
        anchor = state.pending_anchor
        seg = state.inner.segment
        # Vertical line at the anchor's x, spanning the full square height.
        assert seg.p0.x == seg.p1.x == anchor.x
        assert (seg.p0.y, seg.p1.y) == (UNIT.y_min, UNIT.y_max)


class TestGeometry:
    def test_first_iteration_keeps_quadrant_with_minimum(self):
        # Minimum at (0.3, 0.6): upper-left quadrant survives.
        f = builtin_function("quadratic")
        center, transcript = square_run(UNIT, SyntheticOracle(f), 1, 20)
        region = transcript.regions[-1]
        assert (region.x_min, region.x_max) == (0.0, 0.5)
        assert (region.y_min, region.y_max) == (0.5, 1.0)
        assert center == Point2(0.25, 0.75)
        assert region.contains(Point2(0.3, 0.6))

    def test_minimum_near_far_corner(self):
        f = shifted_quadratic(0.9, 0.9)
        _, transcript = square_run(UNIT, SyntheticOracle(f), 1, 20)
        region = transcript.regions[-1]
        assert region.contains(Point2(0.9, 0.9))
        assert (region.x_min, region.y_min) == (0.5, 0.5)

    def test_ties_keep_lower_left(self):
        # Every comparison is a tie: anchors sit exactly on midlines, and
        # both prunes must keep the lower/left half.
        center, transcript = square_run(UNIT, AlwaysTie(), 1, 5)
        assert center == Point2(0.25, 0.25)
        # One tie per line search: 4 comparisons total.
        assert len(transcript.comparisons) == 4
        assert all(c.answer is Preference.TIE for c in transcript.comparisons)

    def test_convergence_with_larger_budget(self):
        f = builtin_function("quadratic")
        center, _ = square_run(UNIT, SyntheticOracle(f), 6, 25)
        assert center.distance_to(Point2(0.3, 0.6)) <= 2.0 ** -6


class TestAreaLaw:
    def test_area_divides_by_four_exactly(self):
        f = builtin_function("quadratic")
        _, transcript = square_run(UNIT, SyntheticOracle(f), 3, 7)
        squares = [r for r in transcript.regions if r.is_square]
        assert len(squares) == 4  # initial + one per iteration
        for before, after in zip(squares, squares[1:]):
            assert after.area * 4.0 == before.area
            assert after.half_width * 2.0 == before.half_width

    def test_intermediate_prune_halves_area(self):
        f = builtin_function("quadratic")
        _, transcript = square_run(UNIT, SyntheticOracle(f), 2, 6)
        for before, after in zip(transcript.regions, transcript.regions[1:]):
            assert after.area * 2.0 == before.area


class TestCounting:
    @pytest.mark.parametrize("k,n", [(1, 1), (2, 5), (3, 4)])
    def test_comparisons_4kn_without_ties(self, k, n):
        f = builtin_function("quadratic")
        oracle = SyntheticOracle(f)
        _, transcript = square_run(UNIT, oracle, k, n)
        assert len(transcript.comparisons) == 4 * k * n
        assert oracle.queries_made == 4 * k * n

    def test_history_length(self):
        f = builtin_function("quadratic")
        _, transcript = square_run(UNIT, SyntheticOracle(f), 3, 4)
        # Initial square plus two prunes per iteration.
        assert len(transcript.regions) == 1 + 2 * 3

    def test_segments_count(self):
        f = builtin_function("quadratic")
        _, transcript = square_run(UNIT, SyntheticOracle(f), 2, 4)
        assert len(transcript.segments) == 4 * 2
        phases = [phase for _, phase in transcript.segments]
        assert phases[:4] == [
            Phase.HORIZONTAL_MIDLINE,
            Phase.VERTICAL_THROUGH_ANCHOR,
            Phase.VERTICAL_MIDLINE,
            Phase.HORIZONTAL_THROUGH_ANCHOR,
        ]
        assert phases[4:] == phases[:4]


class TestLifecycle:
    def test_question_after_finish_raises(self):
        state, _ = replay_answers(UNIT, 1, 1, [Preference.TIE] * 4)
        assert state.finished
        with pytest.raises(ValueError):
            square_question(state)
        with pytest.raises(ValueError):
            square_advance(state, Preference.FIRST)

    def test_too_many_answers_rejected(self):
        with pytest.raises(ValueError):
            replay_answers(UNIT, 1, 1, [Preference.TIE] * 5)

    def test_states_immutable(self):
        state = square_init(UNIT, 2, 3)
        square_advance(state, Preference.FIRST)
        assert state.comparisons == 0 and state.iteration == 0


class TestReplay:
    def test_replay_matches_live_run(self):
        f = builtin_function("aniso_quadratic")
        oracle = SyntheticOracle(f, tie_threshold=1e-4)
        center, live = square_run(UNIT, oracle, 2, 6)
        answers = live.answers()
        state, replayed = replay_answers(UNIT, 2, 6, answers)
        assert state.finished
        assert state.region.center == center
        assert replayed.comparisons == live.comparisons
        assert replayed.regions == live.regions
        assert replayed.segments == live.segments

    @given(answer_lists)
    def test_replay_prefix_consistent(self, answers):
        state_full = square_init(UNIT, 2, 4)
        consumed = []
        for a in answers:
            if state_full.finished:
                break
            state_full = square_advance(state_full, a)
            consumed.append(a)
        state_replayed, _ = replay_answers(UNIT, 2, 4, consumed)
        assert state_replayed == state_full


class TestInvariants:
    @given(answer_lists)
    def test_region_nesting_and_area_law(self, answers):
        state = square_init(UNIT, 3, 3)
        for a in answers:
            if state.finished:
                break
            state = square_advance(state, a)
        rects = [r for r, _ in state.history]
        for before, after in zip(rects, rects[1:]):
            assert before.x_min <= after.x_min <= after.x_max <= before.x_max
            assert before.y_min <= after.y_min <= after.y_max <= before.y_max
            assert after.area * 2.0 == before.area
        # The final region always stays inside the initial square.
        assert rects[-1].x_min >= 0.0 and rects[-1].x_max <= 1.0
        assert rects[-1].y_min >= 0.0 and rects[-1].y_max <= 1.0

    @given(answer_lists)
    def test_comparisons_counter_matches_fed_answers(self, answers):
        state = square_init(UNIT, 2, 5)
        fed = 0
        for a in answers:
            if state.finished:
                break
            state = square_advance(state, a)
            fed += 1
        assert state.comparisons == fed
