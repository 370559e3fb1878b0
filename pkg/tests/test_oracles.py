import threading
import time

import numpy as np
import pytest

from ordersearch.core import NoiseKind, NoiseModel, Point2, Preference
from ordersearch.grm import grm_run
from ordersearch.oracles import (
    QueuedOracle,
    SyntheticOracle,
    builtin_function,
    builtin_functions,
    parabola_1d,
    random_parabola_suite,
    scripted_respondent,
    shifted_quadratic,
    synthetic_compare,
)
from ordersearch.core import Segment


class TestSyntheticCompare:
    def setup_method(self):
        self.f = builtin_function("quadratic")  # (x-0.3)^2 + (y-0.6)^2
        self.zero = lambda p, q, d: 0.0

    def test_prefers_smaller_value(self):
        near = Point2(0.3, 0.6)
        far = Point2(0.9, 0.9)
        assert synthetic_compare(self.f, self.zero, near, far) is Preference.FIRST
        assert synthetic_compare(self.f, self.zero, far, near) is Preference.SECOND

    def test_exact_zero_favours_second(self):
        f = shifted_quadratic(0.5, 0.5)
        # 0.25 and 0.75 are exactly representable and exactly symmetric
        # about 0.5, so the value difference is exactly zero.
        p = Point2(0.25, 0.5)
        q = Point2(0.75, 0.5)
        assert synthetic_compare(f, self.zero, p, q) is Preference.SECOND

    def test_out_of_domain_rejected(self):
        with pytest.raises(ValueError):
            synthetic_compare(self.f, self.zero, Point2(1.5, 0.5), Point2(0.5, 0.5))
        with pytest.raises(ValueError):
            synthetic_compare(self.f, self.zero, Point2(0.5, 0.5), Point2(0.5, -0.1))

    def test_tie_threshold(self):
        p = Point2(0.3, 0.6)
        q = Point2(0.31, 0.6)  # value difference 1e-4
        assert (
            synthetic_compare(self.f, self.zero, p, q, tie_threshold=1e-3)
            is Preference.TIE
        )
        assert (
            synthetic_compare(self.f, self.zero, p, q, tie_threshold=1e-5)
            is Preference.FIRST
        )

    def test_noise_can_flip(self):
        p = Point2(0.3, 0.6)
        q = Point2(0.31, 0.6)  # true diff = -1e-4, clean answer FIRST
        loud = lambda pp, qq, d: 1e-3
        assert synthetic_compare(self.f, loud, p, q) is Preference.SECOND


class TestSyntheticOracle:
    def test_counts_queries(self):
        oracle = SyntheticOracle(builtin_function("quadratic"))
        oracle.compare(Point2(0.1, 0.1), Point2(0.9, 0.9))
        oracle.compare(Point2(0.2, 0.2), Point2(0.8, 0.8))
        assert oracle.queries_made == 2

    def test_seeded_noise_is_reproducible(self):
        f = parabola_1d(0.37)
        seg = Segment(Point2(0.0, 0.5), Point2(1.0, 0.5))
        model = NoiseModel(NoiseKind.UNIFORM_BOUNDED, delta=1e-2, seed=123)
        r1 = grm_run(seg, SyntheticOracle(f, model), 20)
        r2 = grm_run(seg, SyntheticOracle(f, model), 20)
        assert r1.point == r2.point

    def test_different_seeds_usually_differ(self):
        f = parabola_1d(0.37)
        seg = Segment(Point2(0.0, 0.5), Point2(1.0, 0.5))
        points = {
            grm_run(
                seg,
                SyntheticOracle(f, NoiseModel(NoiseKind.UNIFORM_BOUNDED, 1e-2, seed=s)),
                20,
            ).point.x
            for s in range(8)
        }
        assert len(points) > 1


class TestBuiltinFunctions:
    def test_ids_unique_and_lookup(self):
        ids = [f.id for f in builtin_functions()]
        assert len(ids) == len(set(ids))
        for fid in ids:
            assert builtin_function(fid).id == fid

    def test_unknown_id_lists_available(self):
        with pytest.raises(KeyError, match="quadratic"):
            builtin_function("nope")

    @pytest.mark.parametrize("f", builtin_functions(), ids=lambda f: f.id)
    def test_analytic_minimum_consistent(self, f):
        if f.analytic_min is None:
            pytest.skip("no analytic minimum declared")
        point, value = f.analytic_min
        assert f.domain.contains(point)
        assert f.eval(point) == pytest.approx(value, abs=1e-12)
        # Sampled values never dip below the declared minimum.
        rng = np.random.default_rng(0)
        xs = rng.uniform(f.domain.x_min, f.domain.x_max, 20_000)
        ys = rng.uniform(f.domain.y_min, f.domain.y_max, 20_000)
        assert float(np.min(f.fn(xs, ys))) >= value - 1e-12

    @pytest.mark.parametrize("f", builtin_functions(), ids=lambda f: f.id)
    def test_declared_value_lipschitz_holds(self, f):
        from ordersearch.oracles import check_value_lipschitz

        observed = check_value_lipschitz(f, np.random.default_rng(1), pairs=10_000)
        assert observed <= f.M * (1.0 + 1e-9)

    @pytest.mark.parametrize("f", builtin_functions(), ids=lambda f: f.id)
    def test_declared_gradient_lipschitz_holds(self, f):
        from ordersearch.oracles import check_gradient_lipschitz

        observed = check_gradient_lipschitz(f, np.random.default_rng(2), pairs=1_000)
        assert observed <= f.L * (1.0 + 1e-4)  # allowance for finite differences

    def test_fn_broadcasts_over_arrays(self):
        f = builtin_function("logsumexp")
        xs = np.linspace(0.0, 1.0, 7)
        ys = np.linspace(0.0, 1.0, 7)
        out = f.fn(xs[:, None], ys[None, :])
        assert out.shape == (7, 7)

    def test_shifted_quadratic_constants_exact(self):
        f = shifted_quadratic(0.25, 0.75, wx=2.0, wy=0.5)
        # Gradient components are largest at the far corner (1, 0).
        gx = 2.0 * 2.0 * 0.75
        gy = 2.0 * 0.5 * 0.75
        assert f.M == pytest.approx(np.hypot(gx, gy), rel=1e-12)
        assert f.L == 4.0 and f.mu == 1.0

    def test_random_parabola_suite_deterministic(self):
        a = random_parabola_suite(5, np.random.default_rng(9))
        b = random_parabola_suite(5, np.random.default_rng(9))
        assert [f.id for f in a] == [f.id for f in b]
        assert all(fa.eval(Point2(0.5, 0.5)) == fb.eval(Point2(0.5, 0.5)) for fa, fb in zip(a, b))
        assert len(a) == 5


class TestQueuedOracle:
    def test_round_trip_through_a_thread(self):
        oracle = QueuedOracle(timeout=5.0)
        results = []

        def driver():
            results.append(oracle.compare(Point2(0, 0), Point2(1, 1)))

        thread = threading.Thread(target=driver)
        thread.start()
        pending = None
        for _ in range(500):
            pending = oracle.pending()
            if pending is not None:
                break
            time.sleep(0.01)
        assert pending is not None
        assert pending.pair == (Point2(0, 0), Point2(1, 1))
        oracle.answer(pending.token, Preference.FIRST)
        thread.join(timeout=5.0)
        assert results == [Preference.FIRST]
        assert oracle.queries_made == 1
        assert oracle.pending() is None

    def test_answer_without_question_rejected(self):
        oracle = QueuedOracle()
        with pytest.raises(LookupError):
            oracle.answer("whatever", Preference.FIRST)

    def test_stale_token_rejected(self):
        oracle = QueuedOracle(timeout=5.0)
        done = threading.Event()

        def driver():
            oracle.compare(Point2(0, 0), Point2(1, 1))
            done.set()

        thread = threading.Thread(target=driver)
        thread.start()
        while oracle.pending() is None:
            time.sleep(0.01)
        with pytest.raises(LookupError):
            oracle.answer("not-the-token", Preference.FIRST)
        oracle.answer(oracle.pending().token, Preference.SECOND)
        assert done.wait(timeout=5.0)
        thread.join(timeout=5.0)

    def test_timeout(self):
        oracle = QueuedOracle(timeout=0.05)
        with pytest.raises(TimeoutError):
            oracle.compare(Point2(0, 0), Point2(1, 1))
        assert oracle.pending() is None


class TestScriptedRespondent:
    def test_prefers_smaller_objective(self):
        objective = builtin_function("preference_bump")  # minimum at (2.2, 2.8)
        respond = scripted_respondent(objective)
        assert respond(Point2(2.2, 2.8), Point2(3.9, 1.1)) == "A"
        assert respond(Point2(3.9, 1.1), Point2(2.2, 2.8)) == "B"

    def test_tie_within_threshold(self):
        objective = builtin_function("preference_bump")
        respond = scripted_respondent(objective, tie_threshold=10.0)
        assert respond(Point2(2.0, 2.0), Point2(2.5, 2.5)) == "tie"
