"""Synthetic comparison oracles and the queued bridge to a live respondent.

A TestFunction is a 2-D convex function with declared Lipschitz constants;
one-dimensional theory is exercised by restricting these to segments rather
than keeping a parallel 1-D hierarchy. The comparison itself is

    compare(p, q) = sign(f(p) - f(q) + noise),

with the convention that an exact zero prefers the second point, so
transcripts are deterministic. Adversarial noise needs the true values and
is therefore only available here, in synthetic mode.
"""

from __future__ import annotations

import math
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import (
    NoiseKind,
    NoiseModel,
    NoiseSource,
    Point2,
    Preference,
    Rect,
    make_noise,
)

UNIT_SQUARE = Rect.square(Point2(0.5, 0.5), 0.5)


@dataclass(frozen=True)
class TestFunction:
    """Convex test function with declared constants.

    fn must accept scalars or numpy arrays (broadcasting), which lets the
    harness grid-minimize without a Python-level double loop. The declared
    M and L are upper bounds, validated by sampling in the test suite.
    """

    __test__ = False  # bare "Test" prefix; keep test collectors away

    id: str
    fn: Callable[[np.ndarray | float, np.ndarray | float], np.ndarray | float]
    M: float
    L: float
    domain: Rect
    mu: float | None = None
    analytic_min: tuple[Point2, float] | None = None

    def eval(self, p: Point2) -> float:
        return float(self.fn(p.x, p.y))


def synthetic_compare(
    f: TestFunction,
    noise: NoiseSource,
    p: Point2,
    q: Point2,
    tie_threshold: float | None = None,
) -> Preference:
    """One noisy comparison of f at p and q.

    Returns SECOND iff f(p) - f(q) + noise >= 0 (ties at exactly zero favour
    the second point). A tie_threshold, when set, emulates a respondent who
    cannot tell nearly-equal values apart: TIE whenever |f(p) - f(q)| is
    within it, before noise.
    """
    if not f.domain.contains(p):
        raise ValueError(f"point {p} outside domain of {f.id}")
    if not f.domain.contains(q):
        raise ValueError(f"point {q} outside domain of {f.id}")
    true_diff = f.eval(p) - f.eval(q)
    if tie_threshold is not None and abs(true_diff) <= tie_threshold:
        return Preference.TIE
    observed = true_diff + noise(p, q, true_diff)
    return Preference.SECOND if observed >= 0 else Preference.FIRST


class SyntheticOracle:
    """OracleHandle over a test function and a noise model."""

    def __init__(
        self,
        function: TestFunction,
        noise_model: NoiseModel | None = None,
        tie_threshold: float | None = None,
    ) -> None:
        self.function = function
        self.noise_model = noise_model or NoiseModel(NoiseKind.ZERO)
        self.tie_threshold = tie_threshold
        self.queries_made = 0
        self._noise = make_noise(self.noise_model)

    def compare(self, p: Point2, q: Point2) -> Preference:
        self.queries_made += 1
        return synthetic_compare(self.function, self._noise, p, q, self.tie_threshold)


# ---------------------------------------------------------------------------
# Built-in function library


def _quadratic(cx: float, cy: float, wx: float = 1.0, wy: float = 1.0):
    def fn(x, y):
        return wx * (x - cx) ** 2 + wy * (y - cy) ** 2

    return fn


def _quadratic_constants(
    cx: float, cy: float, wx: float, wy: float, domain: Rect
) -> tuple[float, float, float]:
    """Exact (M, L, mu) of wx*(x-cx)^2 + wy*(y-cy)^2 on an axis-aligned domain."""
    gx = 2.0 * wx * max(abs(domain.x_min - cx), abs(domain.x_max - cx))
    gy = 2.0 * wy * max(abs(domain.y_min - cy), abs(domain.y_max - cy))
    M = math.hypot(gx, gy)
    return M, 2.0 * max(wx, wy), 2.0 * min(wx, wy)


def shifted_quadratic(
    cx: float,
    cy: float,
    wx: float = 1.0,
    wy: float = 1.0,
    domain: Rect = UNIT_SQUARE,
    id: str | None = None,
) -> TestFunction:
    """wx*(x-cx)^2 + wy*(y-cy)^2 with exact declared constants."""
    M, L, mu = _quadratic_constants(cx, cy, wx, wy, domain)
    minimizer = Point2(
        min(max(cx, domain.x_min), domain.x_max),
        min(max(cy, domain.y_min), domain.y_max),
    )
    fn = _quadratic(cx, cy, wx, wy)
    return TestFunction(
        id=id or f"quadratic[{cx:g},{cy:g};{wx:g},{wy:g}]",
        fn=fn,
        M=M,
        L=L,
        mu=mu,
        domain=domain,
        analytic_min=(minimizer, float(fn(minimizer.x, minimizer.y))),
    )


def parabola_1d(c: float, domain: Rect = UNIT_SQUARE, id: str | None = None) -> TestFunction:
    """(x - c)^2, constant in y: restricts to a clean 1-D parabola on any
    horizontal segment."""
    gx = 2.0 * max(abs(domain.x_min - c), abs(domain.x_max - c))
    cx = min(max(c, domain.x_min), domain.x_max)
    return TestFunction(
        id=id or f"parabola_1d[{c:g}]",
        fn=lambda x, y: (x - c) ** 2 + 0.0 * y,
        M=gx,
        L=2.0,
        mu=None,  # flat along y
        domain=domain,
        analytic_min=(Point2(cx, domain.center.y), float((cx - c) ** 2)),
    )


def _log_sum_exp() -> TestFunction:
    def fn(x, y):
        return np.logaddexp(x, y)

    return TestFunction(
        id="logsumexp",
        fn=fn,
        M=1.0,  # gradient is a softmax pair, norm <= 1
        L=0.5,  # largest Hessian eigenvalue 2*p*(1-p) <= 1/2
        mu=None,
        domain=UNIT_SQUARE,
        analytic_min=(Point2(0.0, 0.0), math.log(2.0)),
    )


def _preference_bump() -> TestFunction:
    """Negated concave 'drink preference' surface on the tasting domain.

    The underlying preference peaks at (2.2, 2.8); minimizing the negation
    is the same problem the session service solves with a human.
    """
    domain = Rect.from_bounds(1.0, 4.0, 1.0, 4.0)
    fn = _quadratic(2.2, 2.8, 1.0, 0.7)
    M, L, mu = _quadratic_constants(2.2, 2.8, 1.0, 0.7, domain)
    return TestFunction(
        id="preference_bump",
        fn=fn,
        M=M,
        L=L,
        mu=mu,
        domain=domain,
        analytic_min=(Point2(2.2, 2.8), 0.0),
    )


def builtin_functions() -> list[TestFunction]:
    return [
        shifted_quadratic(0.3, 0.6, id="quadratic"),
        shifted_quadratic(0.5, 0.5, wx=4.0, wy=1.0, id="aniso_quadratic"),
        _log_sum_exp(),
        parabola_1d(0.3, id="parabola_1d"),
        _preference_bump(),
    ]


def builtin_function(id: str) -> TestFunction:
    for f in builtin_functions():
        if f.id == id:
            return f
    ids = ", ".join(f.id for f in builtin_functions())
    raise KeyError(f"unknown function id {id!r}; available: {ids}")


def random_parabola_suite(count: int, rng: np.random.Generator) -> list[TestFunction]:
    """Random 1-D parabolas (x-c)^2 with c ~ U(0, 1), exact constants."""
    return [
        parabola_1d(float(c), id=f"parabola_1d[rand{i}]")
        for i, c in enumerate(rng.uniform(0.0, 1.0, size=count))
    ]


# ---------------------------------------------------------------------------
# Declared-constant validation (sampling witnesses used by the test suite)


def check_value_lipschitz(f: TestFunction, rng: np.random.Generator, pairs: int = 10_000) -> float:
    """Largest |f(p)-f(q)| / ||p-q|| over random pairs; must be <= f.M."""
    d = f.domain
    xs = rng.uniform(d.x_min, d.x_max, size=(pairs, 2))
    ys = rng.uniform(d.y_min, d.y_max, size=(pairs, 2))
    fv = f.fn(xs, ys)
    dist = np.hypot(xs[:, 0] - xs[:, 1], ys[:, 0] - ys[:, 1])
    keep = dist > 1e-12
    return float(np.max(np.abs(fv[keep, 0] - fv[keep, 1]) / dist[keep]))


def check_gradient_lipschitz(
    f: TestFunction, rng: np.random.Generator, pairs: int = 1_000, step: float = 1e-5
) -> float:
    """Largest ||grad f(p) - grad f(q)|| / ||p-q|| over random pairs, with
    central-difference gradients; must be <= f.L up to differencing error."""
    d = f.domain
    # Stay a step away from the boundary so central differences remain inside.
    xs = rng.uniform(d.x_min + step, d.x_max - step, size=(pairs, 2))
    ys = rng.uniform(d.y_min + step, d.y_max - step, size=(pairs, 2))

    def grad(x, y):
        gx = (f.fn(x + step, y) - f.fn(x - step, y)) / (2 * step)
        gy = (f.fn(x, y + step) - f.fn(x, y - step)) / (2 * step)
        return gx, gy

    gx, gy = grad(xs, ys)
    dist = np.hypot(xs[:, 0] - xs[:, 1], ys[:, 0] - ys[:, 1])
    gdist = np.hypot(gx[:, 0] - gx[:, 1], gy[:, 0] - gy[:, 1])
    keep = dist > 1e-9
    return float(np.max(gdist[keep] / dist[keep]))


# ---------------------------------------------------------------------------
# Queued oracle: the bridge between an algorithm driver and a respondent


@dataclass(frozen=True)
class PendingQuestion:
    pair: tuple[Point2, Point2]
    issued_at: float
    token: str


class QueuedOracle:
    """OracleHandle whose answers come from another task.

    ``compare`` parks the question and blocks until someone calls ``answer``
    with the matching token. At most one question is pending at a time and
    each is answered exactly once; stale or duplicate answers are rejected.
    """

    def __init__(self, timeout: float | None = None) -> None:
        self.queries_made = 0
        self.timeout = timeout
        self._lock = threading.Lock()
        self._answered = threading.Condition(self._lock)
        self._pending: PendingQuestion | None = None
        self._answer: Preference | None = None

    def compare(self, p: Point2, q: Point2) -> Preference:
        with self._lock:
            if self._pending is not None:
                raise RuntimeError("a question is already pending on this oracle")
            self.queries_made += 1
            question = PendingQuestion(
                pair=(p, q), issued_at=time.time(), token=uuid.uuid4().hex
            )
            self._pending = question
            self._answer = None
            while self._answer is None:
                if not self._answered.wait(self.timeout):
                    self._pending = None
                    raise TimeoutError(
                        f"no answer to question {question.token} within {self.timeout}s"
                    )
            answer = self._answer
            self._pending = None
            self._answer = None
            return answer

    def pending(self) -> PendingQuestion | None:
        with self._lock:
            return self._pending

    def answer(self, token: str, preference: Preference) -> None:
        with self._lock:
            if self._pending is None:
                raise LookupError("no question is pending")
            if self._pending.token != token:
                raise LookupError(f"token {token!r} does not match the pending question")
            if self._answer is not None:
                raise RuntimeError("question already answered")
            self._answer = preference
            self._answered.notify_all()


def scripted_respondent(
    objective: TestFunction, tie_threshold: float = 0.0
) -> Callable[[Point2, Point2], str]:
    """A deterministic stand-in for a human tasting session.

    The respondent always prefers the truly better option: the one with the
    smaller value of the convex objective (the negated preference surface),
    answering "tie" whenever the two values are within tie_threshold. Wired
    to the session service this drives the region toward the true optimum.
    """

    def respond(option_a: Point2, option_b: Point2) -> str:
        va = objective.eval(option_a)
        vb = objective.eval(option_b)
        if abs(va - vb) <= tie_threshold:
            return "tie"
        return "A" if va < vb else "B"

    return respond
