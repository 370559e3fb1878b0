"""Shared domain types: points, segments, rectangles, preferences, noise.

Everything here is an immutable value. Oracles built on top of these types
answer only "which of the two points has the smaller value" (plus bounded
noise), never function values themselves.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from typing import Callable, Protocol, runtime_checkable

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


class Preference(enum.Enum):
    """Answer to "compare f at two points": which one looks smaller."""

    FIRST = "first"
    SECOND = "second"
    TIE = "tie"


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")

    def distance_to(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Segment:
    """Directed segment; search parameters run from p0 (u=0) to p1 (u=1)."""

    p0: Point2
    p1: Point2

    def __post_init__(self) -> None:
        if self.p0 == self.p1:
            raise ValueError("degenerate segment: endpoints coincide")

    @property
    def length(self) -> float:
        return self.p0.distance_to(self.p1)

    def point_at(self, u: float) -> Point2:
        return Point2(
            self.p0.x + u * (self.p1.x - self.p0.x),
            self.p0.y + u * (self.p1.y - self.p0.y),
        )


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle given by center and half sides."""

    center: Point2
    half_width: float
    half_height: float

    def __post_init__(self) -> None:
        if not (self.half_width > 0 and self.half_height > 0):
            raise ValueError("rectangle half sides must be positive")
        if not (math.isfinite(self.half_width) and math.isfinite(self.half_height)):
            raise ValueError("rectangle half sides must be finite")

    @property
    def x_min(self) -> float:
        return self.center.x - self.half_width

    @property
    def x_max(self) -> float:
        return self.center.x + self.half_width

    @property
    def y_min(self) -> float:
        return self.center.y - self.half_height

    @property
    def y_max(self) -> float:
        return self.center.y + self.half_height

    @property
    def area(self) -> float:
        return 4.0 * self.half_width * self.half_height

    @property
    def is_square(self) -> bool:
        return self.half_width == self.half_height

    def contains(self, p: Point2) -> bool:
        return self.x_min <= p.x <= self.x_max and self.y_min <= p.y <= self.y_max

    @staticmethod
    def square(center: Point2, half_side: float) -> "Rect":
        return Rect(center, half_side, half_side)

    @staticmethod
    def from_bounds(x_min: float, x_max: float, y_min: float, y_max: float) -> "Rect":
        return Rect(
            Point2((x_min + x_max) / 2.0, (y_min + y_max) / 2.0),
            (x_max - x_min) / 2.0,
            (y_max - y_min) / 2.0,
        )


def clamp_point(p: Point2, r: Rect) -> Point2:
    """Nearest point of r to p (component-wise clamp); identity inside r."""
    return Point2(
        min(max(p.x, r.x_min), r.x_max),
        min(max(p.y, r.y_min), r.y_max),
    )


@dataclass(frozen=True)
class ProblemSpec:
    """Known problem constants that drive every schedule and bound.

    R is the side/interval length of the search domain, M the value-Lipschitz
    constant, L the gradient-Lipschitz constant, mu the strong-convexity
    coefficient (optional), delta the worst-case comparison noise, and
    epsilon the target accuracy in function value.
    """

    R: float
    M: float
    L: float
    epsilon: float
    delta: float = 0.0
    mu: float | None = None

    def __post_init__(self) -> None:
        for name in ("R", "M", "L", "epsilon"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite number, got {v}")
        if not (math.isfinite(self.delta) and self.delta >= 0):
            raise ValueError(f"delta must be >= 0, got {self.delta}")
        if self.mu is not None:
            if not (math.isfinite(self.mu) and self.mu > 0):
                raise ValueError(f"mu must be positive when present, got {self.mu}")
            if self.mu > self.L:
                raise ValueError(f"mu={self.mu} exceeds L={self.L}")


class NoiseKind(enum.Enum):
    ZERO = "zero"
    UNIFORM_BOUNDED = "uniform"
    ADVERSARIAL_FLIP = "adversarial"


@dataclass(frozen=True)
class NoiseModel:
    """Bounded additive noise on the comparison: |noise| <= delta always."""

    kind: NoiseKind
    delta: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.delta) and self.delta >= 0):
            raise ValueError(f"delta must be >= 0, got {self.delta}")


# A noise source sees the queried pair and, in synthetic mode, the true value
# difference f(p) - f(q); it returns the additive perturbation for this query.
NoiseSource = Callable[[Point2, Point2, float], float]


def make_noise(model: NoiseModel) -> NoiseSource:
    """Build a deterministic noise source from a model.

    Identical (kind, delta, seed) and identical query sequence produce the
    identical noise sequence. Noise is sampled fresh per query, so repeating
    a pair may repeat or change the perturbation.
    """
    if model.kind is NoiseKind.ZERO:
        return lambda p, q, true_diff: 0.0

    if model.kind is NoiseKind.UNIFORM_BOUNDED:
        rng = random.Random(model.seed)
        delta = model.delta

        def uniform_source(p: Point2, q: Point2, true_diff: float) -> float:
            return rng.uniform(-delta, delta)

        return uniform_source

    if model.kind is NoiseKind.ADVERSARIAL_FLIP:
        delta = model.delta

        def adversarial_source(p: Point2, q: Point2, true_diff: float) -> float:
            # Push the sign the wrong way whenever the noise budget allows it.
            # With true_diff >= 0 the clean answer is "second"; -delta flips it
            # unless true_diff == delta exactly (sign(0) still favours second).
            if abs(true_diff) > delta:
                return 0.0
            return -delta if true_diff >= 0 else delta

        return adversarial_source

    raise ValueError(f"unknown noise kind: {model.kind!r}")


@runtime_checkable
class OracleHandle(Protocol):
    """Comparison oracle contract.

    compare(p, q) answers which point has the smaller (noisy) value, and
    queries_made increments by exactly one per call. A handle is confined to
    one logical task at a time; distinct handles may run in parallel.
    """

    queries_made: int

    def compare(self, p: Point2, q: Point2) -> Preference: ...
