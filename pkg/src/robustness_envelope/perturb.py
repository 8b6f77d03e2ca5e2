"""Perturbation construction: the randomized cell-walk search and exact
minimal-perturbation oracles.

The cell walk realizes the abstract "nearest different-class point within
radius" map concretely: jump to a uniform point of the image's cell,
enumerate the cells of the unit-cube decomposition whose minimal L2
distance from that point is within the radius (pruned lattice recursion),
and project onto the closest different-class cell.  Failure is returned
only when no different-class cell intersects the ball.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional

import numpy as np

from .classifiers import ClassifierHandle, sum_classifier
from .errors import (
    DimensionTooLarge,
    EmptyClass,
    EnumerationCapExceeded,
    NoOtherClass,
    SpaceTooLarge,
)
from .image_space import (
    DEFAULT_ENUMERATION_CAP,
    ImageTensor,
    SpaceParams,
    cell_of_point,
    enumerate_space,
    level_diff_pow_sum,
    norm_distance,
    philox_rng,
    sample_uniform,
)
from .mcstats import wilson_ci

DEFAULT_DIMENSION_CAP = 12
DEFAULT_CELL_CAP = 1 << 20


@dataclass(frozen=True)
class ContinuousPoint:
    """A point of the unit cube with one coordinate per channel."""

    coords: tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(v) for v in self.coords)
        for i, v in enumerate(coords):
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"coordinate {v} at index {i} outside [0, 1]")
        object.__setattr__(self, "coords", coords)


@dataclass(frozen=True)
class PerturbationOutcome:
    """Result of one cell-walk search: a different-class image, the image-
    space L2 distance moved, and the number of cells examined; ``result``
    is None on failure."""

    result: Optional[ImageTensor]
    l2_moved: float
    cells_examined: int

    @property
    def succeeded(self) -> bool:
        return self.result is not None


@dataclass(frozen=True)
class PerturbationSearchResult:
    """A witness image in a different class with its exact distance.

    ``exact`` holds the distance itself for p <= 1 (an int for p = 0, a
    Fraction for p = 1) and the exact p-th power of the distance for
    p >= 2, where the distance itself is irrational.
    """

    p: int
    distance: float
    exact: object
    witness: ImageTensor
    method: str


def cell_bounds(params: SpaceParams, level: int) -> tuple[float, float, bool]:
    """(low, high, closed_top) of one coordinate's cell.

    Cells have width ``2^-b``; all are half-open on top except the last.
    """
    q = params.level_count
    lo = level / q
    hi = (level + 1) / q
    return lo, min(hi, 1.0), level == q - 1


def cell_diameter(params: SpaceParams) -> float:
    """L2 diameter of one cell: ``sqrt(n^2 h) / 2^b``."""
    return math.sqrt(params.dimension) / params.level_count


def sample_point_in_cell(image: ImageTensor,
                         rng: np.random.Generator) -> ContinuousPoint:
    """Uniform point of the image's cell."""
    coords = []
    for level in image.levels:
        lo, hi, _ = cell_bounds(image.params, level)
        coords.append(float(rng.uniform(lo, hi)))
    return ContinuousPoint(tuple(coords))


def _coordinate_candidates(params: SpaceParams, x: float):
    """Per-coordinate cell candidates ordered by squared distance from x."""
    q = params.level_count
    entries = []
    for level in range(q):
        lo, hi, _ = cell_bounds(params, level)
        if x < lo:
            d = lo - x
        elif x > hi:
            d = x - hi
        else:
            d = 0.0
        entries.append((d * d, level))
    entries.sort()
    return entries


def find_perturbation(classifier: ClassifierHandle, image: ImageTensor,
                      radius: float, seed: int | None = None,
                      rng: np.random.Generator | None = None, *,
                      dim_cap: int = DEFAULT_DIMENSION_CAP,
                      cell_cap: int = DEFAULT_CELL_CAP,
                      label_cache: dict | None = None) -> PerturbationOutcome:
    """Randomized search for a nearby different-class image.

    Samples a uniform point of the input's cell (deterministic given the
    seed), walks the cell lattice in nondecreasing distance order with
    subtree pruning, and projects onto the first different-class cell
    within the radius; equidistant cells tie-break lexicographically.
    Returns a failure outcome iff no different-class cell intersects the
    ball.
    """
    params = image.params
    dim = params.dimension
    if dim > dim_cap:
        raise DimensionTooLarge(f"dimension {dim} exceeds cap {dim_cap}")
    if params.total_images > cell_cap:
        raise EnumerationCapExceeded(
            f"{params.total_images} cells exceed cap {cell_cap}")
    if rng is None:
        rng = philox_rng(0 if seed is None else seed)
    if label_cache is None:
        label_cache = {}

    p1 = sample_point_in_cell(image, rng)
    base_label = classifier.decide(image)
    r2 = float(radius) * float(radius)
    candidates = [_coordinate_candidates(params, x) for x in p1.coords]

    best_d2 = math.inf
    best_levels: tuple[int, ...] | None = None
    cells_examined = 0
    prefix = [0] * dim

    def visit(depth: int, partial: float):
        nonlocal best_d2, best_levels, cells_examined
        limit = min(r2, best_d2)
        if depth == dim:
            cells_examined += 1
            levels = tuple(prefix)
            got = label_cache.get(levels)
            if got is None:
                got = classifier.decide(ImageTensor(params, levels))
                label_cache[levels] = got
            if got != base_label:
                if partial < best_d2 or (partial == best_d2
                                         and levels < best_levels):
                    best_d2 = partial
                    best_levels = levels
            return
        for d2, level in candidates[depth]:
            total = partial + d2
            if total > limit:
                break  # candidates are sorted; the rest are farther
            prefix[depth] = level
            visit(depth + 1, total)
            limit = min(r2, best_d2)

    visit(0, 0.0)

    if best_levels is None:
        return PerturbationOutcome(result=None, l2_moved=0.0,
                                   cells_examined=cells_examined)

    p2 = []
    for x, level in zip(p1.coords, best_levels):
        lo, hi, closed_top = cell_bounds(params, level)
        v = min(max(x, lo), hi)
        if v == hi and not closed_top:
            v = math.nextafter(hi, lo)  # keep the point inside the half-open cell
        p2.append(v)
    result = ImageTensor(params, best_levels)
    assert classifier.decide(result) != base_label
    assert cell_of_point(params, p2).levels == best_levels

    moved = float(norm_distance(image, result, 2))
    # Both endpoints sit inside cells of diameter sqrt(n^2 h)/2^b, and the
    # walk certified ||p1 - p2|| <= radius; the triangle inequality gives
    # the image-space guarantee checked here.
    assert moved <= float(radius) + 2 * cell_diameter(params) + 1e-9
    return PerturbationOutcome(result=result, l2_moved=moved,
                               cells_examined=cells_examined)


def nearest_cell_exhaustive(classifier: ClassifierHandle,
                            point: ContinuousPoint,
                            base_label: int) -> tuple[float, tuple[int, ...] | None]:
    """Full-scan oracle: squared distance to the closest different-class
    cell, with lexicographic tie-break.  Independent of the pruned walk."""
    params = classifier.params
    best_d2 = math.inf
    best_levels = None
    for levels in product(range(params.level_count), repeat=params.dimension):
        if classifier.decide(ImageTensor(params, levels)) == base_label:
            continue
        d2 = 0.0
        # same per-coordinate float expression as the walk, so distance
        # ties resolve identically; only the enumeration is independent
        for x, level in zip(point.coords, levels):
            lo, hi, _ = cell_bounds(params, level)
            if x < lo:
                d2 += (lo - x) * (lo - x)
            elif x > hi:
                d2 += (x - hi) * (x - hi)
        if d2 < best_d2 or (d2 == best_d2 and levels < best_levels):
            best_d2 = d2
            best_levels = levels
    return best_d2, best_levels


@dataclass(frozen=True)
class FailureRateReport:
    """Empirical failure probability of the cell-walk search."""

    radius: float
    samples: int
    failures: int
    rate: float
    ci95: tuple[float, float]


def failure_rate(classifier: ClassifierHandle, label: int, radius: float,
                 samples: int, seed: int, *,
                 max_rejections: int = 100_000) -> FailureRateReport:
    """Failure probability over uniform class members, with a Wilson CI.

    Each sample derives its own RNG stream from (seed, index), so the
    estimate is independent of evaluation order.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    params = classifier.params
    if params.total_images <= 4096:
        if not any(classifier.decide(img) == label
                   for img in enumerate_space(params)):
            raise EmptyClass(f"label {label} has no members")
    label_cache: dict = {}
    failures = 0
    for index in range(samples):
        rng = philox_rng(seed, index)
        for attempt in range(max_rejections):
            candidate = sample_uniform(params, 0, rng=rng)
            if classifier.decide(candidate) == label:
                break
        else:
            raise EmptyClass(
                f"no member of label {label} after {max_rejections} draws")
        outcome = find_perturbation(classifier, candidate, radius, rng=rng,
                                    label_cache=label_cache)
        if not outcome.succeeded:
            failures += 1
    return FailureRateReport(radius=float(radius), samples=samples,
                             failures=failures, rate=failures / samples,
                             ci95=wilson_ci(failures, samples))


def _search_result(params: SpaceParams, p: int, pow_sum: int,
                   witness: ImageTensor, method: str) -> PerturbationSearchResult:
    top = params.max_level
    if p == 0:
        return PerturbationSearchResult(p, float(pow_sum), pow_sum, witness, method)
    if p == 1:
        return PerturbationSearchResult(p, pow_sum / top,
                                        Fraction(pow_sum, top), witness, method)
    return PerturbationSearchResult(p, pow_sum ** (1 / p) / top,
                                    Fraction(pow_sum, top ** p), witness, method)


def minimal_perturbation(classifier: ClassifierHandle, image: ImageTensor,
                         p: int,
                         cap: int = DEFAULT_ENUMERATION_CAP) -> PerturbationSearchResult:
    """Exact minimal p-distance to any different-class image, by full scan.

    The integer quantity ``sum |delta_level|^p`` orders candidates exactly,
    so no float tie can pick a wrong witness; the scan stops early once
    the smallest possible nonzero value is reached.
    """
    params = image.params
    if params.total_images > cap:
        raise SpaceTooLarge(f"space holds {params.total_images} images")
    base_label = classifier.decide(image)
    best = None
    best_witness = None
    for other in enumerate_space(params, cap):
        if classifier.decide(other) == base_label:
            continue
        value = level_diff_pow_sum(image, other, p)
        if best is None or value < best:
            best, best_witness = value, other
            if best == 1:
                break  # no different image can be closer
    if best is None:
        raise NoOtherClass("every image shares the input's label")
    return _search_result(params, p, best, best_witness, "exhaustive")


def attack_sum_classifier(image: ImageTensor, p: int) -> PerturbationSearchResult:
    """Minimal attack on the sum classifier, built greedily.

    Crossing the threshold needs a known net level change D; spending it
    on the largest-headroom channels minimizes the count norm, and
    spreading it one unit at a time onto the currently smallest move
    minimizes any convex power.  Agreement with the exhaustive oracle is
    part of the test suite.
    """
    params = image.params
    doubled_max = params.dimension * params.max_level
    first_one_sum = (doubled_max + 1) // 2  # smallest level sum labeled 1
    level_sum = image.level_sum()
    if 2 * level_sum < doubled_max:  # label 0: push the sum up
        needed = first_one_sum - level_sum
        caps = [params.max_level - v for v in image.levels]
        direction = 1
    else:  # label 1: push the sum down
        needed = level_sum - (first_one_sum - 1)
        caps = list(image.levels)
        direction = -1
    if needed > sum(caps):
        raise NoOtherClass("threshold unreachable from this image")

    moves = [0] * len(caps)
    if p <= 1:
        order = sorted(range(len(caps)), key=lambda i: (-caps[i], i))
        remaining = needed
        for i in order:
            if remaining == 0:
                break
            take = min(caps[i], remaining)
            moves[i] = take
            remaining -= take
    else:
        # Water fill: each unit goes to the smallest current move that
        # still has headroom (marginal cost of a convex power increases
        # with the move size).
        heap = [(0, i) for i in range(len(caps)) if caps[i] > 0]
        heapq.heapify(heap)
        remaining = needed
        while remaining:
            move, i = heapq.heappop(heap)
            moves[i] = move + 1
            remaining -= 1
            if moves[i] < caps[i]:
                heapq.heappush(heap, (moves[i], i))

    witness = ImageTensor(params, tuple(v + direction * m
                                        for v, m in zip(image.levels, moves)))
    classifier = sum_classifier(params)
    assert classifier.decide(witness) != classifier.decide(image)
    if p == 0:
        pow_sum = sum(1 for m in moves if m)
    else:
        pow_sum = sum(m ** p for m in moves)
    return _search_result(params, p, pow_sum, witness, "sum-analytic")
