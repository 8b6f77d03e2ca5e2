"""Per-image and per-class robustness measurement.

Three routes to the same quantities, used to check each other:

* brute-force enumeration (exact, the ground truth at desk scale),
* analytic exact fractions for the sum classifier via its level-sum PMF,
* Monte Carlo estimation with Wilson intervals for anything larger.

All budget comparisons reduce to integers: a p-norm budget turns into a
threshold on the integer ``sum |delta_level|^p``, so inclusive budgets
(``||.||_p <= d``) are decided without float ties.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import exactmath, perturb
from .classifiers import (
    ClassifierHandle,
    is_interesting,
    level_sum_pmf,
    sum_class0_max_level_sum,
)
from .errors import BallTooLarge, EmptyClass, SpaceTooLarge
from .image_space import (
    DEFAULT_ENUMERATION_CAP,
    ImageTensor,
    PerturbationBudget,
    SpaceParams,
    enumerate_space,
    level_diff_pow_sum,
    philox_rng,
    sample_uniform,
)
from .mcstats import wilson_ci

MATRIX_CAP = 2048  # spaces up to this many images use dense distance matrices

CSV_HEADER = ("n", "h", "b", "classifier", "label", "p", "size", "method",
              "fraction", "ci_lo", "ci_hi", "samples", "seed")


@dataclass(frozen=True)
class RobustnessReport:
    """Measured robust fraction of one class against one budget.

    ``total`` is the number of images the verdict aggregates over: the
    class size for exact methods, the sample count for Monte Carlo.
    Exact methods carry a Fraction and no interval; Monte Carlo carries
    the Wilson interval and the seed.
    """

    space: SpaceParams
    classifier: str
    label: int
    budget: PerturbationBudget
    total: int
    robust_count: int
    fraction: Fraction | float
    method: str
    ci95: Optional[tuple[float, float]] = None
    samples: Optional[int] = None
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "n": self.space.n, "h": self.space.h, "b": self.space.b,
            "classifier": self.classifier, "label": self.label,
            "p": self.budget.p, "size": float(self.budget.size),
            "method": self.method, "fraction": float(self.fraction),
            "ci_lo": None if self.ci95 is None else self.ci95[0],
            "ci_hi": None if self.ci95 is None else self.ci95[1],
            "samples": self.samples, "seed": self.seed,
        }

    def csv_row(self) -> list:
        d = self.to_dict()
        return [d[k] if d[k] is not None else "" for k in CSV_HEADER]


@lru_cache(maxsize=8)
def space_images(params: SpaceParams) -> tuple[ImageTensor, ...]:
    """All images of a small space, in lexicographic (rank) order."""
    return tuple(enumerate_space(params, MATRIX_CAP))


@lru_cache(maxsize=16)
def _diff_pow_matrix(params: SpaceParams, p: int) -> np.ndarray:
    """Pairwise ``sum |delta_level|^p`` (count for p = 0) as int64."""
    images = space_images(params)
    levels = np.array([img.levels for img in images], dtype=np.int64)
    n = len(images)
    out = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        diff = np.abs(levels - levels[i])
        if p == 0:
            out[i] = (diff != 0).sum(axis=1)
        else:
            out[i] = (diff ** p).sum(axis=1)
    return out


def labels_for(classifier: ClassifierHandle,
               cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """Label of every image, indexed by rank."""
    params = classifier.params
    if params.total_images > cap:
        raise SpaceTooLarge(f"space holds {params.total_images} images")
    return np.fromiter((classifier.decide(img) for img in enumerate_space(params, cap)),
                       dtype=np.int64, count=params.total_images)


def level_threshold(params: SpaceParams, budget: PerturbationBudget) -> int:
    """Integer threshold equivalent to ``||.||_p <= size`` on level sums."""
    if budget.p == 0:
        return math.floor(Fraction(budget.size))
    return math.floor(budget.exact_size_pow() * params.max_level ** budget.p)


def robust_flags(classifier: ClassifierHandle, budget: PerturbationBudget,
                 cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """Robustness verdict for every image of a small space, exactly.

    An image is robust iff no image within the (integerized) budget wears
    a different label.
    """
    params = classifier.params
    if params.total_images > min(cap, MATRIX_CAP):
        raise SpaceTooLarge(f"space holds {params.total_images} images")
    labels = labels_for(classifier, cap)
    matrix = _diff_pow_matrix(params, budget.p)
    threshold = level_threshold(params, budget)
    if threshold < 0:
        return np.ones(len(labels), dtype=bool)  # nothing is within budget
    differs = labels[None, :] != labels[:, None]
    within = matrix <= threshold
    return ~(differs & within).any(axis=1)


def image_is_robust(classifier: ClassifierHandle, image: ImageTensor,
                    budget: PerturbationBudget, *,
                    ball_cap: int = 1 << 20,
                    cap: int = DEFAULT_ENUMERATION_CAP,
                    force_scan: bool = False) -> bool:
    """Whether every image within the budget keeps the input's label.

    p = 0 enumerates the perturbation ball directly; p >= 1 compares the
    exact minimal attack distance for the sum classifier, or scans the
    space when it is enumerable.
    """
    params = image.params
    base_label = classifier.decide(image)
    if budget.p == 0:
        d = math.floor(Fraction(budget.size))
        if d < 0:
            return True
        d = min(d, params.dimension)
        alt = params.max_level  # alternative values per changed channel
        ball = sum(math.comb(params.dimension, j) * alt ** j
                   for j in range(d + 1))
        if ball > ball_cap:
            raise BallTooLarge(f"ball holds {ball} images, cap is {ball_cap}")
        base = list(image.levels)
        others = [[v for v in range(params.level_count) if v != base[i]]
                  for i in range(params.dimension)]
        for j in range(1, d + 1):
            for positions in itertools.combinations(range(params.dimension), j):
                for values in itertools.product(*(others[i] for i in positions)):
                    candidate = base.copy()
                    for i, v in zip(positions, values):
                        candidate[i] = v
                    if classifier.decide(ImageTensor(params, tuple(candidate))) != base_label:
                        return False
        return True
    if classifier.kind == "sum" and not force_scan:
        # robust iff the minimal attack lands strictly beyond the budget;
        # for p = 1 `exact` is the distance, beyond that its p-th power
        attack = perturb.attack_sum_classifier(image, budget.p)
        return attack.exact > budget.exact_size_pow()
    if params.total_images > cap:
        raise SpaceTooLarge(f"space holds {params.total_images} images")
    threshold = level_threshold(params, budget)
    if threshold < 0:
        return True
    for other in enumerate_space(params, cap):
        if (level_diff_pow_sum(image, other, budget.p) <= threshold
                and classifier.decide(other) != base_label):
            return False
    return True


@lru_cache(maxsize=8)
def _sum_composition_counts(params: SpaceParams) -> tuple[tuple[int, ...], ...]:
    """counts[m][s]: level sequences of length m with sum s, exactly."""
    q = params.level_count
    tables = [(1,)]  # length 0: only the empty sum
    current = [1]
    for _ in range(params.dimension):
        width = len(current) + q - 1
        nxt = [0] * width
        for s, c in enumerate(current):
            if c:
                for v in range(q):
                    nxt[s + v] += c
        current = nxt
        tables.append(tuple(current))
    return tuple(tables)


def _uniform_below(total: int, rng: np.random.Generator) -> int:
    """Uniform integer in [0, total) for arbitrary-precision totals."""
    bits = total.bit_length()
    nbytes = (bits + 7) // 8
    mask = (1 << bits) - 1
    while True:
        draw = int.from_bytes(rng.bytes(nbytes), "little") & mask
        if draw < total:
            return draw


def sample_sum_class_member(params: SpaceParams, label: int,
                            rng: np.random.Generator) -> ImageTensor:
    """Uniform member of a sum-classifier class without rejection.

    Draws the level sum from its exact conditional distribution (counts
    are exact big integers), then a uniform composition realizing that
    sum, digit by digit.
    """
    counts = _sum_composition_counts(params)
    full = counts[params.dimension]
    split = sum_class0_max_level_sum(params)
    sums = (range(0, split + 1) if label == 0
            else range(split + 1, len(full)))
    weights = [full[s] for s in sums]
    total = sum(weights)
    if total == 0:
        raise EmptyClass(f"label {label} has no members")
    cumulative = list(itertools.accumulate(weights))
    target = list(sums)[bisect_right(cumulative, _uniform_below(total, rng))]

    levels = []
    remaining = target
    for position in range(params.dimension):
        suffix = counts[params.dimension - position - 1]
        weights = []
        for v in range(params.level_count):
            rest = remaining - v
            weights.append(suffix[rest] if 0 <= rest < len(suffix) else 0)
        cumulative = list(itertools.accumulate(weights))
        v = bisect_right(cumulative, _uniform_below(cumulative[-1], rng))
        levels.append(v)
        remaining -= v
    assert remaining == 0
    return ImageTensor(params, tuple(levels))


def class_robust_fraction(classifier: ClassifierHandle, label: int,
                          budget: PerturbationBudget,
                          method: str = "exhaustive", *,
                          samples: Optional[int] = None,
                          seed: Optional[int] = None,
                          cap: int = DEFAULT_ENUMERATION_CAP,
                          sampler: str = "rejection",
                          max_rejections: int = 100_000) -> RobustnessReport:
    """Robust fraction of one class: exact enumeration or Monte Carlo."""
    params = classifier.params
    if method == "exhaustive":
        if params.total_images > cap:
            raise SpaceTooLarge(f"space holds {params.total_images} images")
        if params.total_images <= MATRIX_CAP:
            flags = robust_flags(classifier, budget, cap)
            labels = labels_for(classifier, cap)
            member_count = int((labels == label).sum())
            robust_count = int((flags & (labels == label)).sum())
        else:
            member_count = robust_count = 0
            for image in enumerate_space(params, cap):
                if classifier.decide(image) != label:
                    continue
                member_count += 1
                if image_is_robust(classifier, image, budget, cap=cap):
                    robust_count += 1
        if member_count == 0:
            raise EmptyClass(f"label {label} has no members")
        return RobustnessReport(
            space=params, classifier=classifier.spec, label=label,
            budget=budget, total=member_count, robust_count=robust_count,
            fraction=Fraction(robust_count, member_count), method="exhaustive")
    if method == "monte_carlo":
        if not samples or samples < 1:
            raise ValueError("monte_carlo needs samples >= 1")
        if seed is None:
            raise ValueError("monte_carlo needs a seed")
        robust_count = 0
        for index in range(samples):
            rng = philox_rng(seed, index)
            if sampler == "conditional" and classifier.kind == "sum":
                member = sample_sum_class_member(params, label, rng)
            else:
                for _ in range(max_rejections):
                    member = sample_uniform(params, 0, rng=rng)
                    if classifier.decide(member) == label:
                        break
                else:
                    raise EmptyClass(
                        f"no member of label {label} after {max_rejections} draws")
            if image_is_robust(classifier, member, budget, cap=cap):
                robust_count += 1
        return RobustnessReport(
            space=params, classifier=classifier.spec, label=label,
            budget=budget, total=samples, robust_count=robust_count,
            fraction=robust_count / samples, method="monte_carlo",
            ci95=wilson_ci(robust_count, samples), samples=samples, seed=seed)
    raise ValueError(f"unknown method {method!r}")


def sum_exact_fraction_L1(params: SpaceParams, size) -> Fraction:
    """Exact fraction of the sum classifier's class 0 robust to an L1 budget.

    A class-0 image with level sum L can be pushed up by at most
    ``floor(size * max_level)`` levels (headroom never flips the verdict:
    when it binds, the reachable maximum is the full sum, which is already
    on the other side).  Negative budgets are vacuously safe.
    """
    split = sum_class0_max_level_sum(params)
    shift = math.floor(Fraction(size) * params.max_level)
    robust_max = min(split, split - shift)
    pmf = level_sum_pmf(params)
    denominator = pmf.cdf_at(split)
    if denominator == 0:
        raise EmptyClass("class 0 is empty")
    return pmf.cdf_at(robust_max) / denominator


def reduction_check_L1_to_L0(classifier: ClassifierHandle, d, *,
                             mode: str = "exhaustive", samples: int = 200,
                             seed: int = 0,
                             cap: int = DEFAULT_ENUMERATION_CAP) -> bool:
    """Whether robustness at L1 size d implies robustness at L0 size d."""
    if mode == "exhaustive":
        robust_l1 = robust_flags(classifier, PerturbationBudget(1, Fraction(d)), cap)
        robust_l0 = robust_flags(classifier, PerturbationBudget(0, Fraction(d)), cap)
        return bool(np.all(~robust_l1 | robust_l0))
    if mode == "sample":
        params = classifier.params
        rng = philox_rng(seed)
        for _ in range(samples):
            image = sample_uniform(params, 0, rng=rng)
            if (image_is_robust(classifier, image, PerturbationBudget(1, Fraction(d)), cap=cap)
                    and not image_is_robust(classifier, image,
                                            PerturbationBudget(0, Fraction(d)), cap=cap)):
                return False
        return True
    raise ValueError(f"unknown mode {mode!r}")


def reduction_check_L0_to_Lp(classifier: ClassifierHandle, d: int, p: int,
                             cap: int = DEFAULT_ENUMERATION_CAP) -> bool:
    """Both directions of the L0-to-Lp reductions, with exact budgets.

    Robust at L0 size d must imply robust at Lp size ``d^(1/p)/(2^b-1)``;
    not robust at L0 size d must imply not robust at Lp size ``d^(1/p)``.
    The irrational sizes are carried as exact p-th powers.
    """
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    params = classifier.params
    top = params.max_level
    robust_l0 = robust_flags(classifier, PerturbationBudget(0, Fraction(d)), cap)
    small = PerturbationBudget(p, float(d) ** (1 / p) / top,
                               size_pow=Fraction(d) / Fraction(top) ** p)
    large = PerturbationBudget(p, float(d) ** (1 / p), size_pow=Fraction(d))
    robust_small = robust_flags(classifier, small, cap)
    robust_large = robust_flags(classifier, large, cap)
    forward = bool(np.all(~robust_l0 | robust_small))
    backward = bool(np.all(~robust_large | robust_l0))
    return forward and backward


@dataclass(frozen=True)
class Theorem1Entry:
    """One (class, c) evaluation of the universal upper bound."""

    label: int
    c: float
    budget: int
    class_size: int
    robust_count: int
    fraction: Fraction
    bound: float
    margin: float
    holds: bool


@dataclass(frozen=True)
class Theorem1Report:
    classifier: str
    space: SpaceParams
    entries: tuple[Theorem1Entry, ...]

    @property
    def all_hold(self) -> bool:
        return all(e.holds for e in self.entries)


def theorem1_holds(classifier: ClassifierHandle, c_values: Sequence[float],
                   cap: int = DEFAULT_ENUMERATION_CAP) -> Theorem1Report:
    """Exhaustive check of the universal non-robustness bound.

    For every interesting class and every c: the robust fraction at the
    count-norm budget ``floor(c sqrt(h) n + 2)`` must be strictly below
    ``2 e^{-2 c^2}``.  The budget floor and the strict comparison are both
    decided exactly.
    """
    params = classifier.params
    labels = labels_for(classifier, cap)
    counts = np.bincount(labels, minlength=classifier.label_count)
    interesting = [label for label, count in enumerate(counts)
                   if is_interesting(int(count), params)]
    entries = []
    for c in c_values:
        budget = exactmath.floor_plus_c_sqrt(c, params.h * params.n ** 2, add=2)
        flags = robust_flags(classifier, PerturbationBudget(0, budget), cap)
        exponent = Fraction(-2) * Fraction(c) * Fraction(c)
        bound = 2.0 * math.exp(-2.0 * float(c) ** 2)
        for label in interesting:
            members = labels == label
            fraction = Fraction(int((flags & members).sum()), int(members.sum()))
            holds = exactmath.compare_scaled_exp(fraction, Fraction(2), exponent) < 0
            entries.append(Theorem1Entry(
                label=label, c=float(c), budget=budget,
                class_size=int(members.sum()),
                robust_count=int((flags & members).sum()),
                fraction=fraction, bound=bound,
                margin=bound - float(fraction), holds=holds))
    return Theorem1Report(classifier=classifier.spec, space=params,
                          entries=tuple(entries))
