"""Classifier handles and the battery of classifiers used to exercise the
universal bounds.

The sum-threshold classifier is the construction whose class 0 realizes
the robustness lower bound; the seeded random kinds (uniform, balanced,
linear-threshold) form the zoo against which the universal upper bound is
checked at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from . import exactmath
from .errors import AnalyticUnavailable, SpaceTooLarge
from .image_space import (
    DEFAULT_ENUMERATION_CAP,
    ImageTensor,
    SpaceParams,
    enumerate_space,
    flatten,
)


@dataclass(frozen=True)
class ClassifierHandle:
    """A total deterministic labeling of one image space.

    ``decide`` must be reentrant and must map every image of the space to
    a label id in ``[0, label_count)``.  ``spec`` is the parseable string
    form used by reports and the command line.
    """

    params: SpaceParams
    label_count: int
    decide: Callable[[ImageTensor], int]
    kind: str
    spec: str


@dataclass(frozen=True)
class ClassSummary:
    """Size record of one induced class."""

    label: int
    count: int
    interesting: bool


def is_interesting(count: int, params: SpaceParams) -> bool:
    """Nonempty and at most half of the space."""
    return count >= 1 and 2 * count <= params.total_images


def sum_classifier(params: SpaceParams) -> ClassifierHandle:
    """Label 0 iff the channel-value sum is below half the maximum.

    The comparison ``sum(values) < n^2 h / 2`` is carried out on integer
    levels (``2 * sum(levels)`` vs ``dimension * max_level``), so an exact
    tie lands on label 1 with no floating-point ambiguity.
    """
    threshold_doubled = params.dimension * params.max_level

    def decide(image: ImageTensor) -> int:
        return 0 if 2 * image.level_sum() < threshold_doubled else 1

    return ClassifierHandle(params=params, label_count=2, decide=decide,
                            kind="sum", spec="sum")


def level_sum_pmf(params: SpaceParams) -> exactmath.DiscretePMF:
    """Exact distribution of the level sum of a uniform image."""
    return exactmath.pmf_iid_sum(
        exactmath.pmf_uniform_levels(params.level_count), params.dimension)


def sum_class0_max_level_sum(params: SpaceParams) -> int:
    """Largest level sum still labeled 0 by the sum classifier."""
    return (params.dimension * params.max_level - 1) // 2


def class_sizes(classifier: ClassifierHandle, mode: str = "exhaustive",
                cap: int = DEFAULT_ENUMERATION_CAP) -> List[ClassSummary]:
    """Exact class counts, by full enumeration or (sum only) analytically.

    The analytic path counts class 0 through the exact level-sum PMF and
    is available only for the sum classifier.
    """
    params = classifier.params
    if mode == "exhaustive":
        counts = [0] * classifier.label_count
        for image in enumerate_space(params, cap):
            counts[classifier.decide(image)] += 1
        assert sum(counts) == params.total_images
    elif mode == "analytic":
        if classifier.kind != "sum":
            raise AnalyticUnavailable(
                f"analytic counting needs the sum classifier, got {classifier.kind!r}")
        pmf = level_sum_pmf(params)
        zero_fraction = pmf.cdf_at(sum_class0_max_level_sum(params))
        zero_count = zero_fraction * params.total_images
        assert zero_count.denominator == 1
        counts = [int(zero_count), params.total_images - int(zero_count)]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return [ClassSummary(label, count, is_interesting(count, params))
            for label, count in enumerate(counts)]


def _materialized(params: SpaceParams, labels: np.ndarray, label_count: int,
                  kind: str, spec: str) -> ClassifierHandle:
    def decide(image: ImageTensor) -> int:
        return int(labels[image.space_rank()])

    return ClassifierHandle(params=params, label_count=label_count,
                            decide=decide, kind=kind, spec=spec)


def random_classifier(params: SpaceParams, label_count: int, kind: str,
                      seed: int,
                      cap: int = DEFAULT_ENUMERATION_CAP) -> ClassifierHandle:
    """Seeded random classifier of one of three kinds.

    ``uniform`` labels every image independently; ``balanced`` partitions
    the space into classes whose sizes differ by at most one; both require
    an enumerable space.  ``linear_threshold`` draws Gaussian weights and
    a threshold over flattened values and works on any space.
    """
    if label_count < 2:
        raise ValueError(f"label_count must be >= 2, got {label_count}")
    rng = np.random.default_rng(seed)
    if kind == "uniform":
        total = params.total_images
        if total > cap:
            raise SpaceTooLarge(f"space holds {total} images, cap is {cap}")
        labels = rng.integers(0, label_count, size=total)
        return _materialized(params, labels, label_count, kind,
                             f"uniform:{seed}:{label_count}")
    if kind == "balanced":
        total = params.total_images
        if total > cap:
            raise SpaceTooLarge(f"space holds {total} images, cap is {cap}")
        labels = np.empty(total, dtype=np.int64)
        labels[rng.permutation(total)] = np.arange(total) % label_count
        return _materialized(params, labels, label_count, kind,
                             f"balanced:{seed}")
    if kind == "linear_threshold":
        if label_count != 2:
            raise ValueError("linear_threshold supports exactly 2 labels")
        weights = rng.standard_normal(params.dimension)
        threshold = float(weights @ rng.random(params.dimension))

        def decide(image: ImageTensor) -> int:
            return 1 if float(weights @ flatten(image)) >= threshold else 0

        return ClassifierHandle(params=params, label_count=2, decide=decide,
                                kind="linear_threshold", spec=f"linthresh:{seed}")
    raise ValueError(f"unknown kind {kind!r}")


def parse_classifier_spec(spec: str, params: SpaceParams,
                          cap: int = DEFAULT_ENUMERATION_CAP) -> ClassifierHandle:
    """Build a classifier from its string form.

    Accepted forms: ``sum``, ``balanced:<seed>``, ``uniform:<seed>:<labels>``,
    ``linthresh:<seed>``.
    """
    parts = spec.split(":")
    try:
        if parts == ["sum"]:
            return sum_classifier(params)
        if parts[0] == "balanced" and len(parts) == 2:
            return random_classifier(params, 2, "balanced", int(parts[1]), cap)
        if parts[0] == "uniform" and len(parts) == 3:
            return random_classifier(params, int(parts[2]), "uniform",
                                     int(parts[1]), cap)
        if parts[0] == "linthresh" and len(parts) == 2:
            return random_classifier(params, 2, "linear_threshold",
                                     int(parts[1]), cap)
    except ValueError as e:
        raise ValueError(f"bad classifier spec {spec!r}: {e}") from e
    raise ValueError(f"unknown classifier spec {spec!r}")
