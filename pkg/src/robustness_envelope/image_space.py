"""Quantized image spaces: representation, norms, enumeration, sampling.

An image is a flat tuple of integer channel levels; the real channel
value of level ``l`` is ``l / (2^b - 1)``.  Keeping levels (not reals) as
the canonical representation makes the 0- and 1-norms, serialization,
and all threshold comparisons exact.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    CoordinateOutOfRange,
    LevelOutOfRange,
    MalformedInput,
    ShapeMismatch,
    SpaceTooLarge,
)

DEFAULT_ENUMERATION_CAP = 1 << 20


@dataclass(frozen=True)
class SpaceParams:
    """The triple (n, h, b): n-by-n pixels, h channels, b-bit depth."""

    n: int
    h: int
    b: int

    def __post_init__(self):
        for name in ("n", "h", "b"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")

    @property
    def dimension(self) -> int:
        """Number of channel entries in the flattened tensor."""
        return self.n * self.n * self.h

    @property
    def level_count(self) -> int:
        return 1 << self.b

    @property
    def max_level(self) -> int:
        return (1 << self.b) - 1

    @property
    def total_images(self) -> int:
        return 1 << (self.dimension * self.b)


@dataclass(frozen=True)
class ImageTensor:
    """An image as a flat tuple of levels, row-major over (x, y, channel)."""

    params: SpaceParams
    levels: tuple[int, ...]

    def __post_init__(self):
        levels = tuple(int(v) for v in self.levels)
        if len(levels) != self.params.dimension:
            raise ShapeMismatch(
                f"expected {self.params.dimension} levels, got {len(levels)}")
        top = self.params.max_level
        for i, v in enumerate(levels):
            if not (0 <= v <= top):
                raise LevelOutOfRange(f"level {v} at index {i} outside [0, {top}]")
        object.__setattr__(self, "levels", levels)

    def level_sum(self) -> int:
        return sum(self.levels)

    def space_rank(self) -> int:
        """Lexicographic rank within the space (first coordinate most
        significant)."""
        q = self.params.level_count
        rank = 0
        for v in self.levels:
            rank = rank * q + v
        return rank


@dataclass(frozen=True)
class PerturbationBudget:
    """A norm order and an inclusive size; p = 0 is the count norm.

    ``size_pow`` optionally carries the exact p-th power of the size so
    irrational budgets like ``d**(1/p)`` compare exactly against exact
    norm powers.
    """

    p: int
    size: float | Fraction
    size_pow: Fraction | None = None

    def __post_init__(self):
        if self.p < 0:
            raise ValueError(f"p must be >= 0, got {self.p}")
        if self.size < 0:
            raise ValueError(f"size must be >= 0, got {self.size}")

    def exact_size_pow(self) -> Fraction:
        """Exact p-th power of the budget size (p >= 1)."""
        if self.size_pow is not None:
            return Fraction(self.size_pow)
        return Fraction(self.size) ** max(self.p, 1)


def value_of_level(level: int, b: int, exact: bool = False):
    """Real channel value of a level: ``level / (2^b - 1)``."""
    top = (1 << b) - 1
    if not (0 <= level <= top):
        raise LevelOutOfRange(f"level {level} outside [0, {top}]")
    if top == 0:
        raise LevelOutOfRange("bit depth must be >= 1")
    return Fraction(level, top) if exact else level / top


def image_from_rank(params: SpaceParams, rank: int) -> ImageTensor:
    """Inverse of :meth:`ImageTensor.space_rank`."""
    q = params.level_count
    levels = [0] * params.dimension
    for i in range(params.dimension - 1, -1, -1):
        rank, levels[i] = divmod(rank, q)
    if rank:
        raise ValueError("rank outside the space")
    return ImageTensor(params, tuple(levels))


def level_diff_pow_sum(a: ImageTensor, b: ImageTensor, p: int) -> int:
    """``sum |delta_level|^p`` as an exact integer (p >= 1), or the count
    of differing levels for p = 0."""
    if a.params != b.params:
        raise ShapeMismatch(f"{a.params} != {b.params}")
    if p == 0:
        return sum(1 for x, y in zip(a.levels, b.levels) if x != y)
    return sum(abs(x - y) ** p for x, y in zip(a.levels, b.levels))


def norm_distance(a: ImageTensor, b: ImageTensor, p: int):
    """p-norm of the difference in real channel units.

    Exact for p = 0 (count, an int) and p = 1 (a Fraction); a float for
    p >= 2.  Use :func:`norm_pth_power` when an exact comparison of a
    higher norm is needed.
    """
    s = level_diff_pow_sum(a, b, p)
    if p == 0:
        return s
    if p == 1:
        return Fraction(s, a.params.max_level)
    return (s / a.params.max_level ** p) ** (1 / p)


def norm_pth_power(a: ImageTensor, b: ImageTensor, p: int) -> Fraction:
    """Exact ``||a - b||_p ^ p`` in real channel units (p >= 1)."""
    if p < 1:
        raise ValueError("p must be >= 1")
    return Fraction(level_diff_pow_sum(a, b, p), a.params.max_level ** p)


def enumerate_space(params: SpaceParams,
                    cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[ImageTensor]:
    """Yield every image exactly once in lexicographic level order."""
    if params.total_images > cap:
        raise SpaceTooLarge(
            f"space holds {params.total_images} images, cap is {cap}")
    for levels in itertools.product(range(params.level_count),
                                    repeat=params.dimension):
        yield ImageTensor(params, levels)


def philox_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Counter-based RNG keyed by (seed, index).

    Distinct indices give independent streams, so indexed sampling is
    deterministic and order-independent.
    """
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, index & 0xFFFFFFFFFFFFFFFF],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_uniform(params: SpaceParams, seed: int, index: int = 0,
                   rng: np.random.Generator | None = None) -> ImageTensor:
    """Uniform image: each level drawn independently from [0, 2^b - 1]."""
    if rng is None:
        rng = philox_rng(seed, index)
    levels = rng.integers(0, params.level_count, size=params.dimension)
    return ImageTensor(params, tuple(int(v) for v in levels))


def encode_image(image: ImageTensor) -> bytes:
    """Canonical byte encoding: compact UTF-8 JSON, integer levels only."""
    payload = {"n": image.params.n, "h": image.params.h, "b": image.params.b,
               "levels": list(image.levels)}
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def decode_image(data: bytes | str) -> ImageTensor:
    """Parse the canonical encoding; rejects anything out of contract."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInput(f"invalid JSON: {e.msg}", position=e.pos) from e
    if not isinstance(payload, dict):
        raise MalformedInput("top-level value must be an object")
    for key in ("n", "h", "b", "levels"):
        if key not in payload:
            raise MalformedInput(f"missing key {key!r}")
    for key in ("n", "h", "b"):
        v = payload[key]
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise MalformedInput(f"{key!r} must be a positive integer, got {v!r}")
    params = SpaceParams(payload["n"], payload["h"], payload["b"])
    levels = payload["levels"]
    if not isinstance(levels, list):
        raise MalformedInput("'levels' must be an array")
    if len(levels) != params.dimension:
        raise MalformedInput(
            f"'levels' must hold {params.dimension} entries, got {len(levels)}")
    for i, v in enumerate(levels):
        if not isinstance(v, int) or isinstance(v, bool):
            raise MalformedInput(f"level at index {i} is not an integer: {v!r}",
                                 position=i)
        if not (0 <= v <= params.max_level):
            raise MalformedInput(
                f"level {v} at index {i} outside [0, {params.max_level}]",
                position=i)
    return ImageTensor(params, tuple(levels))


def flatten(image: ImageTensor) -> np.ndarray:
    """The image as a point of the unit cube, one coordinate per channel."""
    return np.asarray(image.levels, dtype=np.float64) / image.params.max_level


def cell_of_point(params: SpaceParams, point: Sequence[float]) -> ImageTensor:
    """The image whose cell of the unit-cube decomposition contains ``point``.

    Cells are the half-open boxes ``[x 2^-b, (x+1) 2^-b)`` per coordinate,
    with the final cell ``[1 - 2^-b, 1]`` closed, so membership is
    unambiguous on boundaries.
    """
    coords = list(point)
    if len(coords) != params.dimension:
        raise ShapeMismatch(
            f"expected {params.dimension} coordinates, got {len(coords)}")
    q = params.level_count
    levels = []
    for i, v in enumerate(coords):
        if not (0.0 <= v <= 1.0) or math.isnan(v):
            raise CoordinateOutOfRange(f"coordinate {v} at index {i} outside [0, 1]")
        levels.append(min(int(math.floor(v * q)), q - 1))
    return ImageTensor(params, tuple(levels))
