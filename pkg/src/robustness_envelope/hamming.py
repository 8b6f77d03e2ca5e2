"""Hamming graphs: dense vertex subsets, expansion, interior, and the
isoperimetric checks that drive the universal non-robustness bound.

Subsets are stored as big-integer bitsets (bit v set iff vertex v is a
member), so expansion is a handful of shift/mask operations per
coordinate instead of a per-vertex neighbor loop.  A slow per-vertex
implementation is kept alongside as a cross-check oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from . import exactmath
from .errors import NotInterestingSubset, SpaceTooLarge
from .image_space import ImageTensor, SpaceParams

MAX_MATERIALIZED_VERTICES = 1 << 26


@dataclass(frozen=True)
class GraphParams:
    """Words of length ``dims`` over an ``alphabet``-letter alphabet;
    edges join words differing in exactly one coordinate."""

    dims: int
    alphabet: int

    def __post_init__(self):
        if self.dims < 1:
            raise ValueError(f"dims must be >= 1, got {self.dims}")
        if self.alphabet < 2:
            raise ValueError(f"alphabet must be >= 2, got {self.alphabet}")

    @property
    def vertex_count(self) -> int:
        return self.alphabet ** self.dims

    def word_of(self, vertex: int) -> tuple[int, ...]:
        q = self.alphabet
        word = []
        for _ in range(self.dims):
            vertex, digit = divmod(vertex, q)
            word.append(digit)
        return tuple(word)

    def vertex_of(self, word) -> int:
        q = self.alphabet
        vertex = 0
        for digit in reversed(tuple(word)):
            vertex = vertex * q + digit
        return vertex

    def distance(self, u: int, v: int) -> int:
        """Hamming distance between two vertices."""
        q = self.alphabet
        d = 0
        for _ in range(self.dims):
            if u % q != v % q:
                d += 1
            u //= q
            v //= q
        return d


def _replicate(pattern: int, width: int, count: int) -> int:
    # Repeat a width-bit pattern `count` times; the comb integer
    # (2^(w*c)-1)/(2^w-1) has one set bit per period, so the product
    # lays the pattern down without carries.
    comb = ((1 << (width * count)) - 1) // ((1 << width) - 1)
    return pattern * comb


@lru_cache(maxsize=64)
def _coordinate_masks(dims: int, q: int):
    """Per coordinate: (stride, tuple of per-digit vertex masks)."""
    out = []
    for i in range(dims):
        stride = q ** i
        period = stride * q
        count = q ** (dims - i - 1)
        digit_masks = tuple(
            _replicate(((1 << stride) - 1) << (a * stride), period, count)
            for a in range(q))
        out.append((stride, digit_masks))
    return tuple(out)


def _expand_bits(dims: int, q: int, bits: int) -> int:
    """Closed neighborhood of a bitset: members plus all one-coordinate
    changes."""
    masks = _coordinate_masks(dims, q)
    result = 0
    for stride, digit_masks in masks:
        folded = 0
        for a in range(q):
            folded |= (bits & digit_masks[a]) >> (a * stride)
        spread = 0
        for b in range(q):
            spread |= folded << (b * stride)
        result |= spread
    return result


@dataclass(frozen=True)
class HammingSubset:
    """A vertex subset stored as a dense bitset."""

    graph: GraphParams
    bits: int

    def __post_init__(self):
        count = self.graph.vertex_count
        if count > MAX_MATERIALIZED_VERTICES:
            raise SpaceTooLarge(
                f"{count} vertices exceed the materialization cap "
                f"{MAX_MATERIALIZED_VERTICES}")
        if not (0 <= self.bits < (1 << count)):
            raise ValueError("bitset outside the vertex range")

    @classmethod
    def empty(cls, graph: GraphParams) -> "HammingSubset":
        return cls(graph, 0)

    @classmethod
    def full(cls, graph: GraphParams) -> "HammingSubset":
        return cls(graph, (1 << graph.vertex_count) - 1)

    @classmethod
    def from_members(cls, graph: GraphParams, members) -> "HammingSubset":
        bits = 0
        for v in members:
            bits |= 1 << v
        return cls(graph, bits)

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, vertex: int) -> bool:
        return bool(self.bits >> vertex & 1)

    def members(self) -> Iterator[int]:
        bits = self.bits
        v = 0
        while bits:
            if bits & 1:
                yield v
            bits >>= 1
            v += 1

    def complement(self) -> "HammingSubset":
        full = (1 << self.graph.vertex_count) - 1
        return HammingSubset(self.graph, self.bits ^ full)

    def issubset(self, other: "HammingSubset") -> bool:
        return self.bits & ~other.bits == 0


def expand(s: HammingSubset) -> HammingSubset:
    """Vertices of ``s`` together with every neighbor of ``s``."""
    return HammingSubset(s.graph,
                         _expand_bits(s.graph.dims, s.graph.alphabet, s.bits))


def expand_by_neighbors(s: HammingSubset) -> HammingSubset:
    """Reference implementation of :func:`expand` with per-vertex loops."""
    g = s.graph
    q = g.alphabet
    bits = s.bits
    for v in s.members():
        for i in range(g.dims):
            stride = q ** i
            digit = (v // stride) % q
            base = v - digit * stride
            for a in range(q):
                bits |= 1 << (base + a * stride)
    return HammingSubset(g, bits)


def expand_k(s: HammingSubset, k: int) -> HammingSubset:
    """All vertices within graph distance ``k`` of ``s``."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    dims, q = s.graph.dims, s.graph.alphabet
    bits = s.bits
    full = (1 << s.graph.vertex_count) - 1
    for _ in range(k):
        if bits == 0 or bits == full:
            break  # fixed points of expansion
        bits = _expand_bits(dims, q, bits)
    return HammingSubset(s.graph, bits)


def interior_k(s: HammingSubset, k: int) -> HammingSubset:
    """Vertices of ``s`` whose distance-k ball stays inside ``s``.

    Computed through the duality with expansion of the complement.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return expand_k(s.complement(), k).complement()


def interior_by_balls(s: HammingSubset, k: int) -> HammingSubset:
    """Reference interior: test each member's ball directly."""
    keep = 0
    for v in s.members():
        ball = expand_k(HammingSubset.from_members(s.graph, [v]), k)
        if ball.issubset(s):
            keep |= 1 << v
    return HammingSubset(s.graph, keep)


@dataclass(frozen=True)
class HamgraphTheoremCheck:
    """One evaluation of the interior-ratio bound on a subset."""

    subset_size: int
    radius: int
    interior_size: int
    ratio: Fraction
    bound: float
    holds: bool


def check_hamgraph_theorem(s: HammingSubset, c: float) -> HamgraphTheoremCheck:
    """Check ``|Int^r(S)| / |S| < 2 e^{-2c^2}`` with ``r = floor(c sqrt(n) + 2)``.

    Requires a nonempty subset no larger than half the graph.  The radius
    floor and the final strict comparison are both decided exactly.
    """
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    count = s.graph.vertex_count
    if s.size < 1 or 2 * s.size > count:
        raise NotInterestingSubset(
            f"subset size {s.size} outside [1, {count // 2}]")
    radius = exactmath.floor_plus_c_sqrt(c, s.graph.dims, add=2)
    interior = interior_k(s, radius)
    ratio = Fraction(interior.size, s.size)
    exponent = Fraction(-2) * Fraction(c) * Fraction(c)
    holds = exactmath.compare_scaled_exp(ratio, Fraction(2), exponent) < 0
    bound = 2.0 * math.exp(-2.0 * float(c) ** 2)
    return HamgraphTheoremCheck(subset_size=s.size, radius=radius,
                                interior_size=interior.size, ratio=ratio,
                                bound=bound, holds=holds)


@dataclass(frozen=True)
class HarperCheck:
    """One evaluation of the expansion lower bound on a subset."""

    subset_size: int
    k: int
    expansion_fraction: Fraction
    lower_bound: Fraction
    holds: bool


def harper_check(s: HammingSubset, k: int, tol: float = 1e-9) -> HarperCheck:
    """Check ``|Exp^k(S)|/q^n >= rhs - tol`` against the tail-based bound.

    ``rhs`` minimizes the binomial tail over integer shell parameters (see
    :func:`exactmath.harper_rhs`); ``tol`` absorbs the root-solver error.
    """
    count = s.graph.vertex_count
    if s.size < 1 or s.size >= count:
        raise NotInterestingSubset("subset must be proper and nonempty")
    if not (1 <= k < s.graph.dims):
        raise ValueError(f"need 1 <= k < dims, got k={k}")
    expanded = expand_k(s, k)
    lhs = Fraction(expanded.size, count)
    rhs = exactmath.harper_rhs(s.graph.dims, k, Fraction(s.size, count),
                               Fraction(tol))
    return HarperCheck(subset_size=s.size, k=k, expansion_fraction=lhs,
                       lower_bound=rhs, holds=lhs >= rhs - Fraction(tol))


@dataclass(frozen=True)
class ImageBijection:
    """Distance-preserving pairing of a Hamming graph with an image space.

    The word of a vertex is exactly the level array of its image, so graph
    distance equals the count norm between the paired images.
    """

    params: SpaceParams

    @property
    def graph(self) -> GraphParams:
        return GraphParams(dims=self.params.dimension,
                           alphabet=self.params.level_count)

    def image_of(self, vertex: int) -> ImageTensor:
        return ImageTensor(self.params, self.graph.word_of(vertex))

    def vertex_of(self, image: ImageTensor) -> int:
        return self.graph.vertex_of(image.levels)


def image_bijection(params: SpaceParams) -> ImageBijection:
    """Bijection between ``V(H(n^2 h, 2^b))`` and the image space."""
    return ImageBijection(params)


def class_subset(bijection: ImageBijection, decide, label: int,
                 cap: int = MAX_MATERIALIZED_VERTICES) -> HammingSubset:
    """Materialize the vertex set of one classifier class."""
    graph = bijection.graph
    if graph.vertex_count > cap:
        raise SpaceTooLarge(f"{graph.vertex_count} vertices exceed cap {cap}")
    bits = 0
    for v in range(graph.vertex_count):
        if decide(bijection.image_of(v)) == label:
            bits |= 1 << v
    return HammingSubset(graph, bits)
