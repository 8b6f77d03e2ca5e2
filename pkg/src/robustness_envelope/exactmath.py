"""Exact combinatorics, binomial tails, and discrete distribution checks.

All probability values are `fractions.Fraction` instances, so comparisons
are exact.  The only transcendental quantities that ever enter a
comparison (bounds of the form ``coeff * exp(q)`` with rational ``q``) go
through :func:`compare_scaled_exp`, which escalates working precision
until the comparison is certified, rather than trusting one float round.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath

from .errors import (
    AsymmetricY,
    NoFeasibleR,
    NoSolution,
    PrecisionInsufficient,
    PreconditionViolated,
    SupportCapExceeded,
    ZeroDenominator,
)

# Exact probabilities are plain Fractions; the alias documents intent.
ExactRational = Fraction

DEFAULT_SUPPORT_CAP = 1 << 24


def binom(n: int, k: int) -> int:
    """Binomial coefficient extended to arbitrary integer ``k``.

    Returns ``n! / (k! (n-k)!)`` for ``0 <= k <= n`` and 0 otherwise,
    always as an exact integer.  ``n`` must be positive.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


@dataclass(frozen=True)
class TailQuery:
    """Parameters of a lower binomial tail: ``n`` trials, cutoff ``k``,
    success probability ``p`` strictly between 0 and 1."""

    n: int
    k: int
    p: Fraction

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        p = Fraction(self.p)
        if not (0 < p < 1):
            raise ValueError(f"p must be in (0, 1), got {p}")
        object.__setattr__(self, "p", p)


@lru_cache(maxsize=512)
def tail_table(n: int, p: Fraction) -> tuple[Fraction, ...]:
    """Exact lower-tail CDF of Binomial(n, p) at every k in 0..n.

    ``table[k] = sum_{i<=k} C(n,i) p^i (1-p)^(n-i)``; the last entry is
    exactly 1.
    """
    p = Fraction(p)
    q = 1 - p
    term = q ** n  # k = 0 term
    acc = term
    out = [acc]
    for i in range(n):
        # C(n,i+1) p^(i+1) q^(n-i-1) from the previous term
        term = term * (n - i) * p / ((i + 1) * q)
        acc += term
        out.append(acc)
    assert out[-1] == 1
    return tuple(out)


def binomial_tail(query: TailQuery) -> Fraction:
    """Exact cumulative probability of at most ``k`` successes."""
    if query.k < 0:
        return Fraction(0)
    if query.k >= query.n:
        return Fraction(1)
    return tail_table(query.n, query.p)[query.k]


def mode_bound_holds(n: int) -> bool:
    """Check ``C(n, floor(n/2))^2 * n < 4^n`` with exact integers.

    Squaring removes the square root from the analytic form of the bound,
    so no rounding is involved.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    c = math.comb(n, n // 2)
    return c * c * n < 1 << (2 * n)


def mode_bound_sweep(n_max: int) -> tuple[int | None, float]:
    """Check the central-coefficient bound for every n in 1..n_max.

    Maintains the central binomial coefficient incrementally so the sweep
    stays fast for large ``n_max``.  Returns ``(first_violation, min_log_gap)``
    where the gap is ``2n ln2 - ln(C^2 n)``; a violation would make the gap
    non-positive.
    """
    c = 1  # C(1, 0)
    min_gap = math.inf
    first_violation = None
    ln2 = math.log(2)
    for n in range(1, n_max + 1):
        if n > 1:
            if n % 2 == 0:
                c = 2 * c
            else:
                c = c * n // ((n + 1) // 2)
        if c * c * n >= 1 << (2 * n):
            if first_violation is None:
                first_violation = n
        gap = 2 * n * ln2 - (2 * math.log(c) + math.log(n))
        if gap < min_gap:
            min_gap = gap
    return first_violation, min_gap


def tail_ratio(n: int, k: int, p: Fraction, x: int) -> Fraction:
    """Exact value of ``U(x-k) / U(x)`` for the Binomial(n, p) lower tail."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if x > n:
        raise ValueError(f"x must be at most n, got {x}")
    denominator = binomial_tail(TailQuery(n, x, p))
    if denominator == 0:
        raise ZeroDenominator(f"U_{{{n},{p}}}({x}) = 0")
    numerator = binomial_tail(TailQuery(n, x - k, p))
    return numerator / denominator


def compare_scaled_exp(lhs: Fraction, coeff: Fraction, exponent: Fraction,
                       max_dps: int = 240) -> int:
    """Certified comparison of a rational ``lhs`` against ``coeff * e^exponent``.

    Returns -1, 0 or +1 for less / equal / greater.  The transcendental
    side is evaluated at increasing precision until the interval around it
    excludes ``lhs``; equality is only possible when ``exponent == 0``, in
    which case the comparison is exact.
    """
    lhs = Fraction(lhs)
    coeff = Fraction(coeff)
    exponent = Fraction(exponent)
    if exponent == 0:
        rhs = coeff
        return (lhs > rhs) - (lhs < rhs)
    if lhs <= 0 < coeff:
        return -1
    dps = 30
    while dps <= max_dps:
        with mpmath.workdps(dps):
            rhs = (mpmath.mpf(coeff.numerator) / coeff.denominator
                   * mpmath.exp(mpmath.mpf(exponent.numerator) / exponent.denominator))
            lf = mpmath.mpf(lhs.numerator) / lhs.denominator
            slack = rhs * mpmath.mpf(10) ** (8 - dps)
            if lf < rhs - slack:
                return -1
            if lf > rhs + slack:
                return 1
        dps *= 2
    raise PrecisionInsufficient(
        f"could not separate {lhs} from {coeff}*exp({exponent}) at {max_dps} digits")


def hoeffding_exponent(n: int, k: int) -> Fraction:
    """Exponent of the tail-ratio bound ``2 e^{-2(k-1)^2/n}``."""
    return Fraction(-2 * (k - 1) ** 2, n)


def hoeffding_ratio_holds(n: int, k: int, p: Fraction, r: int) -> bool:
    """Check ``U(r-k)/U(r) <= 2 e^{-2(k-1)^2/n}`` for an admissible query.

    Admissible means ``n > r >= k >= 1`` and ``U(r) <= 1/2``; the latter is
    enforced and violations raise :class:`PreconditionViolated`.
    """
    if not (n > r >= k >= 1):
        raise ValueError(f"need n > r >= k >= 1, got n={n}, r={r}, k={k}")
    if binomial_tail(TailQuery(n, r, Fraction(p))) > Fraction(1, 2):
        raise PreconditionViolated(f"U_{{{n},{p}}}({r}) > 1/2")
    ratio = tail_ratio(n, k, Fraction(p), r)
    return compare_scaled_exp(ratio, Fraction(2), hoeffding_exponent(n, k)) <= 0


def solve_p_for_tail(n: int, r: int, target: Fraction,
                     tol: Fraction | float = Fraction(1, 10 ** 12)) -> Fraction:
    """Find ``p`` with ``|U_{n,p}(r) - target| <= tol`` by bisection.

    ``U_{n,p}(r)`` is continuous and strictly decreasing in ``p`` on (0, 1)
    for ``0 <= r < n``, running from 1 down to 0, so any target in (0, 1)
    is attainable.  The returned ``p`` is an exact dyadic rational, which
    makes round-trip verification of the tail exact.
    """
    if not (0 <= r < n):
        raise ValueError(f"need 0 <= r < n, got r={r}, n={n}")
    target = Fraction(target)
    if not (0 < target < 1):
        raise NoSolution(f"target {target} outside (0, 1)")
    tol = Fraction(tol)
    lo, hi = Fraction(0), Fraction(1)
    # The tail is Lipschitz in p with constant under n * C(n-1, r), so the
    # midpoint is within tol well before the interval width reaches
    # tol / that constant; 1000 halvings is far beyond any valid input.
    for _ in range(1000):
        mid = (lo + hi) / 2
        value = binomial_tail(TailQuery(n, r, mid))
        if abs(value - target) <= tol:
            return mid
        if value > target:
            lo = mid  # tail decreasing in p: too much mass means p too small
        else:
            hi = mid
    raise NoSolution(f"bisection did not reach tol={tol} for n={n}, r={r}")


def harper_rhs(n: int, k: int, frac: Fraction,
               tol: Fraction | float = Fraction(1, 10 ** 12)) -> Fraction:
    """Isoperimetric lower bound on the expanded fraction of a vertex set.

    Minimizes ``U_{n,p_r}(r+k)`` over integer ``r`` in ``[0, n-k)``, where
    ``p_r`` solves ``U_{n,p}(r) = frac``.  The root is solved three orders
    of magnitude tighter than ``tol`` so the propagated error stays well
    inside the caller's tolerance.  ``k = 0`` degenerates to the identity
    and returns ``frac``.
    """
    frac = Fraction(frac)
    if not (0 < frac <= 1):
        raise ValueError(f"frac must be in (0, 1], got {frac}")
    if k == 0:
        return frac
    if not (1 <= k < n):
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    solver_tol = Fraction(tol) / 1024
    best = None
    for r in range(0, n - k):
        try:
            p_r = solve_p_for_tail(n, r, frac, solver_tol)
        except NoSolution:
            continue
        value = binomial_tail(TailQuery(n, r + k, p_r))
        if best is None or value < best:
            best = value
    if best is None:
        raise NoFeasibleR(f"no integer r in [0, {n - k}) admits U = {frac}")
    return best


# --- exact discrete distributions on an integer grid ------------------------

@dataclass(frozen=True)
class DiscretePMF:
    """Exact distribution on a contiguous integer grid.

    ``offset`` is the value of the first support point; ``masses`` are
    nonnegative Fractions summing to exactly 1.
    """

    offset: int
    masses: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.masses:
            raise ValueError("masses must be nonempty")
        masses = tuple(Fraction(m) for m in self.masses)
        if any(m < 0 for m in masses):
            raise ValueError("masses must be nonnegative")
        if sum(masses) != 1:
            raise ValueError("masses must sum to exactly 1")
        object.__setattr__(self, "masses", masses)

    @property
    def support_min(self) -> int:
        return self.offset

    @property
    def support_max(self) -> int:
        return self.offset + len(self.masses) - 1

    def mass_at(self, value: int) -> Fraction:
        if self.support_min <= value <= self.support_max:
            return self.masses[value - self.offset]
        return Fraction(0)

    def cdf_at(self, value: int) -> Fraction:
        """Exact probability of the grid values <= ``value``."""
        if value < self.support_min:
            return Fraction(0)
        stop = min(value, self.support_max) - self.offset + 1
        return sum(self.masses[:stop], Fraction(0))

    def mean(self) -> Fraction:
        return sum((Fraction(self.offset + i) * m for i, m in enumerate(self.masses)),
                   Fraction(0))

    def is_symmetric_about_zero(self) -> bool:
        if self.support_min != -self.support_max:
            return False
        return self.masses == self.masses[::-1]


def pmf_point(value: int) -> DiscretePMF:
    """Point mass at a single grid value."""
    return DiscretePMF(value, (Fraction(1),))


def pmf_uniform_levels(levels: int) -> DiscretePMF:
    """Uniform mass on the grid ``{0, ..., levels-1}``."""
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    return DiscretePMF(0, (Fraction(1, levels),) * levels)


def pmf_uniform_symmetric(radius: int) -> DiscretePMF:
    """Uniform mass on ``{-radius, ..., radius}``; symmetric about 0."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    width = 2 * radius + 1
    return DiscretePMF(-radius, (Fraction(1, width),) * width)


def pmf_bernoulli(p: Fraction) -> DiscretePMF:
    """Bernoulli distribution on {0, 1}."""
    p = Fraction(p)
    if not (0 <= p <= 1):
        raise ValueError(f"p must be in [0, 1], got {p}")
    return DiscretePMF(0, (1 - p, p))


def pmf_convolve(a: DiscretePMF, b: DiscretePMF,
                 cap: int = DEFAULT_SUPPORT_CAP) -> DiscretePMF:
    """Exact distribution of the sum of two independent grid variables."""
    width = len(a.masses) + len(b.masses) - 1
    if width > cap:
        raise SupportCapExceeded(f"support {width} exceeds cap {cap}")
    out = [Fraction(0)] * width
    for i, ma in enumerate(a.masses):
        if ma == 0:
            continue
        for j, mb in enumerate(b.masses):
            if mb:
                out[i + j] += ma * mb
    return DiscretePMF(a.offset + b.offset, tuple(out))


def pmf_iid_sum(base: DiscretePMF, count: int,
                cap: int = DEFAULT_SUPPORT_CAP) -> DiscretePMF:
    """Exact distribution of the sum of ``count`` independent copies of ``base``.

    Uses square-and-multiply over exact convolution; the result is
    bit-identical however the convolution tree is associated because all
    arithmetic is rational.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    final_width = count * (len(base.masses) - 1) + 1
    if final_width > cap:
        raise SupportCapExceeded(f"support {final_width} exceeds cap {cap}")
    result = None
    power = base
    remaining = count
    while remaining:
        if remaining & 1:
            result = power if result is None else pmf_convolve(result, power, cap)
        remaining >>= 1
        if remaining:
            power = pmf_convolve(power, power, cap)
    return result


def binomial_spread_holds(n: int, sym_y: DiscretePMF, t: Fraction | float) -> bool:
    """Check ``Pr[X + Y <= t] >= Pr[X < t]`` by exact convolution.

    ``X`` is Binomial(n, 1/2); ``Y`` must be symmetric about the origin on
    the same integer grid, and ``t`` must be a half-integer at most the
    mean ``n/2`` (at the mean itself both sides coincide by symmetry).
    Both probabilities are exact rationals.
    """
    t = Fraction(t)
    if t.denominator != 2:
        raise ValueError(f"t must be a half-integer, got {t}")
    if t > Fraction(n, 2):
        raise ValueError(f"t must not exceed the mean n/2, got t={t}, n={n}")
    if not sym_y.is_symmetric_about_zero():
        raise AsymmetricY(f"support [{sym_y.support_min}, {sym_y.support_max}] "
                          "is not symmetric about 0")
    x = pmf_iid_sum(pmf_bernoulli(Fraction(1, 2)), n)
    s = pmf_convolve(x, sym_y)
    m = (t.numerator - 1) // 2  # t = m + 1/2, so "<= t" and "< t" both mean "<= m"
    return s.cdf_at(m) >= x.cdf_at(m)


def anti_concentration_holds(n: int, levels2k: int, t: Fraction | float,
                             cap: int = DEFAULT_SUPPORT_CAP) -> bool:
    """Lower bound on the left tail of a sum of quantized uniforms.

    Each summand is uniform on ``2k`` evenly spaced values with endpoints
    ``a = 0`` and ``b = 1``.  Checks, for ``t > 0``::

        Pr[sum <= n/2 - t + 1]  >  1/2 - 2t / sqrt(n)

    The left side is an exact rational from the n-fold convolution.  The
    right side involves ``sqrt(n)``, so the comparison is decided exactly
    by squaring instead of evaluating the root.
    """
    if levels2k < 2 or levels2k % 2:
        raise ValueError(f"levels2k must be even and >= 2, got {levels2k}")
    t = Fraction(t)
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    step_denominator = levels2k - 1  # grid spacing is 1/(2k-1) in real units
    total = pmf_iid_sum(pmf_uniform_levels(levels2k), n, cap)
    threshold = (Fraction(n, 2) - t + 1) * step_denominator
    lhs = total.cdf_at(math.floor(threshold))
    # lhs > 1/2 - 2t/sqrt(n)  <=>  (1/2 - lhs) * sqrt(n) < 2t
    gap = Fraction(1, 2) - lhs
    if gap < 0:
        return True
    return gap * gap * n < 4 * t * t


def floor_plus_c_sqrt(c: Fraction | float, m: int, add: int = 0) -> int:
    """Largest integer ``<= c*sqrt(m) + add``, decided with exact arithmetic.

    Comparisons against ``c*sqrt(m)`` are made by squaring, so float
    rounding near integer boundaries cannot flip the floor.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    c = Fraction(c)
    if c < 0:
        raise ValueError("c must be >= 0")
    c2m = c * c * m
    t = max(0, int(math.isqrt(int(c2m))) - 2)  # t <= c*sqrt(m) candidate
    while Fraction((t + 1) ** 2) <= c2m:
        t += 1
    while t > 0 and Fraction(t * t) > c2m:
        t -= 1
    return t + add


def tail_ratio_monotone_violations(
        n_max: int, k_max: int,
        p_values: Sequence[Fraction]) -> tuple[list[tuple], float]:
    """Exhaustively verify that ``x -> U(x-k)/U(x)`` is nondecreasing.

    Returns ``(violations, min_step)``: the ``(n, k, p, x)`` tuples where
    monotonicity fails (empty on success) and the smallest consecutive
    ratio increment seen.  All ratios are exact.
    """
    violations = []
    min_step = math.inf
    for n in range(1, n_max + 1):
        for p in p_values:
            table = tail_table(n, Fraction(p))
            for k in range(1, min(k_max, n) + 1):
                previous = None
                for x in range(0, n + 1):
                    numerator = table[x - k] if x - k >= 0 else Fraction(0)
                    ratio = numerator / table[x]
                    if previous is not None:
                        step = float(ratio - previous)
                        if step < min_step:
                            min_step = step
                        if ratio < previous:
                            violations.append((n, k, Fraction(p), x))
                    previous = ratio
    return violations, min_step


def hoeffding_sweep_violations(
        n_max: int,
        p_values: Iterable[Fraction]) -> tuple[list[tuple], float]:
    """Check the Hoeffding tail-ratio bound on every admissible query.

    Admissible queries are ``n > r >= k >= 1`` with ``U_{n,p}(r) <= 1/2``.
    Returns ``(violations, min_margin)`` where the margin is the float
    distance from ratio to bound; empty violations means the bound held
    everywhere up to ``n_max``.
    """
    violations = []
    min_margin = math.inf
    half = Fraction(1, 2)
    for n in range(2, n_max + 1):
        for p in p_values:
            p = Fraction(p)
            table = tail_table(n, p)
            for r in range(1, n):
                if table[r] > half:
                    break  # tails increase in r; later r are inadmissible too
                for k in range(1, r + 1):
                    numerator = table[r - k] if r - k >= 0 else Fraction(0)
                    ratio = numerator / table[r]
                    exponent = hoeffding_exponent(n, k)
                    margin = (2.0 * math.exp(float(exponent)) - float(ratio))
                    if margin < min_margin:
                        min_margin = margin
                    if margin < 1e-9 and compare_scaled_exp(
                            ratio, Fraction(2), exponent) > 0:
                        violations.append((n, k, p, r))
    return violations, min_margin
