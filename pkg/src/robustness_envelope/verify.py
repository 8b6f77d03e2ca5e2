"""Named verification suites: every supporting inequality machine-checked
at desk scale, with margins.

Each suite returns a deterministic, canonically ordered report; a failed
check names its first counterexample.  The suites are what the command
line's ``verify`` command runs and what the acceptance tests assert.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional

from . import exactmath, gaussian, hamming, perturb, robustness
from .classifiers import ClassifierHandle, random_classifier, sum_classifier
from .exactmath import DiscretePMF
from .image_space import (
    PerturbationBudget,
    SpaceParams,
    level_diff_pow_sum,
    philox_rng,
)


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    passed: bool
    margin: Optional[float]
    detail: str


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass(frozen=True)
class VerifyConfig:
    """Scale knobs; the defaults are the acceptance-criteria scales."""

    seed: int = 7
    samples: int = 10_000
    random_subsets: int = 100_000
    mode_bound_n: int = 10_000
    tail_ratio_n: int = 40
    hoeffding_n: int = 64
    balanced_small: int = 1000
    balanced_large: int = 100


# --- binomial suite ----------------------------------------------------------

def suite_binomial(cfg: VerifyConfig) -> SuiteReport:
    checks = []

    bad = [(n, k) for n in range(2, 201) for k in range(1, n)
           if exactmath.binom(n, k) != exactmath.binom(n - 1, k - 1)
           + exactmath.binom(n - 1, k)]
    checks.append(CheckResult("binomial/pascal-identity", not bad, None,
                              f"n <= 200; first violation {bad[0]}" if bad
                              else "n <= 200, exhaustive"))

    bad = [n for n in range(1, 201)
           if sum(exactmath.binom(n, k) for k in range(n + 1)) != 1 << n]
    checks.append(CheckResult("binomial/row-sum", not bad, None,
                              f"first violation n={bad[0]}" if bad
                              else "n <= 200, exhaustive"))

    violation, min_gap = exactmath.mode_bound_sweep(cfg.mode_bound_n)
    spot_ok = all(exactmath.mode_bound_holds(n) for n in (1, 2, 7, 100, 9999))
    checks.append(CheckResult(
        "binomial/mode-bound", violation is None and spot_ok, min_gap,
        f"n <= {cfg.mode_bound_n}, min log gap {min_gap:.6f}"
        + ("" if violation is None else f"; violated at n={violation}")))

    p_grid = [Fraction(j, 10) for j in range(1, 10)]
    violations, min_diff = exactmath.tail_ratio_monotone_violations(
        cfg.tail_ratio_n, 5, p_grid)
    checks.append(CheckResult(
        "binomial/tail-ratio-monotone", not violations, min_diff,
        f"n <= {cfg.tail_ratio_n}, k <= 5, p in j/10; "
        + (f"first violation {violations[0]}" if violations else "exhaustive")))

    p_sweep = [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    violations, min_margin = exactmath.hoeffding_sweep_violations(
        cfg.hoeffding_n, p_sweep)
    checks.append(CheckResult(
        "binomial/hoeffding-ratio", not violations, min_margin,
        f"admissible sweep n <= {cfg.hoeffding_n}, p in (1/4,1/2,3/4); "
        + (f"first violation {violations[0]}" if violations else "exhaustive")))

    bad = []
    for p in p_sweep:
        base = exactmath.pmf_bernoulli(p)
        acc = base
        for n in range(1, 65):
            if n > 1:
                acc = exactmath.pmf_convolve(acc, base)
            for k in (0, n // 2, n - 1):
                if acc.cdf_at(k) != exactmath.binomial_tail(
                        exactmath.TailQuery(n, k, p)):
                    bad.append((n, k, p))
    checks.append(CheckResult(
        "binomial/tail-vs-convolution", not bad, None,
        "n <= 64, tails equal exact convolution CDFs"
        + (f"; first mismatch {bad[0]}" if bad else "")))

    return SuiteReport("binomial", tuple(checks))


# --- hamming suite -----------------------------------------------------------

_C_GRID = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0]


def _hamgraph_cases(dims: int) -> list[tuple[float, int, float]]:
    """(c, radius, float bound) for the standard c grid on one graph."""
    out = []
    for c in _C_GRID:
        radius = exactmath.floor_plus_c_sqrt(c, dims, add=2)
        out.append((c, radius, 2.0 * math.exp(-2.0 * c * c)))
    return out


def _interior_sizes(graph: hamming.GraphParams, bits: int,
                    max_radius: int) -> list[int]:
    """|Int^r(S)| for r = 0..max_radius via incremental complement expansion."""
    count = graph.vertex_count
    full = (1 << count) - 1
    comp = bits ^ full
    sizes = [bits.bit_count()]
    grown = comp
    for _ in range(max_radius):
        grown = hamming._expand_bits(graph.dims, graph.alphabet, grown)
        sizes.append(count - grown.bit_count())
    return sizes


def _check_interior_ratio(sizes: list[int], subset_size: int,
                          cases, worst: list) -> Optional[tuple]:
    """Returns a counterexample tuple or None; tracks the worst margin."""
    for c, radius, bound in cases:
        interior = sizes[min(radius, len(sizes) - 1)]
        margin = bound - interior / subset_size
        if margin < worst[0]:
            worst[0] = margin
        if margin <= 1e-9:
            # Escalate: decide the strict inequality with certified precision.
            cmp = exactmath.compare_scaled_exp(
                Fraction(interior, subset_size), Fraction(2),
                Fraction(-2) * Fraction(c) * Fraction(c))
            if cmp >= 0:
                return (c, subset_size, interior)
    return None


def _sweep_hamgraph_exhaustive(dims: int, q: int) -> CheckResult:
    graph = hamming.GraphParams(dims, q)
    count = graph.vertex_count
    half = count // 2
    cases = _hamgraph_cases(dims)
    max_radius = max(radius for _, radius, _ in cases)
    worst = [math.inf]
    for bits in range(1, 1 << count):
        size = bits.bit_count()
        if size > half:
            continue
        sizes = _interior_sizes(graph, bits, max_radius)
        bad = _check_interior_ratio(sizes, size, cases, worst)
        if bad is not None:
            return CheckResult(
                f"hamming/interior-ratio-H({dims},{q})-exhaustive", False,
                worst[0], f"counterexample bits={bits:#x} at c={bad[0]}")
    return CheckResult(
        f"hamming/interior-ratio-H({dims},{q})-exhaustive", True, worst[0],
        f"all subsets with 1 <= |S| <= {half}, c in {_C_GRID}")


def _sweep_hamgraph_random(dims: int, q: int, count_subsets: int,
                           seed: int) -> CheckResult:
    graph = hamming.GraphParams(dims, q)
    count = graph.vertex_count
    full = (1 << count) - 1
    half = count // 2
    cases = _hamgraph_cases(dims)
    max_radius = max(radius for _, radius, _ in cases)
    rng = philox_rng(seed)
    nbytes = (count + 7) // 8
    worst = [math.inf]
    drawn = 0
    while drawn < count_subsets:
        bits = int.from_bytes(rng.bytes(nbytes), "little") & full
        if bits.bit_count() > half:
            bits ^= full
        if bits == 0 or bits.bit_count() > half:
            continue
        drawn += 1
        sizes = _interior_sizes(graph, bits, max_radius)
        bad = _check_interior_ratio(sizes, bits.bit_count(), cases, worst)
        if bad is not None:
            return CheckResult(
                f"hamming/interior-ratio-H({dims},{q})-random", False,
                worst[0], f"counterexample bits={bits:#x} at c={bad[0]}")
    return CheckResult(
        f"hamming/interior-ratio-H({dims},{q})-random", True, worst[0],
        f"{count_subsets} seeded subsets, c in {_C_GRID}")


def _sweep_harper(dims: int, q: int, k_values, tol: float = 1e-9) -> CheckResult:
    graph = hamming.GraphParams(dims, q)
    count = graph.vertex_count
    rhs_cache: dict = {}
    worst = math.inf
    tol_fraction = Fraction(tol)
    for bits in range(1, (1 << count) - 1):
        size = bits.bit_count()
        expanded = bits
        for k in range(1, max(k_values) + 1):
            expanded = hamming._expand_bits(dims, q, expanded)
            if k not in k_values:
                continue
            key = (k, size)
            rhs = rhs_cache.get(key)
            if rhs is None:
                rhs = exactmath.harper_rhs(dims, k, Fraction(size, count),
                                           tol_fraction)
                rhs_cache[key] = rhs
            lhs = Fraction(expanded.bit_count(), count)
            margin = float(lhs - rhs)
            if margin < worst:
                worst = margin
            if lhs < rhs - tol_fraction:
                return CheckResult(
                    f"hamming/expansion-lower-bound-H({dims},{q})", False,
                    worst, f"counterexample bits={bits:#x}, k={k}")
    return CheckResult(
        f"hamming/expansion-lower-bound-H({dims},{q})", True, worst,
        f"all proper subsets, k in {sorted(k_values)}, tol {tol}; "
        "integer shell parameter convention")


def _operator_invariants(seed: int) -> CheckResult:
    rng = philox_rng(seed, 1)
    for dims, q in ((4, 2), (3, 3)):
        graph = hamming.GraphParams(dims, q)
        count = graph.vertex_count
        full = (1 << count) - 1
        for _ in range(300):
            bits = int.from_bytes(rng.bytes((count + 7) // 8), "little") & full
            s = hamming.HammingSubset(graph, bits)
            fast = hamming.expand(s)
            if fast != hamming.expand_by_neighbors(s):
                return CheckResult("hamming/operator-invariants", False, None,
                                   f"expand mismatch on H({dims},{q}) {bits:#x}")
            if not s.issubset(fast):
                return CheckResult("hamming/operator-invariants", False, None,
                                   f"expansion not extensive on {bits:#x}")
            a, b = int(rng.integers(0, 3)), int(rng.integers(0, 3))
            once = hamming.expand_k(s, a + b)
            twice = hamming.expand_k(hamming.expand_k(s, a), b)
            if once != twice:
                return CheckResult("hamming/operator-invariants", False, None,
                                   f"composition failed a={a} b={b} on {bits:#x}")
            k = int(rng.integers(0, 3))
            dual = hamming.expand_k(s.complement(), k).complement()
            if hamming.interior_k(s, k) != dual:
                return CheckResult("hamming/operator-invariants", False, None,
                                   f"duality failed k={k} on {bits:#x}")
            if hamming.interior_k(s, k) != hamming.interior_by_balls(s, k):
                return CheckResult("hamming/operator-invariants", False, None,
                                   f"interior oracle mismatch k={k} on {bits:#x}")
    return CheckResult("hamming/operator-invariants", True, None,
                       "expand cross-check, extensivity, composition, duality "
                       "on 600 random subsets")


def suite_hamming(cfg: VerifyConfig) -> SuiteReport:
    checks = [
        _sweep_hamgraph_exhaustive(4, 2),
        _sweep_hamgraph_exhaustive(2, 4),
        _sweep_hamgraph_random(6, 2, cfg.random_subsets, cfg.seed),
        _sweep_hamgraph_random(4, 3, cfg.random_subsets, cfg.seed + 1),
        _sweep_harper(4, 2, {1, 2, 3}),
        _sweep_harper(2, 3, {1}),
        _operator_invariants(cfg.seed),
    ]
    return SuiteReport("hamming", tuple(checks))


# --- anti-concentration suite ------------------------------------------------

def _symmetric_family() -> list[tuple[str, DiscretePMF]]:
    family = [("point0", exactmath.pmf_point(0))]
    for radius in (1, 2, 3):
        family.append((f"uniform±{radius}",
                       exactmath.pmf_uniform_symmetric(radius)))
    for m in (1, 2, 3):
        masses = [Fraction(0)] * (2 * m + 1)
        masses[0] = masses[-1] = Fraction(1, 2)
        family.append((f"twopoint±{m}", DiscretePMF(-m, tuple(masses))))
    return family


def suite_anticonc(cfg: VerifyConfig) -> SuiteReport:
    checks = []

    worst = math.inf
    counterexample = None
    family = _symmetric_family()
    for n in range(2, 21):
        x = exactmath.pmf_iid_sum(exactmath.pmf_bernoulli(Fraction(1, 2)), n)
        for name, y in family:
            s = exactmath.pmf_convolve(x, y)
            j = -2
            while Fraction(2 * j + 1, 2) < Fraction(n, 2):
                t = Fraction(2 * j + 1, 2)
                lhs, rhs = s.cdf_at(j), x.cdf_at(j)
                margin = float(lhs - rhs)
                if margin < worst:
                    worst = margin
                ok = exactmath.binomial_spread_holds(n, y, t)
                if lhs < rhs or not ok:
                    counterexample = (n, name, t)
                    break
                j += 1
            if counterexample:
                break
        if counterexample:
            break
    checks.append(CheckResult(
        "anticonc/binomial-spread", counterexample is None, worst,
        "n in 2..20, symmetric family, all admissible half-integer t"
        + (f"; counterexample {counterexample}" if counterexample else "")))

    worst = math.inf
    counterexample = None
    t_grid = [Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2),
              Fraction(4), Fraction(8)]
    for levels in (2, 4, 8):
        base = exactmath.pmf_uniform_levels(levels)
        acc = base
        for n in range(2, 65):
            acc = exactmath.pmf_convolve(acc, base)
            for t in t_grid:
                threshold = (Fraction(n, 2) - t + 1) * (levels - 1)
                lhs = acc.cdf_at(math.floor(threshold))
                rhs = 0.5 - 2 * float(t) / math.sqrt(n)
                margin = float(lhs) - rhs
                if margin < worst:
                    worst = margin
                gap = Fraction(1, 2) - lhs
                if gap >= 0 and gap * gap * n >= 4 * t * t:
                    counterexample = (n, levels, t)
                    break
            if counterexample:
                break
        if counterexample:
            break
    checks.append(CheckResult(
        "anticonc/sum-left-tail", counterexample is None, worst,
        "n in 2..64, 2k in (2,4,8), t grid"
        + (f"; counterexample {counterexample}" if counterexample else "")))

    spot = all(exactmath.anti_concentration_holds(n, levels, t)
               for n in (2, 16, 64) for levels in (2, 4, 8) for t in t_grid)
    checks.append(CheckResult("anticonc/operation-spot-check", spot, None,
                              "direct operation calls agree on spot grid"))

    return SuiteReport("anticonc", tuple(checks))


# --- gaussian suite ----------------------------------------------------------

def suite_gaussian(cfg: VerifyConfig) -> SuiteReport:
    grid = gaussian.grid_range(-6.0, 0.5, 0.01)
    k_grid = gaussian.grid_range(0.1, 4.0, 0.1)
    report = gaussian.gaussian_checks(grid, k_grid, precision=1e-12)
    checks = [
        CheckResult("gaussian/ratio-monotone", report.ratio_monotone_ok,
                    report.min_margins["monotone"],
                    "Phi(x-k)/Phi(x) nondecreasing on the grid"),
        CheckResult("gaussian/tail-bound", report.tail_bound_ok,
                    report.min_margins["tail"],
                    "Phi(x) < exp(-x^2/2) for x <= 1/2"),
        CheckResult("gaussian/ratio-bound-at-half", report.ratio_at_half_ok,
                    report.min_margins["ratio_half"],
                    "Phi(1/2-c)/Phi(1/2) < 2 exp(-c^2/2)"),
        CheckResult("gaussian/ratio-bound-general", report.ratio_general_ok,
                    report.min_margins["ratio_general"],
                    "same bound anchored at every grid x <= 1/2"),
    ]
    if report.failures:
        checks = [replace(c, detail=c.detail + f"; failures {report.failures[:3]}")
                  for c in checks]
    return SuiteReport("gaussian", tuple(checks))


# --- theorem suites ----------------------------------------------------------

_THEOREM1_C = (0.5, 0.75, 1.0)


def _theorem1_batch(check_id: str, classifiers, c_values) -> CheckResult:
    worst = math.inf
    for classifier in classifiers:
        report = robustness.theorem1_holds(classifier, c_values)
        for entry in report.entries:
            if entry.margin < worst:
                worst = entry.margin
            if not entry.holds:
                return CheckResult(check_id, False, worst,
                                   f"violated by {classifier.spec} label "
                                   f"{entry.label} at c={entry.c}")
    return CheckResult(check_id, True, worst, f"c grid {tuple(c_values)}")


def suite_theorem1(cfg: VerifyConfig) -> SuiteReport:
    small = SpaceParams(2, 1, 1)
    large = SpaceParams(2, 1, 2)
    checks = [
        _theorem1_batch("theorem1/sum-(2,1,1)", [sum_classifier(small)],
                        _THEOREM1_C),
        _theorem1_batch(
            f"theorem1/balanced-x{cfg.balanced_small}-(2,1,1)",
            (random_classifier(small, 2, "balanced", seed)
             for seed in range(cfg.balanced_small)), _THEOREM1_C),
        _theorem1_batch(
            f"theorem1/balanced-x{cfg.balanced_large}-(2,1,2)",
            (random_classifier(large, 2, "balanced", seed)
             for seed in range(cfg.balanced_large)), _THEOREM1_C),
        _theorem1_batch("theorem1/sum-(2,1,2)", [sum_classifier(large)],
                        _THEOREM1_C),
    ]
    return SuiteReport("theorem1", tuple(checks))


def suite_theorem2(cfg: VerifyConfig) -> SuiteReport:
    checks = []
    params = SpaceParams(16, 1, 1)
    worst = math.inf
    bad = None
    for j in range(1, 5):
        c = Fraction(j, 20)
        size = c * 16 - 2  # sqrt(h) * n = 16 here
        fraction = robustness.sum_exact_fraction_L1(params, size)
        target = 1 - 4 * c
        margin = float(fraction - target)
        worst = min(worst, margin)
        if fraction < target:
            bad = c
            break
    checks.append(CheckResult(
        "theorem2/exact-fractions-(16,1,1)", bad is None, worst,
        "c in {0.05..0.20}, exact tail ratios"
        + (f"; violated at c={bad}" if bad else "")))

    for shape in ((2, 1, 1), (3, 1, 1)):
        params = SpaceParams(*shape)
        classifier = sum_classifier(params)
        mismatch = None
        for d in (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2),
                  Fraction(2), Fraction(3)):
            analytic = robustness.sum_exact_fraction_L1(params, d)
            exhaustive = robustness.class_robust_fraction(
                classifier, 0, PerturbationBudget(1, d)).fraction
            if analytic != exhaustive:
                mismatch = (d, analytic, exhaustive)
                break
        checks.append(CheckResult(
            f"theorem2/analytic-vs-exhaustive-{shape}", mismatch is None, None,
            "exact agreement on d grid"
            + (f"; mismatch {mismatch}" if mismatch else "")))
    return SuiteReport("theorem2", tuple(checks))


def suite_theorem3(cfg: VerifyConfig) -> SuiteReport:
    checks = []
    params = SpaceParams(2, 1, 2)
    classifier = sum_classifier(params)
    radii = (1.5, 2.0)

    # Walk contracts against the independent full-scan oracle, with the
    # length bound compared exactly on integer level differences.
    label_cache: dict = {}
    contract_bad = None
    worst = math.inf
    top = params.max_level
    for index in range(300):
        rng = philox_rng(cfg.seed, index)
        member = robustness.sample_sum_class_member(params, 0, rng)
        for radius in radii:
            stream = philox_rng(cfg.seed ^ 0x5EED, index * len(radii)
                                + radii.index(radius))
            point = perturb.sample_point_in_cell(member, stream)
            oracle_d2, _ = perturb.nearest_cell_exhaustive(classifier, point, 0)
            replay = _ReplayRng(point.coords)
            outcome = perturb.find_perturbation(classifier, member, radius,
                                                rng=replay,
                                                label_cache=label_cache)
            expect_success = oracle_d2 <= radius * radius
            if outcome.succeeded != expect_success:
                contract_bad = (index, radius, "completeness")
                break
            if outcome.succeeded:
                # Exact length check: (||i - i'||_2)^2 <= (radius + 2n sqrt(h)/2^b)^2,
                # both sides rational here (h = 1).
                pow_sum = level_diff_pow_sum(member, outcome.result, 2)
                bound = Fraction(radius) + Fraction(2 * params.n, params.level_count)
                if Fraction(pow_sum, top * top) > bound * bound:
                    contract_bad = (index, radius, "length-bound")
                    break
                worst = min(worst, float(bound) - outcome.l2_moved)
        if contract_bad:
            break
    checks.append(CheckResult(
        "theorem3/walk-contracts-(2,1,2)", contract_bad is None, worst,
        "300 seeded members, radii (1.5, 2.0): success iff a different-class "
        "cell intersects the ball; exact length bound"
        + (f"; failed {contract_bad}" if contract_bad else "")))

    for radius in radii:
        report = perturb.failure_rate(classifier, 0, radius, cfg.samples,
                                      cfg.seed)
        bound = 2.0 * math.exp(-radius * radius / 2) + 0.02
        margin = bound - report.ci95[1]
        checks.append(CheckResult(
            f"theorem3/failure-rate-r{radius}", report.ci95[1] < bound, margin,
            f"{report.failures}/{report.samples} failures, CI "
            f"({report.ci95[0]:.4f}, {report.ci95[1]:.4f}), bound {bound:.4f}"))

    # Measured L2 robustness at size c + 2 n sqrt(h) / 2^b stays below the
    # failure bound (the discretization consequence), checked exhaustively.
    worst = math.inf
    bad = None
    for c in radii:
        size = Fraction(c) + Fraction(2 * params.n, params.level_count)
        budget = PerturbationBudget(2, float(size), size_pow=size * size)
        report = robustness.class_robust_fraction(classifier, 0, budget)
        bound = 2.0 * math.exp(-c * c / 2)
        margin = bound - float(report.fraction)
        worst = min(worst, margin)
        if not float(report.fraction) < bound:
            bad = c
    checks.append(CheckResult(
        "theorem3/l2-robust-fraction-(2,1,2)", bad is None, worst,
        "exhaustive class-0 fraction at size c + 2n sqrt(h)/2^b below "
        "2 exp(-c^2/2)" + (f"; violated at c={bad}" if bad else "")))

    # Higher-p reduction: robust at Lp size d^(2/p) implies robust at L2
    # size d, budgets carried as exact squared sizes.
    bad = None
    for d in (Fraction(3, 2), Fraction(5, 2)):
        l2 = robustness.robust_flags(classifier, PerturbationBudget(
            2, float(d), size_pow=d * d))
        for p in (3, 4):
            lp = robustness.robust_flags(classifier, PerturbationBudget(
                p, float(d) ** (2 / p), size_pow=d * d))
            if not (~lp | l2).all():
                bad = (d, p)
                break
        if bad:
            break
    checks.append(CheckResult(
        "theorem3/higher-p-reduction-(2,1,2)", bad is None, None,
        "robust at Lp size d^(2/p) implies robust at L2 size d, p in (3,4)"
        + (f"; violated at {bad}" if bad else "")))

    return SuiteReport("theorem3", tuple(checks))


class _ReplayRng:
    """Replays fixed cell coordinates into the walk's point sampler."""

    def __init__(self, coords):
        self._values = list(coords)
        self._at = 0

    def uniform(self, lo, hi):
        v = self._values[self._at]
        self._at += 1
        assert lo <= v <= hi
        return v


def classifier_zoo(params: SpaceParams) -> list[ClassifierHandle]:
    """The desk-scale battery: the sum classifier plus seeded random kinds."""
    return [
        sum_classifier(params),
        random_classifier(params, 2, "balanced", 11),
        random_classifier(params, 2, "balanced", 12),
        random_classifier(params, 2, "uniform", 21),
        random_classifier(params, 3, "uniform", 22),
        random_classifier(params, 2, "linear_threshold", 31),
    ]


def suite_reductions(cfg: VerifyConfig) -> SuiteReport:
    checks = []
    for shape in ((2, 1, 1), (2, 1, 2), (3, 1, 1)):
        params = SpaceParams(*shape)
        bad = None
        for classifier in classifier_zoo(params):
            for d in (1, 2, 3):
                if not robustness.reduction_check_L1_to_L0(classifier, d):
                    bad = (classifier.spec, d, "L1->L0")
                    break
                for p in (2, 3):
                    if not robustness.reduction_check_L0_to_Lp(classifier, d, p):
                        bad = (classifier.spec, d, f"L0->L{p}")
                        break
                if bad:
                    break
            if bad:
                break
        checks.append(CheckResult(
            f"reductions/zoo-{shape}", bad is None, None,
            "d in (1,2,3), p in (2,3), exhaustive"
            + (f"; violated {bad}" if bad else "")))
    return SuiteReport("reductions", tuple(checks))


SUITES: dict[str, Callable[[VerifyConfig], SuiteReport]] = {
    "binomial": suite_binomial,
    "hamming": suite_hamming,
    "anticonc": suite_anticonc,
    "gaussian": suite_gaussian,
    "theorem1": suite_theorem1,
    "theorem2": suite_theorem2,
    "theorem3": suite_theorem3,
    "reductions": suite_reductions,
}


def run_suites(names, cfg: VerifyConfig, threads: int = 1) -> list[SuiteReport]:
    """Run the named suites; output order is canonical regardless of
    scheduling."""
    names = sorted(names)
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}")
    if threads > 1 and len(names) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(lambda n: SUITES[n](cfg), names))
    else:
        reports = [SUITES[name](cfg) for name in names]
    return sorted(reports, key=lambda r: r.suite)
