import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from robustness_envelope import exactmath as em
from robustness_envelope.errors import (
    AsymmetricY,
    NoSolution,
    PreconditionViolated,
    SupportCapExceeded,
    ZeroDenominator,
)

HALF = Fraction(1, 2)


class TestBinom:
    def test_small_direct(self):
        assert em.binom(4, 2) == 6

    def test_out_of_range_is_zero(self):
        assert em.binom(5, 7) == 0
        assert em.binom(5, -1) == 0

    def test_factorial_formula(self):
        assert em.binom(10, 3) == 120

    def test_rejects_nonpositive_n(self):
        with pytest.raises(ValueError):
            em.binom(0, 0)

    def test_pascal_identity_exhaustive(self):
        for n in range(2, 80):
            for k in range(1, n):
                assert em.binom(n, k) == em.binom(n - 1, k - 1) + em.binom(n - 1, k)

    def test_row_sums(self):
        for n in range(1, 80):
            assert sum(em.binom(n, k) for k in range(n + 1)) == 1 << n


class TestBinomialTail:
    def test_enumerated_coin_pair(self):
        # 4 equiprobable outcomes; 3 have at most one head.
        assert em.binomial_tail(em.TailQuery(2, 1, HALF)) == Fraction(3, 4)

    def test_negative_cutoff(self):
        assert em.binomial_tail(em.TailQuery(5, -1, Fraction(1, 3))) == 0

    def test_full_support(self):
        assert em.binomial_tail(em.TailQuery(5, 5, HALF)) == 1

    def test_monotone_in_k(self):
        q = Fraction(2, 7)
        values = [em.binomial_tail(em.TailQuery(9, k, q)) for k in range(-1, 11)]
        assert all(a <= b for a, b in zip(values, values[1:]))

    def test_rejects_degenerate_p(self):
        with pytest.raises(ValueError):
            em.TailQuery(4, 2, Fraction(1))

    @given(st.integers(1, 40), st.integers(1, 9))
    @settings(max_examples=60, deadline=None)
    def test_matches_bernoulli_convolution(self, n, tens):
        p = Fraction(tens, 10)
        total = em.pmf_iid_sum(em.pmf_bernoulli(p), n)
        for k in (0, n // 3, n // 2, n - 1):
            assert total.cdf_at(k) == em.binomial_tail(em.TailQuery(n, k, p))


class TestModeBound:
    def test_tiny_cases(self):
        assert em.mode_bound_holds(1)
        assert em.mode_bound_holds(4)  # 144 < 256
        assert em.mode_bound_holds(9)  # 142884 < 262144

    def test_sweep_matches_direct(self):
        violation, _ = em.mode_bound_sweep(300)
        assert violation is None
        assert all(em.mode_bound_holds(n) for n in (1, 2, 3, 17, 100, 299))


class TestTailRatio:
    def test_exact_value(self):
        assert em.tail_ratio(16, 3, HALF, 7) == Fraction(2517, 26333)

    def test_zero_numerator(self):
        assert em.tail_ratio(8, 9, HALF, 8) == 0

    def test_full_tail_denominator(self):
        assert em.tail_ratio(4, 1, HALF, 4) == Fraction(15, 16)

    def test_monotone_small_sweep(self):
        violations, min_step = em.tail_ratio_monotone_violations(
            12, 3, [Fraction(j, 10) for j in range(1, 10)])
        assert violations == []
        assert min_step >= 0

    def test_zero_denominator_guard(self):
        with pytest.raises(ZeroDenominator):
            em.tail_ratio(8, 2, HALF, -1)


class TestHoeffdingRatio:
    def test_known_true_case(self):
        assert em.hoeffding_ratio_holds(16, 3, HALF, 7)

    def test_k1_bound_exceeds_one(self):
        assert em.hoeffding_ratio_holds(16, 1, HALF, 7)

    def test_precondition_enforced(self):
        # U_{16,1/2}(8) > 1/2
        with pytest.raises(PreconditionViolated):
            em.hoeffding_ratio_holds(16, 2, HALF, 8)

    def test_small_admissible_sweep(self):
        violations, margin = em.hoeffding_sweep_violations(
            24, [Fraction(1, 4), HALF, Fraction(3, 4)])
        assert violations == []
        assert margin > 0


class TestSolveP:
    def test_recovers_half(self):
        p = em.solve_p_for_tail(10, 5, Fraction(638, 1024))
        assert em.binomial_tail(em.TailQuery(10, 5, p)) == Fraction(638, 1024)

    def test_round_trip_within_tol(self):
        tol = Fraction(1, 10 ** 9)
        p = em.solve_p_for_tail(6, 3, HALF, tol)
        assert abs(em.binomial_tail(em.TailQuery(6, 3, p)) - HALF) <= tol

    def test_target_outside_open_interval(self):
        with pytest.raises(NoSolution):
            em.solve_p_for_tail(5, 2, Fraction(1))

    def test_small_target_gives_large_p(self):
        # (1-p)^10 = 1e-6 puts p near 1 - 10^(-0.6)
        p = em.solve_p_for_tail(10, 0, Fraction(1, 10 ** 6))
        assert Fraction(7, 10) < p < Fraction(4, 5)


class TestHarperRhs:
    def test_degenerate_k0(self):
        assert em.harper_rhs(4, 0, Fraction(1, 3)) == Fraction(1, 3)

    def test_minimum_not_above_first_shell(self):
        # The r = 0 shell for a singleton fraction solves exactly at p = 1/2.
        rhs = em.harper_rhs(4, 1, Fraction(1, 16))
        assert rhs <= Fraction(5, 16)
        assert rhs > Fraction(1, 4)

    def test_large_fraction_bounded_by_one(self):
        assert em.harper_rhs(4, 2, HALF) <= 1


class TestDiscretePMF:
    def test_uniform_levels(self):
        assert em.pmf_uniform_levels(2).masses == (HALF, HALF)
        assert em.pmf_uniform_levels(4).masses == (Fraction(1, 4),) * 4
        assert em.pmf_uniform_levels(1).masses == (Fraction(1),)

    def test_masses_must_sum_to_one(self):
        with pytest.raises(ValueError):
            em.DiscretePMF(0, (HALF, Fraction(1, 3)))

    def test_iid_sum_fair_coin(self):
        total = em.pmf_iid_sum(em.pmf_bernoulli(HALF), 2)
        assert total.masses == (Fraction(1, 4), HALF, Fraction(1, 4))

    def test_iid_sum_point_mass(self):
        total = em.pmf_iid_sum(em.pmf_point(3), 5)
        assert total.offset == 15 and total.masses == (Fraction(1),)

    def test_iid_sum_large_matches_tail(self):
        total = em.pmf_iid_sum(em.pmf_bernoulli(HALF), 256)
        assert total.cdf_at(128) == em.binomial_tail(
            em.TailQuery(256, 128, HALF))

    def test_support_cap(self):
        with pytest.raises(SupportCapExceeded):
            em.pmf_iid_sum(em.pmf_uniform_levels(3), 10, cap=8)

    @given(st.integers(1, 6), st.integers(1, 8))
    @settings(max_examples=40, deadline=None)
    def test_iid_sum_mass_and_width(self, levels, count):
        base = em.pmf_uniform_levels(levels)
        total = em.pmf_iid_sum(base, count)
        assert sum(total.masses) == 1
        assert len(total.masses) == count * (levels - 1) + 1

    @given(st.integers(1, 5), st.integers(1, 5))
    @settings(max_examples=30, deadline=None)
    def test_convolution_commutes(self, a_levels, b_levels):
        a = em.pmf_uniform_levels(a_levels)
        b = em.pmf_uniform_levels(b_levels)
        assert em.pmf_convolve(a, b) == em.pmf_convolve(b, a)


class TestBinomialSpread:
    def test_degenerate_y_equality(self):
        # t at the mean: both sides are exactly 1/2
        assert em.binomial_spread_holds(3, em.pmf_point(0), Fraction(3, 2))

    def test_rejects_t_above_mean(self):
        with pytest.raises(ValueError):
            em.binomial_spread_holds(3, em.pmf_point(0), Fraction(5, 2))

    def test_uniform_y_exact_values(self):
        y = em.pmf_uniform_symmetric(1)
        # Pr[X+Y <= 1.5] = 17/48 vs Pr[X < 1.5] = 5/16
        x = em.pmf_iid_sum(em.pmf_bernoulli(HALF), 4)
        s = em.pmf_convolve(x, y)
        assert s.cdf_at(1) == Fraction(17, 48)
        assert x.cdf_at(1) == Fraction(5, 16)
        assert em.binomial_spread_holds(4, y, Fraction(3, 2))

    def test_asymmetric_rejected(self):
        skew = em.DiscretePMF(-1, (Fraction(1, 4), Fraction(1, 4), HALF))
        with pytest.raises(AsymmetricY):
            em.binomial_spread_holds(4, skew, Fraction(3, 2))

    def test_requires_half_integer_t(self):
        with pytest.raises(ValueError):
            em.binomial_spread_holds(4, em.pmf_point(0), Fraction(1))


class TestAntiConcentration:
    def test_binary_case_exact(self):
        # Pr[B(4,1/2) <= 2] = 11/16 > -1/2
        assert em.anti_concentration_holds(4, 2, 1)

    def test_four_level_case(self):
        assert em.anti_concentration_holds(9, 4, Fraction(1, 2))

    def test_trivial_when_t_large(self):
        # right side at most -1/2 once t >= sqrt(n)/2
        assert em.anti_concentration_holds(16, 2, 3)

    def test_rejects_odd_levels(self):
        with pytest.raises(ValueError):
            em.anti_concentration_holds(4, 3, 1)


class TestCertifiedCompare:
    def test_exact_when_exponent_zero(self):
        assert em.compare_scaled_exp(Fraction(2), Fraction(2), Fraction(0)) == 0
        assert em.compare_scaled_exp(Fraction(3), Fraction(2), Fraction(0)) == 1

    def test_orders_transcendental_side(self):
        # e^1 = 2.718...: 2.7 < e < 2.8
        assert em.compare_scaled_exp(Fraction(27, 10), Fraction(1), Fraction(1)) == -1
        assert em.compare_scaled_exp(Fraction(28, 10), Fraction(1), Fraction(1)) == 1


class TestFloorPlusCSqrt:
    def test_matches_float_on_safe_cases(self):
        for c in (0.25, 0.5, 0.75, 1.0, 1.5, 2.0):
            for m in (4, 6, 16, 81):
                assert em.floor_plus_c_sqrt(c, m, add=2) == int(
                    math.floor(c * math.sqrt(m) + 2))

    def test_exact_on_boundary(self):
        # 1.0 * sqrt(4) + 2 = 4 exactly
        assert em.floor_plus_c_sqrt(1.0, 4, add=2) == 4
        assert em.floor_plus_c_sqrt(Fraction(3, 2), 4, add=2) == 5
