from fractions import Fraction

import pytest

from robustness_envelope import robustness as rb
from robustness_envelope.classifiers import random_classifier, sum_classifier
from robustness_envelope.errors import BallTooLarge, EmptyClass
from robustness_envelope.image_space import (
    ImageTensor,
    PerturbationBudget,
    SpaceParams,
    enumerate_space,
)

P211 = SpaceParams(2, 1, 1)
P212 = SpaceParams(2, 1, 2)
P311 = SpaceParams(3, 1, 1)

SUM211 = sum_classifier(P211)
ZEROS211 = ImageTensor(P211, (0, 0, 0, 0))


class TestImageIsRobust:
    def test_single_flip_safe(self):
        assert rb.image_is_robust(SUM211, ZEROS211, PerturbationBudget(0, 1))

    def test_two_flips_cross(self):
        assert not rb.image_is_robust(SUM211, ZEROS211, PerturbationBudget(0, 2))

    def test_zero_budget_trivial(self):
        for img in enumerate_space(P211):
            assert rb.image_is_robust(SUM211, img, PerturbationBudget(0, 0))
            assert rb.image_is_robust(SUM211, img, PerturbationBudget(1, 0))

    def test_analytic_agrees_with_scan(self):
        c212 = sum_classifier(P212)
        for img in enumerate_space(P212):
            for p in (1, 2):
                for d in (Fraction(1, 3), Fraction(2, 3), Fraction(1), Fraction(2)):
                    budget = PerturbationBudget(p, d, size_pow=d ** max(p, 1))
                    fast = rb.image_is_robust(c212, img, budget)
                    slow = rb.image_is_robust(c212, img, budget, force_scan=True)
                    assert fast == slow

    def test_ball_cap(self):
        with pytest.raises(BallTooLarge):
            rb.image_is_robust(SUM211, ZEROS211, PerturbationBudget(0, 3),
                               ball_cap=5)


class TestClassRobustFraction:
    def test_exact_fifth(self):
        report = rb.class_robust_fraction(SUM211, 0, PerturbationBudget(0, 1))
        assert report.fraction == Fraction(1, 5)
        assert report.method == "exhaustive" and report.ci95 is None

    def test_zero_budget_everything_robust(self):
        report = rb.class_robust_fraction(SUM211, 1, PerturbationBudget(0, 0))
        assert report.fraction == 1

    def test_monotone_in_budget(self):
        battery = [(SUM211, 0), (sum_classifier(P212), 0),
                   (random_classifier(P212, 2, "balanced", 6), 1)]
        for classifier, label in battery:
            for p in (0, 1, 2):
                fractions = []
                for d in (Fraction(0), Fraction(1, 2), Fraction(1),
                          Fraction(2), Fraction(3)):
                    budget = PerturbationBudget(p, d, size_pow=d ** max(p, 1))
                    fractions.append(rb.class_robust_fraction(
                        classifier, label, budget).fraction)
                assert all(a >= b for a, b in zip(fractions, fractions[1:]))

    def test_empty_class(self):
        from robustness_envelope.classifiers import ClassifierHandle
        constant = ClassifierHandle(params=P211, label_count=2,
                                    decide=lambda image: 0, kind="constant",
                                    spec="constant")
        with pytest.raises(EmptyClass):
            rb.class_robust_fraction(constant, 1, PerturbationBudget(0, 1))

    def test_monte_carlo_matches_exact(self):
        exact = rb.class_robust_fraction(SUM211, 0, PerturbationBudget(0, 1))
        mc = rb.class_robust_fraction(SUM211, 0, PerturbationBudget(0, 1),
                                      method="monte_carlo", samples=4000, seed=5)
        lo, hi = mc.ci95
        assert lo <= float(exact.fraction) <= hi
        assert mc.samples == 4000 and mc.seed == 5

    def test_monte_carlo_deterministic(self):
        a = rb.class_robust_fraction(SUM211, 0, PerturbationBudget(0, 1),
                                     method="monte_carlo", samples=500, seed=9)
        b = rb.class_robust_fraction(SUM211, 0, PerturbationBudget(0, 1),
                                     method="monte_carlo", samples=500, seed=9)
        assert a == b

    def test_wilson_coverage_over_seeds(self):
        # Exhaustive truth on (3,1,1); seeded Monte Carlo intervals should
        # cover it in the vast majority of 100 fixed runs.
        c = sum_classifier(P311)
        exact = float(rb.class_robust_fraction(
            c, 0, PerturbationBudget(0, 1)).fraction)
        covered = 0
        for seed in range(100):
            mc = rb.class_robust_fraction(c, 0, PerturbationBudget(0, 1),
                                          method="monte_carlo", samples=400,
                                          seed=seed)
            lo, hi = mc.ci95
            if lo <= exact <= hi:
                covered += 1
        assert covered >= 93

    def test_conditional_sampler_agrees(self):
        mc = rb.class_robust_fraction(SUM211, 0, PerturbationBudget(0, 1),
                                      method="monte_carlo", samples=4000,
                                      seed=3, sampler="conditional")
        exact = rb.class_robust_fraction(SUM211, 0, PerturbationBudget(0, 1))
        lo, hi = mc.ci95
        assert lo <= float(exact.fraction) <= hi


class TestConditionalSampler:
    def test_members_and_coverage(self):
        from robustness_envelope.image_space import philox_rng
        rng = philox_rng(17)
        seen = set()
        for _ in range(2000):
            member = rb.sample_sum_class_member(P211, 0, rng)
            assert SUM211.decide(member) == 0
            seen.add(member.levels)
        assert len(seen) == 5  # every class member appears


class TestSumExactFractionL1:
    def test_zero_budget(self):
        assert rb.sum_exact_fraction_L1(SpaceParams(16, 1, 1), 0) == 1

    def test_negative_budget_vacuous(self):
        assert rb.sum_exact_fraction_L1(SpaceParams(16, 1, 1), -1.2) == 1

    def test_tail_ratio_form(self):
        from robustness_envelope import exactmath as em
        params = SpaceParams(16, 1, 1)
        # c = 0.2: budget 16c - 2 = 1.2 shifts the cutoff by one level
        value = rb.sum_exact_fraction_L1(params, Fraction(6, 5))
        u = em.tail_table(256, Fraction(1, 2))
        assert value == u[126] / u[127]
        assert value > Fraction(1, 5)

    def test_agrees_with_exhaustive(self):
        for params in (P211, P311):
            c = sum_classifier(params)
            for d in (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)):
                exhaustive = rb.class_robust_fraction(
                    c, 0, PerturbationBudget(1, d)).fraction
                assert rb.sum_exact_fraction_L1(params, d) == exhaustive


class TestReductions:
    def test_l1_to_l0_sum(self):
        for d in (1, 2, 3):
            assert rb.reduction_check_L1_to_L0(SUM211, d)

    def test_l1_to_l0_balanced(self):
        c = random_classifier(P212, 2, "balanced", 4)
        for d in (1, 2):
            assert rb.reduction_check_L1_to_L0(c, d)

    def test_zero_budget_vacuous(self):
        assert rb.reduction_check_L1_to_L0(SUM211, 0)

    def test_l0_to_lp(self):
        assert rb.reduction_check_L0_to_Lp(sum_classifier(P212), 2, 2)
        assert rb.reduction_check_L0_to_Lp(
            random_classifier(P211, 2, "balanced", 8), 1, 3)

    def test_b1_degenerate_divisor(self):
        # (2^b - 1) = 1: both directions collapse to the same budget
        assert rb.reduction_check_L0_to_Lp(SUM211, 1, 2)


class TestTheorem1:
    def test_sum_classifier_holds(self):
        report = rb.theorem1_holds(SUM211, [0.5, 0.75, 1.0])
        assert report.all_hold
        assert all(e.margin > 0 for e in report.entries)
        # only class 0 is interesting here
        assert {e.label for e in report.entries} == {0}

    def test_trivial_bound_case(self):
        report = rb.theorem1_holds(SUM211, [0.4])
        assert report.all_hold and report.entries[0].bound > 1

    def test_budgets_floor_exactly(self):
        report = rb.theorem1_holds(SUM211, [0.5, 0.75, 1.0])
        assert [e.budget for e in report.entries] == [3, 3, 4]

    def test_balanced_batch(self):
        for seed in range(25):
            c = random_classifier(P211, 2, "balanced", seed)
            assert rb.theorem1_holds(c, [0.5, 0.75, 1.0]).all_hold


class TestReportSerialization:
    def test_csv_row_shape(self):
        report = rb.class_robust_fraction(SUM211, 0, PerturbationBudget(0, 1))
        row = report.csv_row()
        assert len(row) == len(rb.CSV_HEADER)
        d = report.to_dict()
        assert d["n"] == 2 and d["p"] == 0 and d["method"] == "exhaustive"
