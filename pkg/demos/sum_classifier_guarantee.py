"""The sum-threshold classifier's provable robustness floor.

The classifier labels an image by whether its channel-value sum clears
half the maximum.  Its low class is never more than half the space, and
an exact tail computation shows a (1-4c) fraction of it survives every
L1 perturbation of size c*sqrt(h)*n - 2.  This script computes those
fractions exactly (rational arithmetic end to end) and confirms them
against brute force where the space is small enough to enumerate.
"""

from fractions import Fraction

from robustness_envelope import robustness as rb
from robustness_envelope.classifiers import class_sizes, sum_classifier
from robustness_envelope.image_space import (
    PerturbationBudget,
    SpaceParams,
    enumerate_space,
)

params = SpaceParams(16, 1, 1)
print(f"=== sum classifier on (16,1,1): {params.total_images} images ===")
for summary in class_sizes(sum_classifier(params), "analytic"):
    share = Fraction(summary.count, params.total_images)
    print(f"  class {summary.label}: {summary.count} images "
          f"({float(share):.4f} of space), interesting={summary.interesting}")

print()
print("Exact robust fraction of class 0 vs the 1-4c guarantee:")
print(f"{'c':>6} {'L1 budget':>10} {'exact fraction':>16} {'1-4c':>7}")
for j in range(1, 5):
    c = Fraction(j, 20)
    budget = c * 16 - 2
    fraction = rb.sum_exact_fraction_L1(params, budget)
    print(f"{float(c):>6.2f} {float(budget):>10.2f} "
          f"{float(fraction):>16.6f} {float(1 - 4 * c):>7.2f}")

print()
print("Brute force agrees exactly on enumerable spaces:")
for shape in ((2, 1, 1), (3, 1, 1)):
    space = SpaceParams(*shape)
    classifier = sum_classifier(space)
    for d in (Fraction(1), Fraction(2)):
        analytic = rb.sum_exact_fraction_L1(space, d)
        exhaustive = rb.class_robust_fraction(
            classifier, 0, PerturbationBudget(1, d)).fraction
        print(f"  {shape} d={d}: analytic {analytic} == exhaustive "
              f"{exhaustive}: {analytic == exhaustive}")

print()
print("Every class-0 image of (2,1,1), with its robustness at L1 size 1:")
small = SpaceParams(2, 1, 1)
classifier = sum_classifier(small)
for image in enumerate_space(small):
    if classifier.decide(image) == 0:
        robust = rb.image_is_robust(classifier, image, PerturbationBudget(1, 1))
        print(f"  levels {image.levels}  sum {image.level_sum()}  "
              f"robust={robust}")
