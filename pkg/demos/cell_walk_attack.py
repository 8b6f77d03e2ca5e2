"""The randomized cell-walk attack, step by step.

Quantized images tile the unit cube with axis-aligned cells.  The attack
jumps to a uniform point of the input's cell, finds the nearest cell of a
different class within an L2 radius (enumerated in distance order with
pruning), and projects onto it.  Two facts make it useful: successes move
the image by at most radius + 2*sqrt(n^2 h)/2^b, and failures are rare
when the class is interesting - the failure probability is below
2 exp(-c^2/2) at radius c.
"""

import math

from robustness_envelope import perturb
from robustness_envelope.classifiers import sum_classifier
from robustness_envelope.image_space import ImageTensor, SpaceParams, flatten

params = SpaceParams(2, 1, 2)
classifier = sum_classifier(params)
image = ImageTensor(params, (1, 0, 2, 0))
print(f"=== cell walk on (2,1,2): image levels {image.levels}, "
      f"label {classifier.decide(image)} ===")
print(f"flattened point: {flatten(image).round(4)}")
print(f"cell diameter: {perturb.cell_diameter(params):.4f}")

for radius in (0.4, 0.8, 1.5):
    outcome = perturb.find_perturbation(classifier, image, radius, seed=11)
    cap = radius + 2 * perturb.cell_diameter(params)
    if outcome.succeeded:
        print(f"  radius {radius}: -> levels {outcome.result.levels} "
              f"(label {classifier.decide(outcome.result)}), moved "
              f"{outcome.l2_moved:.4f} <= {cap:.4f}, "
              f"{outcome.cells_examined} cells examined")
    else:
        print(f"  radius {radius}: no different-class cell in the ball "
              f"({outcome.cells_examined} cells examined)")

print()
print("Failure probability over the low class, against 2 exp(-c^2/2):")
for radius in (1.0, 1.5, 2.0):
    report = perturb.failure_rate(classifier, 0, radius, samples=2000, seed=3)
    bound = 2 * math.exp(-radius * radius / 2)
    print(f"  c={radius}: failures {report.failures}/{report.samples}, "
          f"CI ({report.ci95[0]:.4f}, {report.ci95[1]:.4f}), bound {bound:.4f}")

print()
print("Exact minimal perturbations for comparison (full scan oracle):")
for p in (0, 1, 2):
    minimal = perturb.minimal_perturbation(classifier, image, p)
    greedy = perturb.attack_sum_classifier(image, p)
    print(f"  p={p}: minimal distance {minimal.distance:.4f} "
          f"(witness {minimal.witness.levels}), greedy attack agrees: "
          f"{greedy.exact == minimal.exact}")
