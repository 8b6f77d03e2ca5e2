"""How small is "small"?  Perturbation budgets vs typical distances.

Two uniform random images sit far apart: the expected p-distance grows
like n^(2/max(1,p)).  The perturbation sizes that flip classes grow only
like n^(1/max(1,p)), so the ratio vanishes as images get larger.  This
script measures average distances by Monte Carlo, checks the exact lower
bound, and prints the shrinking ratio.
"""

import numpy as np

from robustness_envelope import bounds

N, H, B = 8, 1, 2
PAIRS = 100_000
rng = np.random.default_rng(20240501)
dim, top = N * N * H, (1 << B) - 1

x = rng.integers(0, 1 << B, size=(PAIRS, dim))
y = rng.integers(0, 1 << B, size=(PAIRS, dim))
diff = np.abs(x - y)
measured = {
    0: float((diff != 0).sum(axis=1).mean()),
    1: float((diff / top).sum(axis=1).mean()),
    2: float(np.sqrt(((diff / top) ** 2).sum(axis=1)).mean()),
}

print(f"=== average distances between uniform pairs in ({N},{H},{B}), "
      f"{PAIRS} pairs ===")
for p, mean in measured.items():
    lower = bounds.avg_distance_lower_bound(N, H, B, p)
    constants = bounds.avg_distance_constant(H, B, p)
    print(f"  p={p}: measured mean {mean:>8.3f}  >=  bound {lower:>7.3f} "
          f"(single-pair moment {constants.k_bp})")

print()
print("Upper-bound perturbation size vs typical distance, growing n:")
print(f"{'n':>6} {'budget(p=1)':>12} {'typical(p=1)':>13} {'ratio':>9}")
for n in (8, 64, 512, 4096):
    budget = bounds.upper_bound_size(bounds.BoundQuery(r=0.5, p=1, n=n, h=H, b=B))
    typical = bounds.avg_distance_lower_bound(n, H, B, 1)
    print(f"{n:>6} {budget:>12.1f} {typical:>13.1f} {budget / typical:>9.4f}")

print()
print("The same collapse in the 2-norm (budget ~ constant for large b):")
for n in (8, 64, 512, 4096):
    budget = bounds.upper_bound_size(bounds.BoundQuery(r=0.5, p=2, n=n, h=H, b=8))
    typical = bounds.avg_distance_lower_bound(n, H, 8, 2)
    print(f"{n:>6} {budget:>12.3f} {typical:>13.1f} {budget / typical:>9.6f}")
