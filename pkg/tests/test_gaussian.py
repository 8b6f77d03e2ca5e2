import mpmath
import pytest

from robustness_envelope import gaussian
from robustness_envelope.errors import PrecisionInsufficient


def test_cdf_reference_points():
    assert abs(gaussian.std_normal_cdf(0) - 0.5) < 1e-25
    assert abs(gaussian.std_normal_cdf(0.5) - mpmath.mpf("0.691462461274013")) < 1e-14
    assert abs(gaussian.std_normal_cdf(-0.5) - mpmath.mpf("0.308537538725987")) < 1e-14


def test_grid_range_endpoints_exact():
    grid = gaussian.grid_range(-6.0, 0.5, 0.01)
    assert grid[0] == -6.0
    assert grid[-1] == 0.5
    assert len(grid) == 651


def test_checks_pass_on_coarse_grid():
    report = gaussian.gaussian_checks(
        gaussian.grid_range(-4.0, 0.5, 0.1),
        gaussian.grid_range(0.5, 3.0, 0.5))
    assert report.all_ok
    assert not report.failures
    assert report.min_margins["monotone"] > 0


def test_tail_bound_examples():
    # Phi(0) = 1/2 < 1 and Phi(0.5) ~ 0.6915 < e^{-0.125} ~ 0.8825
    report = gaussian.gaussian_checks([0.0, 0.5], [1.0])
    assert report.tail_bound_ok
    # c = 1 ratio: 0.4462 < 2 e^{-0.5} ~ 1.2131
    assert report.ratio_at_half_ok


def test_precision_guard_raises_instead_of_guessing():
    # An absurdly loose certified error makes every margin undecidable.
    with pytest.raises(PrecisionInsufficient):
        gaussian.gaussian_checks([-1.0, 0.0], [1.0], precision=0.5)


def test_empty_grid_rejected():
    with pytest.raises(ValueError):
        gaussian.gaussian_checks([], [1.0])
