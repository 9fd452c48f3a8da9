import math

import pytest

from agglolab import Problem, bound_formula, bound_value


def test_discrete_radius_at_k_values():
    # 20d + 2 log2(k) + 2
    assert bound_value(Problem.DISCRETE_RADIUS, 4, 1) == 26.0
    assert bound_value(Problem.DISCRETE_RADIUS, 1, 1) == 22.0
    assert bound_value(Problem.DISCRETE_RADIUS, 8, 2) == 48.0


def test_discrete_radius_two_k_values():
    assert bound_value(Problem.DISCRETE_RADIUS, 4, 2, "two-k") == 40.0
    assert bound_value(Problem.DISCRETE_RADIUS, 99, 1, "two-k") == 20.0


def test_radius_two_k_value():
    assert bound_value(Problem.RADIUS, 3, 1, "two-k") == pytest.approx(
        24.0 * math.exp(24.0), rel=1e-12
    )
    assert bound_value(Problem.RADIUS, 3, 1, "two-k") == pytest.approx(6.36e11, rel=1e-2)


def test_radius_at_k_composition():
    base = 24.0 * math.exp(24.0)
    expected = 4.0 * (math.log2(4) + 2.0) * (base + 1.0) + 1.0
    assert bound_value(Problem.RADIUS, 4, 1) == expected


def test_diameter_bounds_small_dimension():
    sigma = 42.0
    base = 2.0 ** (3 * sigma) * 34.0
    assert bound_value(Problem.DIAMETER, 2, 1, "two-k") == base
    expected = 4.0 * (1.0 + 2.0) * (base + 2.0) + 2.0
    assert bound_value(Problem.DIAMETER, 2, 1) == expected


def test_diameter_bound_overflows_to_astronomical():
    # 2^(3 * (42 d)^d) exceeds double range from d = 2 on
    for d in (2, 3):
        formula = bound_formula(Problem.DIAMETER, 4, d)
        assert math.isinf(formula.value)
        assert formula.astronomical
        assert formula.render() == "astronomical"
    assert not bound_formula(Problem.DIAMETER, 4, 1).astronomical


def test_bound_monotone_in_k():
    vals = [bound_value(Problem.DISCRETE_RADIUS, k, 2) for k in (1, 2, 4, 8, 16)]
    assert vals == sorted(vals)


def test_bound_validation():
    with pytest.raises(ValueError):
        bound_value(Problem.DIAMETER, 0, 1)
    with pytest.raises(ValueError):
        bound_value(Problem.DIAMETER, 1, 0)
    with pytest.raises(ValueError):
        bound_value(Problem.DIAMETER, 1, 1, "mid")
