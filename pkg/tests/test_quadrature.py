"""Quadrature exactness against the closed-form barycentric monomial integrals."""

import numpy as np
import pytest

from decfem.quadrature import simplex_rule

from conftest import exact_monomial_integral, monomials_up_to


CASES = [(dim, degree) for dim in (1, 2, 3) for degree in (1, 2, 3, 4, 5)] + [
    (2, 7),
    (3, 7),
]


@pytest.mark.parametrize("dim,degree", CASES)
def test_weights_sum_to_one(dim, degree):
    rule = simplex_rule(dim, degree)
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert rule.exactness_degree >= degree
    assert np.all(rule.points > -1e-14)
    np.testing.assert_allclose(rule.points.sum(axis=1), 1.0, atol=1e-12)


@pytest.mark.parametrize("dim,degree", CASES)
def test_exact_on_monomials(dim, degree):
    rule = simplex_rule(dim, degree)
    for expo in monomials_up_to(dim, rule.exactness_degree):
        approx = float(
            np.sum(rule.weights * np.prod(rule.points ** np.array(expo), axis=1))
        )
        exact = float(exact_monomial_integral(expo))
        assert approx == pytest.approx(exact, abs=5e-14), (expo, dim, degree)


def test_point_rule():
    rule = simplex_rule(0, 3)
    assert rule.points.tolist() == [[1.0]]
    assert rule.weights.tolist() == [1.0]


def test_rules_are_cached():
    assert simplex_rule(2, 2) is simplex_rule(2, 2)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        simplex_rule(-1, 2)
    with pytest.raises(ValueError):
        simplex_rule(2, -1)
