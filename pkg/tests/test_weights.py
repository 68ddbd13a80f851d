import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from admissible import kernels
from admissible.errors import WeightOverflowError
from admissible.groups import Heisenberg, IntegerLattice, identity_ball, lengths_of_keys
from admissible.weights import WeightSpec, ray_limit, verify_weight_axioms, weight_value

Z, Z2, H = IntegerLattice(1), IntegerLattice(2), Heisenberg()

WEIGHTS = [
    WeightSpec.trivial(),
    WeightSpec.polynomial(0.5),
    WeightSpec.polynomial(2),
    WeightSpec.polynomial(5),
    WeightSpec.subexponential(1.0, 0.5),
    WeightSpec.subexponential(0.3, 0.9),
]


def test_weight_value_examples():
    assert weight_value(WeightSpec.polynomial(2), Z, 0, 3) == 16.0
    assert weight_value(WeightSpec.trivial(), Z2, (0, 0), (5, -2)) == 1.0
    assert weight_value(WeightSpec.subexponential(1, 0.5), Z, 0, 4) == pytest.approx(math.e ** 2, rel=1e-15)


@pytest.mark.parametrize("W", WEIGHTS, ids=lambda W: W.label)
@pytest.mark.parametrize("G", [Z, Z2, H], ids=lambda G: G.name)
def test_catalog_weights_satisfy_axioms(W, G):
    rep = verify_weight_axioms(W, G, 6)
    assert rep.passed, rep.violations
    assert rep.max_ratio <= 1 + 1e-12
    assert rep.num_elements == identity_ball(G, 6).size


def test_axiom_witness_is_a_maximiser():
    rep = verify_weight_axioms(WeightSpec.polynomial(2), Z, 4)
    x, y = rep.witness
    W = WeightSpec.polynomial(2)
    direct = weight_value(W, Z, 0, Z.multiply(x, y)) / (weight_value(W, Z, 0, x) * weight_value(W, Z, 0, y))
    assert direct == pytest.approx(rep.max_ratio, rel=1e-14)


def test_kernel_flags_a_non_submultiplicative_profile():
    # exp(n^2) grows too fast to be submultiplicative; the scan must expose it.
    ball = identity_ball(Z2, 4)
    prods = Z2.multiply_keys(ball.keys[:, None], ball.keys[None, :])
    len_xy = lengths_of_keys(Z2, prods, 8)
    ratio, i, j = kernels.submultiplicative_scan(ball.lengths, ball.lengths, len_xy, kernels.SUBEXPONENTIAL, 1.0, 2.0)
    assert ratio > 1.0
    assert len_xy[i, j] == ball.lengths[i] + ball.lengths[j]


@given(st.floats(0, 8), st.integers(0, 50), st.integers(0, 50))
@settings(max_examples=100)
def test_polynomial_weight_monotone_and_submultiplicative_on_lengths(s, m, n):
    W = WeightSpec.polynomial(s)
    assert W.of_length(m + n) <= W.of_length(m) * W.of_length(n) * (1 + 1e-12)
    if m <= n:
        assert W.of_length(m) <= W.of_length(n)


@given(st.integers(-20, 20), st.integers(-20, 20))
@settings(max_examples=50)
def test_weights_are_symmetric(x, y):
    for W in WEIGHTS:
        assert weight_value(W, Z, x, y) == weight_value(W, Z, y, x)


def test_zero_exponent_is_trivial():
    n = np.arange(30)
    np.testing.assert_array_equal(WeightSpec.polynomial(0).of_length(n), WeightSpec.trivial().of_length(n))


def test_overflow_is_an_error():
    with pytest.raises(WeightOverflowError):
        WeightSpec.polynomial(400).of_length(10 ** 6)
    with pytest.raises(OverflowError):
        WeightSpec.subexponential(5.0, 0.9).of_length(10 ** 6)


@pytest.mark.parametrize("kwargs", [
    dict(family="polynomial", s=-1.0),
    dict(family="subexponential", alpha=0.0, beta=0.5),
    dict(family="subexponential", alpha=1.0, beta=1.0),
    dict(family="gaussian"),
])
def test_invalid_parameters_rejected(kwargs):
    with pytest.raises(ValueError):
        WeightSpec(**kwargs)


def test_ray_limit():
    one = WeightSpec.trivial()
    assert ray_limit(WeightSpec.polynomial(2), one) == 1.0
    assert ray_limit(one, one) == 0.5
    assert ray_limit(WeightSpec.polynomial(1), WeightSpec.polynomial(1)) == 0.5
    assert ray_limit(one, WeightSpec.polynomial(1)) == 0.0
    assert ray_limit(WeightSpec.subexponential(1, 0.5), WeightSpec.polynomial(9)) == 1.0
