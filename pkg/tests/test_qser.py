"""Exact q-series arithmetic: oracles first, then frozen values."""
import random
from fractions import Fraction as F

import pytest

from qblocks import qser
from qblocks.errors import QBlocksError


def series(terms, trunc, denom=1, eta=0):
    return qser.QSeries(denom, dict(terms), F(trunc), eta)


def test_monomial_examples():
    assert qser.monomial(F(1, 8), 1, 10).items() == [(F(1, 8), 1)]
    assert qser.monomial(11, 1, 10).is_zero()
    assert qser.monomial(0, -3, 10).items() == [(F(0), -3)]


def test_add_cancels():
    a = qser.monomial(F(1, 8), 1, 10)
    assert qser.add(a, qser.scale(a, -1)).is_zero()


def test_mul_rebases_denominator():
    out = qser.mul(qser.monomial(F(1, 2), 1, 10), qser.monomial(F(1, 3), 1, 10))
    assert out.items() == [(F(5, 6), 1)]
    assert out.denom == 6


def test_mul_truncates_high_terms():
    # (1 - q)(1 + q + q^2) = 1 - q^3; the cube is beyond the bound.
    a = series({0: 1, 1: -1}, 2)
    b = series({0: 1, 1: 1, 2: 1}, 2)
    assert qser.mul(a, b) == series({0: 1}, 2)


def test_scale_rejects_non_integral():
    a = series({0: 3, 1: 6}, 5)
    assert qser.scale(a, F(1, 3)).items() == [(F(0), 1), (F(1), 2)]
    with pytest.raises(QBlocksError):
        qser.scale(a, F(1, 2))


def test_add_requires_matching_eta():
    with pytest.raises(QBlocksError):
        qser.add(series({0: 1}, 5, eta=-1), series({0: 1}, 5))


def test_euler_product_against_literal_product():
    # independent oracle: multiply the factors (1 - q^n) one by one
    trunc = F(30)
    literal = qser.monomial(0, 1, trunc)
    for n in range(1, 31):
        literal = qser.mul(literal, series({0: 1, n: -1}, trunc))
    assert qser.euler_product(trunc) == literal


def test_euler_product_frozen_values():
    assert qser.euler_product(8).items() == [
        (F(0), 1), (F(1), -1), (F(2), -1), (F(5), 1), (F(7), 1)]
    assert qser.euler_product(0).items() == [(F(0), 1)]
    assert qser.euler_product(15).coefficient(12) == -1  # pentagonal pair k = -3


def test_false_theta_frozen():
    assert qser.false_theta(2, 1, 10).items() == [
        (F(1, 8), 1), (F(9, 8), -1), (F(25, 8), 1), (F(49, 8), -1)]
    assert qser.false_theta(3, 1, 11).items() == [
        (F(1, 12), 1), (F(25, 12), -1), (F(49, 12), 1), (F(121, 12), -1)]


def test_false_theta_degenerate_offsets():
    for p in (2, 3, 5):
        assert qser.false_theta(p, p, 40).is_zero()
        # offset 0 telescopes to the constant term
        assert qser.false_theta(p, 0, 40).items() == [(F(0), 1)]


def test_false_theta_antisymmetry():
    for p in (2, 3, 5, 7):
        for a in range(0, 2 * p + 1):
            total = qser.add(qser.false_theta(p, a, 25),
                             qser.false_theta(p, 2 * p - a, 25))
            assert total.is_zero()


def _random_series(rng, trunc):
    denom = rng.choice([1, 2, 3, 4, 6])
    terms = {rng.randrange(0, int(trunc) * denom): rng.randrange(-4, 5)
             for _ in range(rng.randrange(0, 6))}
    return qser.QSeries(denom, terms, F(trunc))


def test_ring_axioms_on_random_series():
    rng = random.Random(20240817)
    for _ in range(60):
        a, b, c = (_random_series(rng, 12) for _ in range(3))
        assert qser.add(a, b) == qser.add(b, a)
        assert qser.mul(a, b) == qser.mul(b, a)
        assert qser.add(qser.add(a, b), c) == qser.add(a, qser.add(b, c))
        assert qser.mul(qser.mul(a, b), c) == qser.mul(a, qser.mul(b, c))
        lhs = qser.mul(a, qser.add(b, c))
        rhs = qser.add(qser.mul(a, b), qser.mul(a, c))
        assert lhs == rhs


def test_equality_on_truncation_overlap():
    a = series({0: 1, 1: 2}, 5)
    b = series({0: 1, 1: 2, 7: 9}, 9)
    assert a == b  # overlap window is 5; the q^7 term lies beyond it
    assert series({0: 1}, 5) != series({0: 2}, 5)


def test_equality_rebases_eta_power():
    raw = qser.monomial(F(1, 8), 1, 4, eta_power=-1)
    expanded = qser.expand_eta(raw)
    assert expanded.eta_power == 0
    assert raw == expanded  # rebased before comparison


def test_eta_expansion_inverse_pair():
    one = qser.mul(qser.eta_power_series(1, 10), qser.eta_power_series(-1, 10))
    assert one == qser.monomial(0, 1, 9)


def test_eta_power_series_frozen():
    eta = qser.eta_power_series(1, 5)
    assert eta.items() == [(F(1, 24), 1), (F(25, 24), -1), (F(49, 24), -1)]
    inv = qser.eta_power_series(-1, 2)
    # q^(-1/24) (1 + q + 2q^2 + ...)
    assert inv.items()[:3] == [(F(-1, 24), 1), (F(23, 24), 1), (F(47, 24), 2)]


def test_json_roundtrip():
    a = series({1: 3, 9: -2}, F(11, 2), denom=8, eta=-1)
    assert qser.QSeries.from_json(a.to_json()) == a
    data = a.to_json_dict()
    assert data["terms"] == [[1, 3], [9, -2]]
    assert data["trunc"] == "11/2"


def test_csv_format():
    a = series({1: 1, 9: -1}, 4, denom=8)
    assert a.to_csv() == "exponent,coefficient\n1/8,1\n9/8,-1\n"
