from fractions import Fraction

import pytest
import sympy

from app.core.exceptions import DivisionByZero, InvalidQValue, NotDivisible
from app.services.laurent import Q, Q_INV, Q_SYMBOL, ArithOp, LaurentPoly, QValue, lp_arith, lp_div_exact, lp_eval


def test_product_of_differences():
    product = (Q ** 2 - Q ** -2) * (Q - Q_INV)
    assert product == LaurentPoly({3: 1, 1: -1, -1: -1, -3: 1})
    assert str(product) == "q^3 - q - q^-1 + q^-3"


def test_zero_coefficients_are_dropped():
    assert LaurentPoly({2: 0, 0: 3}) == 3
    assert not (Q - Q)
    assert str(LaurentPoly.zero()) == "0"


def test_exact_division():
    assert ((Q ** 2 - Q ** -2) * (Q - Q_INV)).div_exact(Q - Q_INV) == Q ** 2 - Q ** -2
    assert (Q ** 4 - 1).div_exact(Q ** 2 + 1) == Q ** 2 - 1
    assert LaurentPoly.zero().div_exact(Q + 1) == 0


def test_division_without_quotient():
    with pytest.raises(NotDivisible):
        (Q + 1).div_exact(Q - Q_INV)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        Q.div_exact(LaurentPoly.zero())


def test_negative_power_of_monomial_only():
    assert (2 * Q ** 3) ** -1 == LaurentPoly({-3: Fraction(1, 2)})
    with pytest.raises(NotDivisible):
        (Q + 1) ** -1


def test_evaluate():
    p = Q ** 2 + 1 + Q_INV + Q ** -3
    assert p.evaluate(QValue(Fraction(2))) == Fraction(45, 8)
    assert p.evaluate(Fraction(-2)) == Fraction(35, 8)
    assert lp_eval(p, QValue(Fraction(2))) == Fraction(45, 8)


def test_q_value_restrictions():
    for bad in ("0", "1", "-1", "abc"):
        with pytest.raises(InvalidQValue):
            QValue.parse(bad)
    assert QValue.parse(" 3/2 ").value == Fraction(3, 2)


def test_scalar_operations_from_the_left():
    assert 1 - Q == LaurentPoly({0: 1, 1: -1})
    assert 3 * Q == LaurentPoly({1: 3})
    assert Fraction(1, 2) + Q_INV == LaurentPoly({0: Fraction(1, 2), -1: 1})


def test_text_forms():
    p = Q ** 3 + Q - 2 * Q ** -1
    assert str(p) == "q^3 + q - 2*q^-1"
    assert p.compact() == "q^3+q-2*q^-1"
    assert str(-Q) == "-q"


def test_sympy_bridge():
    p = Q ** 2 - Fraction(3, 4) * Q ** -3
    assert LaurentPoly.from_sympy(p.to_sympy()) == p
    assert LaurentPoly.from_sympy((Q_SYMBOL ** 4 - 1) / (Q_SYMBOL ** 2 * (Q_SYMBOL ** 2 + 1))) == 1 - Q ** -2
    with pytest.raises(NotDivisible):
        LaurentPoly.from_sympy(1 / (Q_SYMBOL + 1))
    assert sympy.expand(p.to_sympy() - (Q_SYMBOL ** 2 - sympy.Rational(3, 4) / Q_SYMBOL ** 3)) == 0


def test_arith_helpers():
    a, b = Q + 1, Q - 1
    assert lp_arith(a, b, ArithOp.MUL) == Q ** 2 - 1
    assert lp_arith(a, b, "sub") == 2
    assert lp_div_exact(Q ** 2 - 1, a) == b


def test_equal_polynomials_hash_alike():
    assert hash(Q + 1) == hash(1 + Q)
    assert hash(LaurentPoly.constant(5)) == hash(5)


def _random_poly(rng, spread=4, terms=4):
    return LaurentPoly({
        rng.randint(-spread, spread): Fraction(rng.randint(-6, 6), rng.randint(1, 5))
        for _ in range(rng.randint(0, terms))
    })


def test_ring_axioms_on_random_triples(rng):
    for _ in range(200):
        a, b, c = (_random_poly(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a - a == LaurentPoly.zero()


def test_exact_division_inverts_multiplication(rng):
    for _ in range(200):
        a = _random_poly(rng)
        b = _random_poly(rng)
        if not b:
            b = Q ** rng.randint(-3, 3)
        assert (a * b).div_exact(b) == a
        assert lp_div_exact(a * b, b) == a


def test_evaluation_is_a_ring_homomorphism(rng):
    points = [QValue(Fraction(2)), QValue(Fraction(-3, 2)), QValue(Fraction(5, 7))]
    for _ in range(200):
        a, b = _random_poly(rng), _random_poly(rng)
        at = rng.choice(points)
        assert (a * b).evaluate(at) == a.evaluate(at) * b.evaluate(at)
        assert (a + b).evaluate(at) == a.evaluate(at) + b.evaluate(at)
        assert lp_eval(a - b, at) == lp_eval(a, at) - lp_eval(b, at)
