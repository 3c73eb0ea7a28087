from fractions import Fraction

import pytest

from tmt.laurent import N, ONE, CouplingSeries, LaurentPolynomial, monomial_name


def test_arithmetic():
    x = LaurentPolynomial({1: 1, -1: 1})  # N + 1/N
    assert x + x == LaurentPolynomial({1: 2, -1: 2})
    assert x - x == LaurentPolynomial()
    assert x * x == LaurentPolynomial({2: 1, 0: 2, -2: 1})
    assert x.shift(3) == LaurentPolynomial({4: 1, 2: 1})
    assert (x * 0) == LaurentPolynomial()


def test_evaluate_exact():
    x = LaurentPolynomial({1: 1, -1: 1})
    assert x.evaluate(2) == Fraction(5, 2)
    assert x.evaluate(3) == Fraction(10, 3)


def test_leading_part():
    x = LaurentPolynomial({4: Fraction(2), 2: 1})
    assert x.leading_part() == LaurentPolynomial({4: 2})
    assert x.max_power() == 4
    assert LaurentPolynomial().leading_part() == LaurentPolynomial()


def test_json_roundtrip():
    x = LaurentPolynomial({2: Fraction(1, 3), -1: -2})
    assert LaurentPolynomial.from_json(x.to_json()) == x


def test_monomial_name():
    assert monomial_name(("a", "b"), (0, 0)) == "1"
    assert monomial_name(("a", "b"), (2, 1)) == "a^2*b"


def test_coupling_series_roundtrip():
    s = CouplingSeries(("g",))
    s.add_term((1,), N)
    s.add_term((1,), ONE)
    assert s.coefficient((1,)) == LaurentPolynomial({1: 1, 0: 1})
    s.add_term((1,), LaurentPolynomial({1: -1, 0: -1}))
    assert (1,) not in s.terms
    s.add_term((2,), N.shift(1))
    rows = s.to_csv_rows()
    assert rows == [("g^2", 2, "1")]
    assert s.to_json() == {"g^2": {"2": "1"}}
