"""Exact scalar helpers: worked examples plus randomized identities."""

from __future__ import annotations

import random
from fractions import Fraction
from math import comb, factorial

from soscert.exactnum import (
    Q,
    binomial,
    double_factorial,
    falling_factorial,
    parse_rational,
    rat_str,
    rising_factorial,
)


def test_falling_factorial_examples():
    assert falling_factorial(5, 2) == 20
    assert falling_factorial(Q(7, 3), 0) == 1
    assert falling_factorial(Q(-9, 2), 0) == 1
    assert falling_factorial(Q(1, 2), 2) == Q(-1, 4)


def test_rising_factorial_examples():
    assert rising_factorial(Q(3, 2), 2) == Q(15, 4)
    assert rising_factorial(Q(-5, 7), 1) == Q(-5, 7)


def test_rising_factorial_truncation_zero():
    # rising(2-2d, j) = 0 once j >= 2d-1; this cuts the series behind g(d, n)
    for d in range(1, 5):
        for j in range(2 * d - 1, 2 * d + 3):
            assert rising_factorial(2 - 2 * d, j) == 0
        assert rising_factorial(2 - 2 * d, 2 * d - 2) != 0


def test_binomial_examples():
    assert binomial(5, 2) == 10
    assert binomial(Q(5, 2), 6) == Q(-5, 1024)
    assert binomial(Q(-3, 7), 0) == 1


def test_binomial_matches_pascal():
    for n in range(31):
        for k in range(n + 1):
            assert binomial(n, k) == comb(n, k)


def test_double_factorial_examples():
    assert double_factorial(7) == 105
    assert double_factorial(0) == 1
    assert double_factorial(1) == 1
    assert double_factorial(-1) == 1


def test_double_factorial_identities():
    for k in range(16):
        assert double_factorial(2 * k) == 2**k * factorial(k)
        if k >= 1:
            assert double_factorial(2 * k - 1) == factorial(2 * k) // (
                2**k * factorial(k)
            )


def test_falling_rising_reflection():
    rng = random.Random(20240)
    for _ in range(100):
        a = Q(rng.randint(-40, 40), rng.randint(1, 12))
        r = rng.randint(0, 20)
        assert falling_factorial(a, r) == (-1) ** r * rising_factorial(-a, r)


def test_rat_str_round_trip():
    assert rat_str(Q(3)) == "3"
    assert rat_str(Q(-3, 6)) == "-1/2"
    assert rat_str(Q(0)) == "0"
    rng = random.Random(7)
    for _ in range(50):
        x = Q(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
        assert parse_rational(rat_str(x)) == x
    assert parse_rational("22/7") == Q(22, 7)
    assert parse_rational("-5") == -5


def test_backend_agrees_with_fraction():
    # whichever backend is active, values equal stdlib Fractions
    assert Q(1, 3) == Fraction(1, 3)
    assert Q(-2, 4) == Fraction(-1, 2)
    assert Q(10, 5).denominator == 1
