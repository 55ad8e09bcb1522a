import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tcarith.exact import (
    binomial, factorial, format_rat, iter_prod, iter_sum, multinomial, parse_int, parse_rat,
    triangular_products,
)
from oracles import poly_power_coeffs

rats = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 10 ** 6)


def fold_sum(xs):
    acc = Fraction(0)
    for x in xs:
        acc += x
    return acc


def fold_prod(xs):
    acc = Fraction(1)
    for x in xs:
        acc *= x
    return acc


def test_iter_sum_examples():
    assert iter_sum([]) == 0
    assert iter_sum([Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)]) == 1


def test_iter_prod_examples():
    assert iter_prod([]) == 1
    assert iter_prod([2, 3, 5]) == 30


def test_iter_sum_shuffles():
    rng = random.Random(11)
    xs = [Fraction(rng.randint(-999, 999), rng.randint(1, 99)) for _ in range(50)]
    want = fold_sum(xs)
    for _ in range(10):
        rng.shuffle(xs)
        assert iter_sum(xs) == want


def test_iter_prod_fold():
    rng = random.Random(12)
    xs = [Fraction(rng.randint(-99, 99) or 1, rng.randint(1, 99)) for _ in range(64)]
    assert iter_prod(xs) == fold_prod(xs)


def test_all_permutations_short_lists():
    rng = random.Random(13)
    xs = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(7)]
    s, p = iter_sum(xs), iter_prod(xs)
    for perm in permutations(xs):
        assert iter_sum(perm) == s
        assert iter_prod(perm) == p


@given(st.lists(rats, max_size=100), st.randoms(use_true_random=False))
@settings(max_examples=60)
def test_permutation_invariance(xs, rnd):
    ys = list(xs)
    rnd.shuffle(ys)
    assert iter_sum(ys) == iter_sum(xs)
    assert iter_prod(ys) == iter_prod(xs)


@given(rats, st.lists(rats, max_size=20))
def test_distributivity(c, xs):
    assert c * iter_sum(xs) == iter_sum(c * x for x in xs)


@given(st.lists(rats, max_size=8), st.lists(rats, max_size=8))
def test_product_of_sums(xs, ys):
    assert iter_sum(xs) * iter_sum(ys) == iter_sum(x * y for x in xs for y in ys)


@given(st.lists(st.lists(rats, max_size=5), max_size=5))
def test_double_counting(rows):
    flat = [x for row in rows for x in row]
    assert iter_sum(iter_sum(r) for r in rows) == iter_sum(flat)


def test_triangular_products_examples():
    y = triangular_products([2, 3, 4], 3)
    assert (y[0][3], y[1][3], y[0][1]) == (24, 12, 2)
    assert triangular_products([], 0) == []
    with pytest.raises(IndexError):
        triangular_products([1, 2], 3)


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=10))
def test_triangular_products_compose(xs):
    n = len(xs)
    y = triangular_products(xs, n)
    for i in range(n + 1):
        assert y[i][i] == 1
        for j in range(i, n + 1):
            assert y[i][j] == fold_prod(xs[i:j])
            for k in range(j, n + 1):
                assert y[i][j] * y[j][k] == y[i][k]


def test_factorial():
    assert factorial(0) == 1
    assert factorial(5) == 120
    assert factorial(30) == 265252859812191058636308480000000


def test_binomial():
    assert binomial(9, 0) == 1
    assert binomial(6, 3) == 20
    with pytest.raises(ValueError):
        binomial(3, 4)
    for n in range(41):
        for m in range(n):
            assert binomial(n + 1, m + 1) == binomial(n, m) + binomial(n, m + 1)


def test_multinomial():
    assert multinomial(4, [2, 2]) == 6
    assert multinomial(7, [7]) == 1
    with pytest.raises(ValueError):
        multinomial(4, [1, 2])
    for mono, c in poly_power_coeffs(3, 5).items():
        assert multinomial(5, list(mono)) == c


@given(rats, rats, st.integers(0, 25))
@settings(max_examples=40)
def test_binomial_theorem(x, y, n):
    assert (x + y) ** n == iter_sum(binomial(n, i) * x ** i * y ** (n - i) for i in range(n + 1))


@given(st.lists(rats, min_size=1, max_size=4), st.integers(0, 10))
@settings(max_examples=30)
def test_multinomial_theorem(xs, n):
    total = Fraction(0)
    for mono in poly_power_coeffs(len(xs), n):
        total += multinomial(n, list(mono)) * fold_prod(x ** e for x, e in zip(xs, mono))
    assert total == iter_sum(xs) ** n


@given(rats, rats, rats)
def test_ordered_field(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == 0
    if a:
        assert a * (1 / a) == 1
    if a <= b:
        assert a + c <= b + c
        if c >= 0:
            assert a * c <= b * c


@given(rats)
def test_rat_text_round_trip(q):
    assert parse_rat(format_rat(q)) == q
    assert q.denominator > 0


def test_parsing():
    assert parse_rat("0.1") == Fraction(1, 10)
    assert parse_rat("-1e-3") == Fraction(-1, 1000)
    assert parse_rat("6/4") == Fraction(3, 2)
    assert parse_rat("-6/4") == Fraction(-3, 2)
    assert format_rat(Fraction(-3, 1)) == "-3"
    assert parse_int("-0") == 0 and str(parse_int("-0")) == "0"
    for bad in ["1/0", "abc", "1/-2", ""]:
        with pytest.raises(ValueError):
            parse_rat(bad)
    with pytest.raises(ValueError):
        parse_int("1.5")
