"""Exact integers and rationals, iterated sums/products, combinatorial coefficients.

Integers are Python ``int`` and rationals are :class:`fractions.Fraction`; both are
immutable, unbounded and canonical (fractions are kept in lowest terms with a
positive denominator). Nothing in this package touches floating point.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

ExactInt = int
ExactRat = Fraction
RatLike = Union[int, Fraction, str]

_INT_RE = re.compile(r"[+-]?\d+\Z")
_RAT_RE = re.compile(r"\s*([+-]?\d+)\s*/\s*(\d+)\s*\Z")
_DEC_RE = re.compile(r"\s*[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\s*\Z")


def parse_int(text: str) -> int:
    """Parse a decimal integer literal (optional sign, no whitespace inside)."""
    text = text.strip()
    if not _INT_RE.match(text):
        raise ValueError(f"not a decimal integer: {text!r}")
    return int(text)


def parse_rat(text: RatLike) -> Fraction:
    """Parse ``"p/q"`` or a decimal literal such as ``"-0.125"`` / ``"1e-3"`` exactly.

    >>> parse_rat("0.1")
    Fraction(1, 10)
    >>> parse_rat("6/-4")
    Traceback (most recent call last):
    ...
    ValueError: not an exact rational literal: '6/-4'
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise TypeError(f"expected str, int or Fraction, got {type(text).__name__}")
    m = _RAT_RE.match(text)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ValueError(f"zero denominator: {text!r}")
        return Fraction(int(m.group(1)), den)
    if _DEC_RE.match(text):
        # Fraction parses decimal strings digit by digit, never via float
        return Fraction(text.strip())
    raise ValueError(f"not an exact rational literal: {text!r}")


def format_rat(q: RatLike) -> str:
    """Canonical ``p/q`` text; integers print without a denominator."""
    q = parse_rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def iter_sum(xs: Iterable[RatLike]) -> Fraction:
    """Left fold of addition; the empty sum is 0."""
    return reduce(lambda acc, x: acc + x, (parse_rat(x) for x in xs), Fraction(0))


def iter_prod(xs: Iterable[RatLike]) -> Fraction:
    """Left fold of multiplication; the empty product is 1."""
    return reduce(lambda acc, x: acc * x, (parse_rat(x) for x in xs), Fraction(1))


def triangular_products(xs: Sequence[int], n: int) -> list[list[int]]:
    """Upper-triangular table of partial products.

    ``Y[i][j] == xs[i] * ... * xs[j-1]`` for ``0 <= i <= j <= n`` (entries below the
    diagonal are 0 and carry no meaning). Built row by row from ``Y[i][i] = 1`` and
    ``Y[i][j+1] = Y[i][j] * xs[j]``.
    """
    _check_natural(n, "n")
    if len(xs) < n:
        raise IndexError(f"need at least n={n} factors, got {len(xs)}")
    if n == 0:
        return []
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        table[i][i] = 1
        for j in range(i, n):
            table[i][j + 1] = table[i][j] * xs[j]
    return table


def factorial(n: int) -> int:
    _check_natural(n, "n")
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def binomial(n: int, m: int) -> int:
    _check_natural(n, "n")
    _check_natural(m, "m")
    if m > n:
        raise ValueError(f"binomial needs m <= n, got n={n}, m={m}")
    q, r = divmod(factorial(n), factorial(m) * factorial(n - m))
    assert r == 0
    return q


def multinomial(n: int, parts: Sequence[int]) -> int:
    """``n! / (parts[0]! * parts[1]! * ...)``; ``parts`` must sum to ``n``."""
    _check_natural(n, "n")
    for p in parts:
        _check_natural(p, "part")
    if sum(parts) != n:
        raise ValueError(f"parts {list(parts)} do not sum to {n}")
    den = 1
    for p in parts:
        den *= factorial(p)
    q, r = divmod(factorial(n), den)
    assert r == 0
    return q


def _check_natural(n: int, name: str) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError(f"{name} must be a natural number, got {n!r}")
