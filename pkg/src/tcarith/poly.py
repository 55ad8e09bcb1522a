"""Dense univariate polynomials with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import RatLike, binomial, format_rat, parse_rat


@dataclass(frozen=True)
class Polynomial:
    """``coeffs[i]`` is the coefficient of ``x**i``; trailing zeros are allowed.

    ``len(coeffs) - 1`` is the degree *bound*; :attr:`degree` is the true degree
    (``-1`` for the zero polynomial).
    """

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[RatLike]):
        cs = tuple(parse_rat(c) for c in coeffs)
        object.__setattr__(self, "coeffs", cs if cs else (Fraction(0),))

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        """From ``"a0,a1,...,ad"`` (each entry ``p/q`` or a decimal literal)."""
        parts = [p for p in text.split(",")]
        if not text.strip() or any(not p.strip() for p in parts):
            raise ValueError(f"bad coefficient list: {text!r}")
        return cls(p.strip() for p in parts)

    def __str__(self) -> str:
        return ",".join(format_rat(c) for c in self.coeffs)

    def __call__(self, x: RatLike) -> Fraction:
        x = parse_rat(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    @property
    def bound(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def trimmed(self) -> "Polynomial":
        return Polynomial(self.coeffs[: max(self.degree, 0) + 1])

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[i] + other[i] for i in range(n))

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    def scale(self, k: RatLike) -> "Polynomial":
        k = parse_rat(k)
        return Polynomial(k * c for c in self.coeffs)

    def with_constant(self, a0: RatLike) -> "Polynomial":
        return Polynomial((parse_rat(a0),) + self.coeffs[1:])

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i) if self.bound else Polynomial([0])

    def taylor_shift(self, c: RatLike) -> "Polynomial":
        """Coefficients of ``p(x + c)``."""
        c = parse_rat(c)
        d = len(self.coeffs)
        out = [Fraction(0)] * d
        cpow = [Fraction(1)] * d
        for i in range(1, d):
            cpow[i] = cpow[i - 1] * c
        for k, a in enumerate(self.coeffs):
            if a:
                for j in range(k + 1):
                    out[j] += a * binomial(k, j) * cpow[k - j]
        return Polynomial(out)

    def compose_affine(self, s: RatLike, c: RatLike) -> "Polynomial":
        """Coefficients of ``p(s*x + c)``."""
        s = parse_rat(s)
        shifted = self.taylor_shift(c).coeffs
        out, sp = [], Fraction(1)
        for a in shifted:
            out.append(a * sp)
            sp *= s
        return Polynomial(out)


def poly(coeffs: Sequence[RatLike]) -> Polynomial:
    return Polynomial(coeffs)
