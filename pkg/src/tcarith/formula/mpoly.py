"""Sparse multivariate polynomials over the rationals, keyed by variable name."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

from ..exact import binomial, format_rat, parse_rat
from ..poly import Polynomial

Monomial = tuple[tuple[str, int], ...]
Number = Union[int, Fraction]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


class MPoly:
    """Immutable polynomial ``sum c * prod v**e``; integer coefficients stay ``int``."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            if c:
                if isinstance(c, Fraction) and c.denominator == 1:
                    c = c.numerator
                clean[mono] = c
        self.terms: dict[Monomial, Number] = clean
        self._hash = None

    @classmethod
    def const(cls, c: Number) -> "MPoly":
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> "MPoly":
        return cls({((name, 1),): 1})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        return isinstance(other, MPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_const(self) -> bool:
        return all(m == () for m in self.terms)

    def const_value(self) -> Number:
        if not self.is_const():
            raise ValueError("polynomial is not constant")
        return self.terms.get((), 0)

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e for _, e in m) for m in self.terms)

    def degree_in(self, name: str) -> int:
        return max((dict(m).get(name, 0) for m in self.terms), default=-1)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    def __add__(self, other: "MPoly | Number") -> "MPoly":
        if not isinstance(other, MPoly):
            other = MPoly.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return MPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "MPoly | Number") -> "MPoly":
        if not isinstance(other, MPoly):
            other = MPoly.const(other)
        return self + (-other)

    def __rsub__(self, other: Number) -> "MPoly":
        return MPoly.const(other) - self

    def __mul__(self, other: "MPoly | Number") -> "MPoly":
        if not isinstance(other, MPoly):
            return MPoly({m: c * other for m, c in self.terms.items()})
        out: dict[Monomial, Number] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return MPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        out = MPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def evaluate(self, env: Mapping[str, Number]) -> Number:
        total: Number = 0
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t *= env[v] ** e
            total += t
        return total

    def substitute(self, mapping: Mapping[str, "MPoly | Number"]) -> "MPoly":
        """Replace variables by polynomials or numbers (unlisted variables stay)."""
        out = MPoly()
        cache: dict[tuple[str, int], MPoly] = {}
        for m, c in self.terms.items():
            t = MPoly.const(c)
            for v, e in m:
                if v in mapping:
                    key = (v, e)
                    if key not in cache:
                        r = mapping[v]
                        cache[key] = (r if isinstance(r, MPoly) else MPoly.const(r)) ** e
                    t = t * cache[key]
                else:
                    t = t * MPoly({((v, e),): 1})
            out = out + t
        return out

    def affine_substitute(self, name: str, scale: Number, shift: Number) -> "MPoly":
        """Replace ``name`` by ``scale * name + shift`` using binomial expansion."""
        out: dict[Monomial, Number] = {}
        for m, c in self.terms.items():
            exps = dict(m)
            e = exps.pop(name, 0)
            rest = tuple(sorted(exps.items()))
            for j in range(e + 1):
                coef = c * binomial(e, j) * scale ** j * shift ** (e - j)
                if not coef:
                    continue
                mono = _mono_mul(rest, ((name, j),)) if j else rest
                out[mono] = out.get(mono, 0) + coef
        return MPoly(out)

    def to_univariate(self, name: str) -> Polynomial:
        extra = self.variables() - {name}
        if extra:
            raise ValueError(f"polynomial still depends on {sorted(extra)}")
        d = max(self.degree_in(name), 0)
        cs = [Fraction(0)] * (d + 1)
        for m, c in self.terms.items():
            cs[dict(m).get(name, 0)] += c
        return Polynomial(cs)

    def sorted_terms(self) -> list[tuple[Monomial, Number]]:
        return sorted(self.terms.items(), key=lambda mc: (-sum(e for _, e in mc[0]), mc[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mono:
                parts.append(format_rat(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{format_rat(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"MPoly({self})"

    def to_json(self) -> list:
        return [[format_rat(c), {v: e for v, e in m}] for m, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, obj: Iterable) -> "MPoly":
        return cls({tuple(sorted((v, int(e)) for v, e in exps.items())): parse_rat(c)
                    for c, exps in obj})

    def python_expr(self, names: Mapping[str, str]) -> str:
        """Source text evaluating this polynomial, with variables renamed via ``names``."""
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = [repr(c) if isinstance(c, int) else f"Fraction({c.numerator}, {c.denominator})"]
            for v, e in m:
                factors.append(names[v] if e == 1 else f"{names[v]}**{e}")
            parts.append("*".join(factors))
        return "(" + " + ".join(parts) + ")"
