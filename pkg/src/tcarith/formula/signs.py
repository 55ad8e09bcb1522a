"""Integer breakpoints on which a polynomial keeps the truth value of ``f(x) >= 0``.

For an integer polynomial ``f`` of degree ``d`` and ``a > d``, the set
``{x < a : f(x) >= 0}`` is a union of at most ``d`` runs of consecutive integers
(``2f + 1`` has at most ``d`` real roots and no integer ones). The breakpoints are
the integers where membership flips.

They are found without leaving the integers. The forward difference
``f(x+1) - f(x)`` has degree ``d - 1``; its own breakpoints split ``[0, a)`` into
pieces on which ``f`` is monotone along the integers, and each piece holds at most one
flip, located by binary search.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from ..errors import CertificateError, PreconditionError
from ..exact import binomial
from ..poly import Polynomial

IntPoly = tuple[int, ...]


def _to_int_poly(p: Polynomial | Sequence[int]) -> IntPoly:
    """Integer coefficients with the same sign at every point (denominators cleared)."""
    cs = [Fraction(c) for c in (p.coeffs if isinstance(p, Polynomial) else p)]
    den = lcm(*(c.denominator for c in cs)) if cs else 1
    out = [int(c * den) for c in cs]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out) if out else (0,)


def _eval(p: IntPoly, x: int) -> int:
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _difference(p: IntPoly) -> IntPoly:
    """Coefficients of ``p(x + 1) - p(x)``."""
    d = len(p) - 1
    out = [0] * max(d, 1)
    for k in range(1, d + 1):
        for j in range(k):
            out[j] += p[k] * binomial(k, j)
    return _to_int_poly(out)


def _flip_in_monotone(p: IntPoly, lo: int, hi: int) -> int | None:
    """The one flip of ``p >= 0`` on integers ``lo..hi`` where ``p`` is monotone."""
    first = _eval(p, lo) >= 0
    if (_eval(p, hi) >= 0) == first:
        return None
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if (_eval(p, mid) >= 0) == first:
            lo = mid
        else:
            hi = mid
    return hi


def flips(p: IntPoly, lo: int, hi: int) -> list[int]:
    """Every ``x`` in ``(lo, hi)`` with ``[p(x) >= 0] != [p(x-1) >= 0]``, ascending."""
    if hi - lo <= 1 or len(p) <= 1:
        return []
    if len(p) == 2:
        f = _flip_in_monotone(p, lo, hi - 1)
        return [] if f is None else [f]
    # pieces [s, e) of constant truth of the difference make p monotone on s..e
    cuts = [lo] + flips(_difference(p), lo, hi - 1) + [hi - 1]
    out: list[int] = []
    for s, e in zip(cuts, cuts[1:]):
        f = _flip_in_monotone(p, s, e)
        if f is not None and (not out or out[-1] != f):
            out.append(f)
    return out


@dataclass(frozen=True)
class SignDecomposition:
    """``breakpoints[u]`` is ``0 = w_0 < w_1 < ... < w_{d+1} = a`` for ``polys[u]``."""

    polys: tuple[Polynomial, ...]
    a: int
    degree: int
    breakpoints: tuple[tuple[int, ...], ...]

    def cell_of(self, u: int, x: int) -> int:
        ws = self.breakpoints[u]
        for i in range(len(ws) - 1):
            if ws[i] <= x < ws[i + 1]:
                return i
        raise ValueError(f"{x} is outside [0, {self.a})")

    def holds_at(self, u: int, x: int) -> bool:
        """The invariant at one point: ``f(x) >= 0`` iff ``f`` is >= 0 at the cell start."""
        f = self.polys[u]
        i = self.cell_of(u, x)
        return (f(x) >= 0) == (f(self.breakpoints[u][i]) >= 0)

    def merged(self) -> list[int]:
        """All breakpoints of all polynomials, sorted without duplicates."""
        return sorted({w for ws in self.breakpoints for w in ws})

    def to_json(self) -> dict:
        return {"a": self.a, "degree": self.degree,
                "polys": [str(p) for p in self.polys],
                "breakpoints": [list(ws) for ws in self.breakpoints]}


def _pad(points: list[int], a: int, length: int) -> tuple[int, ...]:
    pts = sorted({0, a, *points})
    filler = 1
    while len(pts) < length:
        while filler in pts:
            filler += 1
        pts.append(filler)
        pts.sort()
    return tuple(pts)


def sign_decompose(fs: Sequence[Polynomial], a: int) -> SignDecomposition:
    """Breakpoints for each polynomial, padded to ``d + 2`` entries with ``d`` the largest degree.

    Rational coefficients are accepted (denominators are cleared, which keeps signs).
    Requires ``a > d``.
    """
    polys = tuple(p if isinstance(p, Polynomial) else Polynomial(p) for p in fs)
    d = max((max(p.degree, 0) for p in polys), default=0)
    if a <= d:
        raise PreconditionError(f"domain bound a = {a} must exceed the degree {d}")
    out = []
    for p in polys:
        fl = flips(_to_int_poly(p), 0, a)
        if len(fl) > max(p.degree, 0):
            raise CertificateError(f"{p} flips sign {len(fl)} times, more than its degree")
        out.append(_pad(fl, a, d + 2))
    return SignDecomposition(polys, a, d, tuple(out))


def breakpoints(p: Polynomial | Sequence[int], a: int) -> list[int]:
    """Unpadded flip points of ``p >= 0`` in ``(0, a)``."""
    return flips(_to_int_poly(p), 0, a)
