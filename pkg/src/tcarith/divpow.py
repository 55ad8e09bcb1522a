"""Division from powering and powering from a single division.

Both reductions work on naturals with nothing but multiplication, shifts and
comparisons (plus one native division in :func:`powers_via_division`). They are
written for faithfulness rather than speed; :func:`native_divide` is the fast path
and must always agree with :func:`divide_via_powers`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError


@dataclass(frozen=True)
class DivisionTrace:
    """Intermediate quantities of one run of :func:`divide_via_powers`."""

    y: int
    x: int
    n: int
    m: int
    z: int
    q0: int
    q: int
    r: int

    def chain_holds(self) -> bool:
        """``2^(nm) Y >= XYZ >= 2^(nm) Q0 X > XYZ - 2^(nm) X`` on this instance."""
        p = 1 << (self.n * self.m)
        xyz = self.x * self.y * self.z
        return p * self.y >= xyz >= p * self.q0 * self.x > xyz - p * self.x


def native_divide(y: int, x: int) -> tuple[int, int]:
    _check_div_args(y, x)
    return divmod(y, x)


def power_sequence(base: int, count: int) -> list[int]:
    """``[base**0, ..., base**(count-1)]`` by repeated multiplication."""
    out = [1] * count
    for i in range(1, count):
        out[i] = out[i - 1] * base
    return out


def division_trace(y: int, x: int) -> DivisionTrace:
    """Compute floor(Y/X) via Z = sum_{i<m} (2^n - X)^i 2^(n(m-1-i)).

    ``n`` is the bit length of X, so ``2^(n-1) <= X < 2^n``, and ``m`` is the least
    positive integer with ``Y <= 2^m``. Then ``XZ = 2^(nm) - (2^n - X)^m`` and the
    truncated quotient ``Q0 = floor(YZ / 2^(nm))`` is at most one below the answer.
    """
    _check_div_args(y, x)
    n = x.bit_length()
    m = max(1, (y - 1).bit_length())
    gap = (1 << n) - x
    powers = power_sequence(gap, m)
    z = 0
    for i, p in enumerate(powers):
        z += p << (n * (m - 1 - i))
    q0 = (y * z) >> (n * m)
    q = q0
    # the chain only brackets Q within one unit
    for _ in range(2):
        if (q + 1) * x <= y:
            q += 1
    if not (q * x <= y < (q + 1) * x):
        raise AssertionError(f"division bracket failed for {y}/{x}")
    return DivisionTrace(y=y, x=x, n=n, m=m, z=z, q0=q0, q=q, r=y - q * x)


def divide_via_powers(y: int, x: int) -> tuple[int, int]:
    """Quotient and remainder of ``y`` by ``x`` computed from powers of ``2^n - x``."""
    t = division_trace(y, x)
    return t.q, t.r


def powers_via_division(x: int, n: int) -> list[int]:
    """``[x**0, ..., x**n]`` recovered from one division.

    With ``x < 2^k`` and ``m = k(n+1) + 1``, divide ``2^(nm)`` by ``2^m - x``; the
    base-``2^m`` digits of the quotient are ``x^0, ..., x^(n-1)`` (most significant
    first) and the remainder is ``x^n``.
    """
    if not isinstance(x, int) or x < 0:
        raise PreconditionError(f"x must be a natural number, got {x!r}")
    if not isinstance(n, int) or n < 0:
        raise PreconditionError(f"n must be a natural number, got {n!r}")
    k = max(1, x.bit_length())
    m = k * (n + 1) + 1
    q, r = divmod(1 << (n * m), (1 << m) - x)
    mask = (1 << m) - 1
    ys = [(q >> ((n - 1 - i) * m)) & mask for i in range(n)]
    ys.append(r)
    return ys


def powers_clause_holds(x: int, ys: list[int]) -> bool:
    """``Y[0] = 1`` and, for every j, ``Y[j] <= 2^(kj)`` and ``Y[i+1] = X Y[i]`` below j."""
    k = max(1, x.bit_length())
    if not ys or ys[0] != 1:
        return False
    for j, yj in enumerate(ys):
        if yj > 1 << (k * j):
            return False
        if j and ys[j] != x * ys[j - 1]:
            return False
    return True


def _check_div_args(y: int, x: int) -> None:
    if not isinstance(x, int) or x < 1:
        raise PreconditionError(f"divisor must be >= 1, got {x!r}")
    if not isinstance(y, int) or y < 0:
        raise PreconditionError(f"dividend must be >= 0, got {y!r}")
