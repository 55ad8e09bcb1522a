"""Lagrange inversion for constant-degree polynomials, with exact error certificates.

For ``f(x) = x + a_2 x^2 + ... + a_d x^d`` the compositional inverse is
``g(w) = sum_n b_n w^n`` with

    b_n = sum over m with weight(m) = n-1 of  C_m * prod_i (-a_i)^(m_i)

and for ``h = f + a_0`` with ``|a_0| < 1/(4a)`` the partial sums of ``g(-a_0)``
converge geometrically to a root of ``h``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .catalan import catalan, compositions_with_weight
from .errors import CertificateError, ConvergenceDomainError, PreconditionError, ShapeError
from .exact import format_rat, parse_rat
from .poly import Polynomial

DEFAULT_MAX_TERMS = 64


def magnitude_bound(p: Polynomial) -> Fraction:
    """``a = max(1, sum_{i>=2} |a_i|)``."""
    return max(Fraction(1), sum((abs(c) for c in p.coeffs[2:]), Fraction(0)))


def _check_shape(p: Polynomial) -> None:
    if p.bound < 1 or p[1] != 1:
        raise ShapeError(f"linear coefficient must be exactly 1, polynomial is {p}")


@dataclass(frozen=True)
class LifSeries:
    """Inversion coefficients ``b_1..b_N`` of ``f`` plus the convergence parameters."""

    f: Polynomial
    coeffs: tuple[Fraction, ...]
    a: Fraction
    alpha: Fraction = Fraction(0)

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def b(self, n: int) -> Fraction:
        """1-based coefficient access."""
        if not 1 <= n <= len(self.coeffs):
            raise IndexError(n)
        return self.coeffs[n - 1]

    def partial_sum(self, w: Fraction, n: int | None = None) -> Fraction:
        n = self.n if n is None else n
        total, wp = Fraction(0), Fraction(1)
        for b in self.coeffs[:n]:
            wp *= w
            total += b * wp
        return total

    def to_json(self) -> dict:
        return {
            "poly": [format_rat(c) for c in self.f.coeffs],
            "n": self.n,
            "b": [format_rat(c) for c in self.coeffs],
            "a": format_rat(self.a),
            "alpha": format_rat(self.alpha),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LifSeries":
        return cls(
            f=Polynomial(obj["poly"]),
            coeffs=tuple(parse_rat(c) for c in obj["b"]),
            a=parse_rat(obj["a"]),
            alpha=parse_rat(obj["alpha"]),
        )


def lif_coefficients(f: Polynomial, n: int) -> LifSeries:
    """Closed-form inversion coefficients ``b_1..b_n`` of ``f`` (``a_0 = 0``, ``a_1 = 1``)."""
    _check_shape(f)
    if f[0] != 0:
        raise ShapeError(f"constant term must be 0, polynomial is {f}")
    if n < 0:
        raise PreconditionError(f"number of terms must be natural, got {n}")
    d = max(f.degree, 1)
    neg = [None, None] + [-f[i] for i in range(2, d + 1)]
    bs = []
    for k in range(1, n + 1):
        total = Fraction(0)
        for m in compositions_with_weight(d, k):
            term = Fraction(catalan(m))
            for i, mi in m.items():
                if mi:
                    term *= neg[i] ** mi
            total += term
        bs.append(total)
    return LifSeries(f=f, coeffs=tuple(bs), a=magnitude_bound(f))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of ``parts`` positive integers summing to ``total``."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _recurrence_rhs(f: Polynomial, bs: list[Fraction], n: int) -> Fraction:
    total = Fraction(0)
    for k in range(2, f.bound + 1):
        ak = f[k]
        if not ak:
            continue
        inner = Fraction(0)
        for parts in _compositions(n, k):
            p = Fraction(1)
            for nj in parts:
                p *= bs[nj - 1]
            inner += p
        total += -ak * inner
    return total


def recurrence_coefficients(f: Polynomial, n: int) -> list[Fraction]:
    """``b_1..b_n`` from ``b_1 = 1`` and ``b_n = sum_k (-a_k) sum_{n_1+..+n_k=n} prod b_{n_j}``."""
    _check_shape(f)
    bs: list[Fraction] = []
    for k in range(1, n + 1):
        bs.append(Fraction(1) if k == 1 else _recurrence_rhs(f, bs, k))
    return bs


def check_inverse_recurrence(s: LifSeries) -> bool:
    """True iff the stored coefficients satisfy the formal-inverse recurrence."""
    bs = list(s.coeffs)
    if not bs:
        return True
    if bs[0] != 1:
        return False
    return all(bs[k - 1] == _recurrence_rhs(s.f, bs, k) for k in range(2, len(bs) + 1))


def coefficient_bound_holds(s: LifSeries) -> bool:
    """``|b_n| <= (4a)^(n-1)`` for every stored ``n``."""
    four_a = 4 * s.a
    bound = Fraction(1)
    for b in s.coeffs:
        if abs(b) > bound:
            return False
        bound *= four_a
    return True


def bound_ratios(s: LifSeries) -> list[Fraction]:
    """``|b_n| / (4a)^(n-1)``; shows how close the coefficient bound is to tight."""
    four_a = 4 * s.a
    out, bound = [], Fraction(1)
    for b in s.coeffs:
        out.append(abs(b) / bound)
        bound *= four_a
    return out


@dataclass(frozen=True)
class PartialSumCertificate:
    """Exact bounds accompanying a partial sum ``x_N`` of the inversion series."""

    n: int
    degree: int
    a0: Fraction
    a: Fraction
    alpha: Fraction
    x_n: Fraction
    x_next: Fraction
    residual: Fraction
    modulus_bound: Fraction
    tail_bound: Fraction
    residual_bound: Fraction
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {k: format_rat(getattr(self, k)) for k in (
            "a0", "a", "alpha", "x_n", "x_next", "residual",
            "modulus_bound", "tail_bound", "residual_bound")}
        out["n"] = self.n
        out["degree"] = self.degree
        out["checks"] = dict(self.checks)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "PartialSumCertificate":
        kw = {k: parse_rat(v) for k, v in obj.items() if k not in ("n", "degree", "checks")}
        return cls(n=obj["n"], degree=obj["degree"], checks=dict(obj["checks"]), **kw)


def tail_bound(a0: Fraction, alpha: Fraction, n: int) -> Fraction:
    """``|a0| alpha^(n-1) / (1 - alpha)``: bound on ``|x_N - x_M|`` for every ``M >= N``."""
    return abs(a0) * alpha ** (n - 1) / (1 - alpha)


def terms_needed(a0: Fraction, alpha: Fraction, target: Fraction) -> int:
    """Least ``N >= 1`` whose tail bound is strictly below ``target``."""
    if target <= 0:
        raise PreconditionError("target error must be positive")
    if a0 == 0:
        return 1
    n = 1
    t = abs(a0) / (1 - alpha)
    while t >= target:
        n += 1
        t *= alpha
    return n


def partial_sum_root(h: Polynomial, n: int) -> tuple[Fraction, PartialSumCertificate]:
    """``x_N = sum_{k<=N} b_k (-a_0)^k`` for ``h = a_0 + x + a_2 x^2 + ...``.

    Raises :class:`ConvergenceDomainError` unless ``|a_0| < 1/(4a)``. The returned
    certificate has been checked exactly against all three bounds:
    ``|x_N| <= |a0|/(1-alpha)``, ``|x_N - x_{N+1}| <= |a0| alpha^(N-1)/(1-alpha)`` and
    ``|h(x_N)| <= N^d |a0| alpha^N``.
    """
    _check_shape(h)
    if n < 1:
        raise PreconditionError(f"N must be >= 1, got {n}")
    a0 = h[0]
    a = magnitude_bound(h)
    if abs(a0) * 4 * a >= 1:
        raise ConvergenceDomainError(
            f"|a0| = {format_rat(abs(a0))} is not below 1/(4a) = {format_rat(1 / (4 * a))}")
    alpha = 4 * a * abs(a0)
    series = lif_coefficients(h.with_constant(0), n + 1)
    w = -a0
    x_n = series.partial_sum(w, n)
    x_next = series.partial_sum(w, n + 1)
    d = max(h.degree, 1)
    residual = abs(h(x_n))
    cert = PartialSumCertificate(
        n=n, degree=d, a0=a0, a=a, alpha=alpha, x_n=x_n, x_next=x_next, residual=residual,
        modulus_bound=abs(a0) / (1 - alpha),
        tail_bound=tail_bound(a0, alpha, n),
        residual_bound=Fraction(n) ** d * abs(a0) * alpha ** n,
    )
    checks = {
        "modulus": abs(x_n) <= cert.modulus_bound,
        "cauchy": abs(x_n - x_next) <= cert.tail_bound,
        "residual": residual <= cert.residual_bound,
    }
    object.__setattr__(cert, "checks", checks)
    failed = [k for k, ok in checks.items() if not ok]
    if failed:
        raise CertificateError(f"partial-sum bounds violated: {failed} for {h}, N={n}")
    return x_n, cert
