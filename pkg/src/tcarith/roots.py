"""Certified root brackets for rational polynomials.

:func:`refine_sign_change` is plain exact bisection. :func:`hensel_normalize` looks for
a shift and scale that turn the bracketed root into the small root of a polynomial with
linear coefficient 1 and tiny constant term, where the inversion series of
:mod:`tcarith.lif` converges; :func:`approx_root` combines the two.

The shift/scale search is bisection-until-admissible, a desk-scale stand-in for a
Newton-polygon reduction: it only succeeds for roots that are simple at the working
resolution, and callers fall back to bisection otherwise.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded, CertificateError, NormalizationFailed, PreconditionError
from .exact import RatLike, format_rat, parse_rat
from .lif import DEFAULT_MAX_TERMS, magnitude_bound, partial_sum_root, terms_needed
from .poly import Polynomial

log = logging.getLogger(__name__)

HENSEL_STEPS = 64
# multiples of the sub-bracket half-width; wider scales are only tried after the
# tighter one fails on every bisection step
HENSEL_SCALES = (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4))
PERTURB_STEPS = 64
# approx_root asks for fast convergence first and settles for plain admissibility
SERIES_ALPHAS = (Fraction(1, 4), Fraction(1))


@dataclass(frozen=True)
class SignChangeInterval:
    f: Polynomial
    lo: Fraction
    hi: Fraction

    def __init__(self, f: Polynomial, lo: RatLike, hi: RatLike):
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "lo", parse_rat(lo))
        object.__setattr__(self, "hi", parse_rat(hi))
        if not self.lo < self.hi:
            raise PreconditionError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if not f(self.lo) < 0 < f(self.hi):
            raise PreconditionError(
                f"need f(lo) < 0 < f(hi), got f({self.lo}) = {f(self.lo)}, f({self.hi}) = {f(self.hi)}")

    @classmethod
    def oriented(cls, f: Polynomial, lo: RatLike, hi: RatLike) -> "SignChangeInterval":
        """Like the constructor but negates ``f`` when it goes from positive to negative."""
        lo, hi = parse_rat(lo), parse_rat(hi)
        if lo < hi and f(lo) > 0 > f(hi):
            f = -f
        return cls(f, lo, hi)


@dataclass(frozen=True)
class RootCertificate:
    z_minus: Fraction
    z_plus: Fraction

    @property
    def width(self) -> Fraction:
        return self.z_plus - self.z_minus

    @property
    def midpoint(self) -> Fraction:
        return (self.z_minus + self.z_plus) / 2

    def verify(self, iv: SignChangeInterval, eps: Fraction) -> bool:
        f = iv.f
        return (iv.lo < self.z_minus < self.z_plus < iv.hi
                and self.width < eps
                and f(self.z_minus) < 0 < f(self.z_plus))

    def to_json(self) -> dict:
        return {"z_minus": format_rat(self.z_minus), "z_plus": format_rat(self.z_plus),
                "width": format_rat(self.width)}

    @classmethod
    def from_json(cls, obj: dict) -> "RootCertificate":
        cert = cls(parse_rat(obj["z_minus"]), parse_rat(obj["z_plus"]))
        if "width" in obj and parse_rat(obj["width"]) != cert.width:
            raise ValueError("width field does not match endpoints")
        return cert


def _checked(cert: RootCertificate, iv: SignChangeInterval, eps: Fraction) -> RootCertificate:
    if not cert.verify(iv, eps):
        raise CertificateError(f"certificate {cert.to_json()} fails re-evaluation on {iv.f}")
    return cert


def _exact_root_bracket(f: Polynomial, r: Fraction, lo: Fraction, hi: Fraction,
                        eps: Fraction) -> RootCertificate | None:
    """Pad an exact root ``r`` to ``(r - delta, r + delta)`` with strict signs inside (lo, hi)."""
    delta = min(eps / 4, (r - lo) / 2, (hi - r) / 2)
    for _ in range(PERTURB_STEPS):
        if f(r - delta) < 0 < f(r + delta):
            return RootCertificate(r - delta, r + delta)
        delta /= 2
    return None


def refine_sign_change(iv: SignChangeInterval, eps: RatLike) -> RootCertificate:
    """Bisect until the bracket is narrower than ``eps`` and strictly inside ``iv``.

    Midpoints are exact rationals. If a midpoint is itself a root, the result is that
    root padded by at most ``eps/4`` on either side, provided the signs there are
    strict; otherwise the probe point is nudged off the root and bisection continues.
    """
    eps = parse_rat(eps)
    if eps <= 0:
        raise PreconditionError(f"eps must be positive, got {eps}")
    f = iv.f
    lo, hi = iv.lo, iv.hi
    while hi - lo >= eps or lo == iv.lo or hi == iv.hi:
        mid = (lo + hi) / 2
        v = f(mid)
        if v == 0:
            cert = _exact_root_bracket(f, mid, iv.lo, iv.hi, eps)
            if cert is not None:
                return _checked(cert, iv, eps)
            mid, v = _nudge(f, mid, lo, hi)
        if v < 0:
            lo = mid
        else:
            hi = mid
    return _checked(RootCertificate(lo, hi), iv, eps)


def _nudge(f: Polynomial, mid: Fraction, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    step = (hi - lo) / 4
    for _ in range(PERTURB_STEPS):
        for p in (mid - step, mid + step):
            v = f(p)
            if v != 0:
                return p, v
        step /= 2
    raise BudgetExceeded(f"could not move off the root {mid} of {f}")


@dataclass(frozen=True)
class AffineMap:
    """``y -> scale * y + shift``, mapping the normalized variable back to ``x``."""

    scale: Fraction
    shift: Fraction

    def __call__(self, y: RatLike) -> Fraction:
        return self.scale * parse_rat(y) + self.shift

    def to_json(self) -> dict:
        return {"scale": format_rat(self.scale), "shift": format_rat(self.shift)}


def normalized_at(f: Polynomial, scale: Fraction, shift: Fraction) -> Polynomial | None:
    """``f(scale*y + shift) / (scale * f'(shift))``, or None when ``f'(shift) == 0``."""
    g = f.compose_affine(scale, shift)
    if g[1] == 0:
        return None
    return g.scale(1 / g[1]).trimmed()


def is_admissible(h: Polynomial, max_alpha: Fraction = Fraction(1)) -> bool:
    """Linear coefficient 1 and ``alpha = 4a|h_0|`` below ``max_alpha`` (at most 1)."""
    return h.bound >= 1 and h[1] == 1 and 4 * magnitude_bound(h) * abs(h[0]) < max_alpha


def hensel_normalize(f: Polynomial, bracket: SignChangeInterval, steps: int = HENSEL_STEPS,
                     max_alpha: RatLike = 1) -> tuple[Polynomial, AffineMap]:
    """Find ``h(y) = k f(s y + c)`` with ``h_1 = 1`` and ``|h_0| < 1/(4 a_h)``.

    ``f`` itself is tried first (identity map). Otherwise the bracket is bisected and,
    at each step, ``c`` is the midpoint of the current sub-bracket and ``s`` a fixed
    multiple of its half-width. The multiple starts at 1/2 and doubles (up to 4) each
    time a full pass of ``steps`` bisections finds nothing. ``max_alpha < 1`` asks for
    a faster-converging normal form. Raises :class:`NormalizationFailed` when nothing
    is admissible, which signals a root that is multiple or clustered at this
    resolution.
    """
    max_alpha = parse_rat(max_alpha)
    if not 0 < max_alpha <= 1:
        raise PreconditionError(f"max_alpha must lie in (0, 1], got {max_alpha}")
    if f[1] == 1 and is_admissible(f.trimmed(), max_alpha):
        return f.trimmed(), AffineMap(Fraction(1), Fraction(0))
    for widen in HENSEL_SCALES:
        lo, hi = bracket.lo, bracket.hi
        for _ in range(steps + 1):
            c = (lo + hi) / 2
            s = widen * (hi - lo) / 2
            h = normalized_at(f, s, c)
            if h is not None and is_admissible(h, max_alpha):
                return h, AffineMap(s, c)
            v = f(c)
            if v == 0:
                # a simple root at c was admissible above, so this one is multiple
                break
            if v < 0:
                lo = c
            else:
                hi = c
    raise NormalizationFailed(f"no admissible shift/scale for {f} on [{bracket.lo}, {bracket.hi}]"
                              f" within {steps} bisection steps")


def approx_root(f: Polynomial, bracket: SignChangeInterval, eps: RatLike,
                max_terms: int = DEFAULT_MAX_TERMS) -> RootCertificate:
    """Certified bracket of width ``< eps`` around the root inside ``bracket``.

    Normalizes with :func:`hensel_normalize`, sums enough terms of the inversion series
    that the mapped-back error is below ``eps/4``, then certifies with a final
    :func:`refine_sign_change` around the estimate. Falls back to bisection on the
    whole bracket when normalization fails, when more than ``max_terms`` terms would be
    needed, or when the estimate does not sit on the bracketed sign change.
    """
    eps = parse_rat(eps)
    if eps <= 0:
        raise PreconditionError(f"eps must be positive, got {eps}")
    if bracket.f != f:
        raise PreconditionError("bracket was built for a different polynomial")
    cert = _approx_via_series(f, bracket, eps, max_terms)
    if cert is None:
        cert = refine_sign_change(bracket, eps)
    return _checked(cert, bracket, eps)


def _normalize_for_series(f: Polynomial, bracket: SignChangeInterval) -> tuple[Polynomial, AffineMap]:
    for max_alpha in SERIES_ALPHAS[:-1]:
        try:
            return hensel_normalize(f, bracket, max_alpha=max_alpha)
        except NormalizationFailed:
            pass
    return hensel_normalize(f, bracket, max_alpha=SERIES_ALPHAS[-1])


def _approx_via_series(f: Polynomial, bracket: SignChangeInterval, eps: Fraction,
                       max_terms: int) -> RootCertificate | None:
    try:
        h, phi = _normalize_for_series(f, bracket)
    except NormalizationFailed as exc:
        log.info("falling back to bisection: %s", exc)
        return None
    if h[0] == 0:
        estimate = phi(0)
    else:
        alpha = 4 * magnitude_bound(h) * abs(h[0])
        n = terms_needed(h[0], alpha, eps / 4 / abs(phi.scale))
        if n > max_terms:
            log.info("falling back to bisection: %d terms needed, cap is %d", n, max_terms)
            return None
        x_n, _ = partial_sum_root(h, n)
        estimate = phi(x_n)
    lo, hi = bracket.lo, bracket.hi
    if not lo < estimate < hi:
        return None
    if f(estimate) == 0:
        return _exact_root_bracket(f, estimate, lo, hi, eps)
    sub_lo, sub_hi = max(lo, estimate - eps / 4), min(hi, estimate + eps / 4)
    if not f(sub_lo) < 0 < f(sub_hi):
        return None
    inner = refine_sign_change(SignChangeInterval(f, sub_lo, sub_hi), eps)
    return inner


def lif_terms_for(f: Polynomial, bracket: SignChangeInterval, eps: RatLike) -> int:
    """Number of series terms :func:`approx_root` would sum for this target width."""
    eps = parse_rat(eps)
    h, phi = _normalize_for_series(f, bracket)
    if h[0] == 0:
        return 1
    alpha = 4 * magnitude_bound(h) * abs(h[0])
    return terms_needed(h[0], alpha, eps / 4 / abs(phi.scale))


def scan_sign_changes(f: Polynomial, grid: list[RatLike]) -> list[SignChangeInterval]:
    """Brackets between consecutive grid points where ``f`` changes strict sign."""
    pts = sorted(parse_rat(g) for g in grid)
    out = []
    for a, b in zip(pts, pts[1:]):
        fa, fb = f(a), f(b)
        if fa * fb < 0:
            out.append(SignChangeInterval.oriented(f, a, b))
    return out
