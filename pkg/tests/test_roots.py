import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tcarith.errors import NormalizationFailed, PreconditionError
from tcarith.lif import magnitude_bound
from tcarith.poly import Polynomial
from tcarith.roots import (
    RootCertificate, SignChangeInterval, approx_root, hensel_normalize, is_admissible,
    lif_terms_for, refine_sign_change, scan_sign_changes,
)
from corpus import root_corpus
from oracles import bisect_root

SQRT2 = Polynomial([-2, 0, 1])
CUBIC = Polynomial([1, -5, 0, 1])


def overlaps_oracle(cert, f, lo, hi):
    z0, z1 = bisect_root(f.coeffs, lo, hi)
    return max(cert.z_minus, z0) <= min(cert.z_plus, z1)


def test_interval_invariants():
    with pytest.raises(PreconditionError):
        SignChangeInterval(SQRT2, 2, 1)
    with pytest.raises(PreconditionError):
        SignChangeInterval(SQRT2, 2, 3)
    iv = SignChangeInterval.oriented(CUBIC, 0, 1)
    assert iv.f == -CUBIC


def test_refine_sqrt2():
    iv = SignChangeInterval(SQRT2, 1, 2)
    cert = refine_sign_change(iv, F(1, 1000))
    assert cert.verify(iv, F(1, 1000))
    assert cert.z_minus ** 2 < 2 < cert.z_plus ** 2
    assert overlaps_oracle(cert, SQRT2, F(1), F(2))


def test_refine_exact_root_is_padded():
    iv = SignChangeInterval(Polynomial([0, 1]), -1, 1)
    cert = refine_sign_change(iv, F(1, 4))
    assert cert.z_minus < 0 < cert.z_plus and cert.width < F(1, 4)


def test_refine_cubic_against_oracle():
    iv = SignChangeInterval.oriented(CUBIC, 0, 1)
    cert = refine_sign_change(iv, F(1, 2 ** 40))
    assert cert.width < F(1, 2 ** 40)
    assert overlaps_oracle(cert, CUBIC, F(0), F(1))


def test_refine_rejects_bad_eps():
    iv = SignChangeInterval(SQRT2, 1, 2)
    for eps in (0, -1):
        with pytest.raises(PreconditionError):
            refine_sign_change(iv, eps)


def test_hensel_sqrt2_shift():
    h, phi = hensel_normalize(SQRT2, SignChangeInterval(SQRT2, 1, 2))
    assert phi.shift == F(181, 128)
    assert h[1] == 1 and abs(h[0]) < 1 / (4 * magnitude_bound(h))
    # h is a rescaled copy of f around the shift
    for y in (F(0), F(1, 3), F(-2)):
        assert h(y) * SQRT2.compose_affine(phi.scale, phi.shift)[1] == SQRT2(phi(y))


def test_hensel_identity_when_admissible():
    f = Polynomial([F(-1, 8), 1, 1])
    h, phi = hensel_normalize(f, SignChangeInterval(f, 0, 1))
    assert h == f and (phi.scale, phi.shift) == (1, 0)


def test_hensel_cubic_within_budget():
    iv = SignChangeInterval.oriented(CUBIC, 0, 1)
    h, phi = hensel_normalize(iv.f, iv, steps=64)
    assert is_admissible(h)
    assert 0 < phi.shift < 1


def test_hensel_fails_on_multiple_root():
    f = Polynomial([-1, 6, -12, 8])
    with pytest.raises(NormalizationFailed):
        hensel_normalize(f, SignChangeInterval(f, 0, 1))


def test_approx_sqrt2_fine():
    iv = SignChangeInterval(SQRT2, 1, 2)
    eps = F(1, 2 ** 64)
    cert = approx_root(SQRT2, iv, eps)
    assert cert.verify(iv, eps)
    z0, z1 = bisect_root(SQRT2.coeffs, F(1), F(2), bits=80)
    assert abs(cert.midpoint - z0) < eps


def test_approx_linear_exact_root():
    f = Polynomial([-1, 3])
    iv = SignChangeInterval(f, 0, 1)
    for eps in (F(1), F(1, 10), F(1, 2 ** 30)):
        cert = approx_root(f, iv, eps)
        assert cert.z_minus < F(1, 3) < cert.z_plus
        assert cert.midpoint == F(1, 3)
        assert cert.width <= eps / 2


def test_approx_cubic_fine():
    iv = SignChangeInterval.oriented(CUBIC, 0, 1)
    cert = approx_root(iv.f, iv, F(1, 2 ** 48))
    assert cert.verify(iv, F(1, 2 ** 48))
    assert overlaps_oracle(cert, CUBIC, F(0), F(1))


def test_approx_wrong_polynomial():
    iv = SignChangeInterval(SQRT2, 1, 2)
    with pytest.raises(PreconditionError):
        approx_root(Polynomial([-3, 0, 1]), iv, F(1, 10))


@pytest.mark.parametrize("name,f,lo,hi,eps", root_corpus(),
                         ids=lambda v: v if isinstance(v, str) else "")
def test_corpus_methods_overlap(name, f, lo, hi, eps):
    iv = SignChangeInterval.oriented(f, lo, hi)
    a = approx_root(iv.f, iv, eps)
    b = refine_sign_change(iv, eps)
    assert a.verify(iv, eps) and b.verify(iv, eps)
    assert max(a.z_minus, b.z_minus) < min(a.z_plus, b.z_plus)


def test_monotone_refinement():
    iv = SignChangeInterval.oriented(CUBIC, 0, 1)
    certs = [refine_sign_change(iv, F(1, 2 ** k)) for k in range(4, 40, 5)]
    for coarse, fine in zip(certs, certs[1:]):
        assert coarse.z_minus <= fine.z_minus < fine.z_plus <= coarse.z_plus


def test_series_terms_grow_logarithmically():
    iv = SignChangeInterval(SQRT2, 1, 2)
    counts = [lif_terms_for(SQRT2, iv, F(1, 2 ** k)) for k in (40, 80, 160, 320)]
    assert counts == sorted(counts)
    # N is affine in log(1/E): doubling the bit count doubles the increment
    steps = [b - a for a, b in zip(counts, counts[1:])]
    for small, big in zip(steps, steps[1:]):
        assert abs(big - 2 * small) <= 2


@given(st.integers(-50, 50), st.integers(1, 50), st.integers(1, 40))
@settings(max_examples=40, deadline=None)
def test_random_quadratics(p, q, k):
    # the positive root sqrt(p/q) is at most sqrt(51) < 60
    if p <= 0:
        p = -p + 1
    f = Polynomial([F(-p, q), 0, 1])
    iv = SignChangeInterval(f, 0, 60)
    eps = F(1, 2 ** k)
    for cert in (approx_root(f, iv, eps), refine_sign_change(iv, eps)):
        assert cert.verify(iv, eps)


def test_certificate_json():
    iv = SignChangeInterval(SQRT2, 1, 2)
    cert = approx_root(SQRT2, iv, F(1, 2 ** 20))
    back = RootCertificate.from_json(json.loads(json.dumps(cert.to_json())))
    assert back == cert
    bad = dict(cert.to_json(), width="1")
    with pytest.raises(ValueError):
        RootCertificate.from_json(bad)


def test_scan_sign_changes():
    ivs = scan_sign_changes(CUBIC, [-3, -2, 0, 1, 2, 3])
    assert [(iv.lo, iv.hi) for iv in ivs] == [(-3, -2), (0, 1), (2, 3)]
