"""Acceptance criteria, one test each; the terminal summary prints PASS/FAIL per criterion."""

import os
import random
import subprocess
import sys
import time
from fractions import Fraction as F
from pathlib import Path

from tcarith.catalan import (
    DegreeVector, catalan, check_identity_bin, check_identity_cm, check_identity_k,
    count_trees_oracle, vectors_with_nodes_at_most,
)
from tcarith.divpow import divide_via_powers, powers_via_division
from tcarith.formula import min_sat, normalize_formula, parse
from tcarith.lif import (
    coefficient_bound_holds, lif_coefficients, partial_sum_root, recurrence_coefficients,
)
from tcarith.poly import Polynomial
from tcarith.roots import SignChangeInterval, approx_root, refine_sign_change
from corpus import FORMULAS, admissible_polys, random_lif_polys, root_corpus
from oracles import eval_formula, repeated_powers, root_nearest_zero, schoolbook_divmod

LIF_CORPUS = random_lif_polys(2024, 50, max_degree=4)
DOMAIN = 1 << 12


def test_01_catalan_identities():
    start = time.perf_counter()
    checked = 0
    for d, total in ((2, 8), (3, 8), (4, 5)):
        for m in vectors_with_nodes_at_most(d, total):
            if not m.is_zero():
                assert check_identity_cm(m), (d, m)
            assert check_identity_bin(m), (d, m)
            for k in range(1, d + 1):
                assert check_identity_k(m, k), (d, m, k)
            checked += 1
    assert checked == 9 + 45 + 56
    assert time.perf_counter() - start < 60


def vectors_of_size_at_most(d, limit):
    """Every degree vector of degree ``d`` with ``sum_i i*m_i <= limit``."""
    def rec(i, left):
        if i > d:
            yield ()
            return
        for mi in range(left // i + 1):
            for rest in rec(i + 1, left - i * mi):
                yield (mi,) + rest
    for entries in rec(2, limit):
        yield DegreeVector(entries)


def test_02_tree_oracle():
    start = time.perf_counter()
    seen = 0
    for d in range(2, 13):
        for m in vectors_of_size_at_most(d, 12):
            assert catalan(m) == count_trees_oracle(m), m
            seen += 1
    assert seen > 0
    assert time.perf_counter() - start < 120


def test_03_lif_closed_form_equals_recurrence():
    assert len(LIF_CORPUS) == 50
    for f in LIF_CORPUS:
        assert f.degree <= 4
        assert list(lif_coefficients(f, 20).coeffs) == recurrence_coefficients(f, 20), f


def test_04_coefficient_bound():
    for f in LIF_CORPUS:
        assert coefficient_bound_holds(lif_coefficients(f, 20)), f
    s = lif_coefficients(Polynomial([0, 1, -1]), 20)
    assert list(s.coeffs) == [catalan([n - 1]) for n in range(1, 21)]


def test_05_partial_sum_error_bounds():
    corpus = admissible_polys(99, 20)
    assert len(corpus) == 20
    for h in corpus:
        a0 = h[0]
        a = max(F(1), sum((abs(c) for c in h.coeffs[2:]), F(0)))
        alpha = 4 * a * abs(a0)
        assert alpha < 1
        z0, z1 = root_nearest_zero(h.coeffs, bits=80)
        d = max(h.degree, 1)
        for n in range(1, 31):
            x_n, cert = partial_sum_root(h, n)
            x_next, _ = partial_sum_root(h, n + 1)
            tail = abs(a0) * alpha ** (n - 1) / (1 - alpha)
            assert abs(x_n) <= abs(a0) / (1 - alpha)
            assert abs(x_n - x_next) <= tail
            assert abs(h(x_n)) <= F(n) ** d * abs(a0) * alpha ** n
            # the oracle root is only known to lie in [z0, z1]; measure to that bracket
            assert max(F(0), z0 - x_n, x_n - z1) <= tail


def test_06_division_and_powers_reductions():
    rng = random.Random(512)
    start = time.perf_counter()
    for _ in range(500):
        y = rng.getrandbits(rng.randint(1, 512))
        x = rng.getrandbits(rng.randint(1, 512)) or 1
        assert divide_via_powers(y, x) == schoolbook_divmod(y, x)
    assert time.perf_counter() - start < 30
    for _ in range(200):
        x = rng.randint(0, 1 << 64)
        n = rng.randint(0, 32)
        assert powers_via_division(x, n) == repeated_powers(x, n)


def test_07_root_certificates():
    corpus = root_corpus()
    assert len(corpus) == 30
    names = {c[0] for c in corpus}
    assert {"sqrt2", "cubic", "very-narrow", "near-double"} <= names
    for name, f, lo, hi, eps in corpus:
        iv = SignChangeInterval.oriented(f, lo, hi)
        g = iv.f
        for cert in (refine_sign_change(iv, eps), approx_root(g, iv, eps)):
            assert cert.z_minus < cert.z_plus, name
            assert cert.z_plus - cert.z_minus < eps, name
            assert g(cert.z_minus) < 0 < g(cert.z_plus), name
            assert lo < cert.z_minus and cert.z_plus < hi, name


def test_08_normal_form_semantics():
    assert len(FORMULAS) == 25
    for src in FORMULAS:
        phi = parse(src)
        run = normalize_formula(phi).compile()
        for x in range(DOMAIN):
            assert run(x) == eval_formula(phi.body, {"x": x}), (src, x)


def test_09_min_sat_matches_scan():
    start = time.perf_counter()
    for src in FORMULAS:
        phi = parse(src)
        want = next((x for x in range(DOMAIN) if eval_formula(phi.body, {"x": x})), None)
        assert min_sat(phi, DOMAIN) == want, src
    assert time.perf_counter() - start < 120


def test_10_cli_determinism():
    script = Path(__file__).parent / "cli_script.py"
    outputs = []
    for seed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run([sys.executable, str(script)], capture_output=True, env=env,
                              check=True)
        outputs.append(proc.stdout)
    assert outputs[0] == outputs[1]
    assert len(outputs[0]) > 1000
