import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tcarith.errors import PreconditionError
from tcarith.formula import ResidueNormalForm, normalize_formula, normalize_term, parse
from tcarith.formula import ast as A
from tcarith.formula.mpoly import MPoly
from tcarith.formula.normal import Atom, Truth, expr_atoms
from oracles import eval_formula, eval_term

X = A.Var("x")


def term_of(src: str):
    return parse(f"{src} = 0").body.left


def test_half_table():
    t = A.Half(X)
    for r in (0, 1):
        [br] = normalize_term(t, {"x": r})
        assert br.guards == () and br.value == MPoly.var("x")


def test_monus_times_half_exhaustive():
    t = term_of("(x monus 3) * half(x)")
    c = 1
    for r in range(2):
        branches = normalize_term(t, {"x": r})
        for y in range(1 << 9):
            env = {"x": y}
            live = [b for b in branches if b.guard_holds(env)]
            assert len(live) == 1
            assert live[0].value.evaluate(env) == eval_term(t, {"x": (y << c) + r})


def test_deeper_terms_exhaustive():
    t = term_of("half(half(x monus 5) * 3 + x) monus half(x)")
    c = A.floor_depth(t)
    assert c == 2
    for r in range(1 << c):
        branches = normalize_term(t, {"x": r})
        for y in range(256):
            live = [b for b in branches if b.guard_holds({"x": y})]
            assert len(live) == 1
            assert live[0].value.evaluate({"x": y}) == eval_term(t, {"x": 4 * y + r})


def test_term_residue_checks():
    with pytest.raises(PreconditionError):
        normalize_term(A.Half(X), {"x": 2})
    with pytest.raises(PreconditionError):
        normalize_term(A.Half(A.Half(X)), {"x": 0}, depth=1)


def test_evenness_branches():
    nf = normalize_formula(parse("x = 2*half(x)"))
    assert nf.modulus == 2
    assert nf.branches[0].body == Truth(True)
    assert nf.branches[1].body == Truth(False)
    assert str(nf) == "free x; modulus 2\n[x = 0] true\n[x = 1] false"


def test_bodies_are_polynomial_inequalities():
    nf = normalize_formula(parse("exists u <= 8 . half(half(x monus u)) = u"))
    assert nf.modulus == 4
    for b in nf.branches:
        for at in expr_atoms(b.body):
            assert isinstance(at, Atom) and at.poly.is_integral()


@pytest.mark.parametrize("src", [
    "(x monus 5) >= 1",
    "exists u <= 8 . half(half(x)) * 3 <= x + u",
    "forall u <= 4 . exists v <= 3 . half(x + u) monus v >= u",
    "exists u <= 9 . half(2^u) <= x and x < 2^u",
    "not (half(x) = 7) or x < 3",
])
def test_equivalence_exhaustive(src):
    phi = parse(src)
    nf = normalize_formula(phi)
    run = nf.compile()
    for x in range(1 << 12):
        assert run(x) == eval_formula(phi.body, {"x": x}), x


def test_two_free_variables():
    phi = parse("vars x, y; half(x) monus y >= half(y)")
    nf = normalize_formula(phi)
    assert nf.modulus == 2 and len(nf.branches) == 4
    for x in range(64):
        for y in range(64):
            env = {"x": x, "y": y}
            assert nf.evaluate(env) == eval_formula(phi.body, env)


@pytest.mark.parametrize("src", ["x = 2*half(x)", "(x monus 2) * half(x) >= 6 and not (x = 9)",
                                 "exists u <= 3 . half(x) = u + 1"])
def test_collapse_is_equivalent(src):
    phi = parse(src)
    nf = normalize_formula(phi, collapse=True)
    for b in nf.branches:
        assert len(b.atoms()) <= 1
    for x in range(200):
        assert nf.evaluate({"x": x}) == eval_formula(phi.body, {"x": x})


def test_json_round_trip():
    for src in ("exists u <= 6 . exists v <= 6 . x = half(2^u * 3) + v * v",
                "vars x, y; forall u <= 3 . half(x + u) <= y"):
        nf = normalize_formula(parse(src))
        text = json.dumps(nf.to_json(), sort_keys=True)
        back = ResidueNormalForm.from_json(json.loads(text))
        assert back == nf
        assert json.dumps(back.to_json(), sort_keys=True) == text


@given(st.integers(0, 1 << 20))
def test_large_inputs_sampled(x):
    phi = parse("half(half(x * x monus 17)) >= 3*x + 1 or x = 4095")
    assert normalize_formula(phi).evaluate({"x": x}) == eval_formula(phi.body, {"x": x})
