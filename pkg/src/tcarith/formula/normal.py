"""Residue-class polynomial normal form for bounded formulas.

Fix ``c``, the deepest nesting of ``half``. Writing every variable that occurs under
``half`` as ``2^c y + sigma`` with ``sigma < 2^c`` turns each term into a
polynomial in ``y``, one per outcome of the ``monus`` case splits. Multiplying back
by a power of two gives integer polynomials in the original variables, so on each
residue class of the free variables the formula becomes a quantifier prefix followed
by a Boolean combination of inequalities ``P >= 0``.

Quantified variables under ``half`` cannot be split outside their quantifier, so the
body of a branch is a disjunction over their residues, each alternative guarded by a
:class:`Congruence` atom (``u = 2^c v + tau`` for some ``v <= bound // 2^c``). A
``2^u`` atom under ``half`` is split like a variable; its residue is pinned by
``2^u = r`` or, for ``r = 0``, by ``u >= c``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence, Union

from ..errors import PreconditionError
from .ast import (
    Add, And, BoolConst, Cmp, Const, Formula, FormulaAst, Half, Len, Monus, Mul, Not, Or, Pow2,
    Quant, Smash, Term, Var, floor_depth, subterms, terms_of, variables_under_half,
)
from .mpoly import MPoly

Guard = tuple[MPoly, bool]  # (g, True): g >= 0, (g, False): g < 0


@dataclass(frozen=True)
class Branch:
    """``value`` is the term's value whenever every guard holds."""

    guards: tuple[Guard, ...]
    value: MPoly

    def guard_holds(self, env: Mapping[str, int]) -> bool:
        return all((g.evaluate(env) >= 0) == pol for g, pol in self.guards)


def _is_pow2_name(name: str) -> bool:
    return name.startswith("2^")


class _TermNormalizer:
    """Bottom-up normalization of terms at a fixed residue assignment ``sigma``."""

    def __init__(self, sigma: Mapping[str, int]):
        self.sigma = dict(sigma)

    def lift(self, p: MPoly, k: int, j: int) -> MPoly:
        """Re-express ``p`` (in depth-``k`` quotients) in depth-``j`` quotients."""
        if j == k:
            return p
        step = 1 << (j - k)
        mapping = {v: step * MPoly.var(v) + ((self.sigma[v] >> k) & (step - 1))
                   for v in p.variables() if v in self.sigma}
        return p.substitute(mapping) if mapping else p

    def lift_branches(self, brs: list[Branch], k: int, j: int) -> list[Branch]:
        if j == k:
            return brs
        return [Branch(tuple((self.lift(g, k, j), pol) for g, pol in b.guards),
                       self.lift(b.value, k, j)) for b in brs]

    def run(self, t: Term) -> tuple[int, list[Branch]]:
        if isinstance(t, Const):
            return 0, [Branch((), MPoly.const(t.value))]
        if isinstance(t, (Var, Pow2)):
            return 0, [Branch((), MPoly.var(t.name))]
        if isinstance(t, Half):
            return self.half(t)
        if isinstance(t, (Add, Mul, Monus)):
            kl, left = self.run(t.left)
            kr, right = self.run(t.right)
            k = max(kl, kr)
            left = self.lift_branches(left, kl, k)
            right = self.lift_branches(right, kr, k)
            out: list[Branch] = []
            for bl, br in itertools.product(left, right):
                guards = _merge_guards(bl.guards, br.guards)
                if guards is None:
                    continue
                if isinstance(t, Add):
                    out.append(Branch(guards, bl.value + br.value))
                elif isinstance(t, Mul):
                    out.append(Branch(guards, bl.value * br.value))
                else:
                    out.extend(_monus_split(guards, bl.value - br.value))
            return k, out
        if isinstance(t, (Len, Smash)):
            raise PreconditionError("len and # must be rewritten away before normalization")
        raise TypeError(f"not a term: {t!r}")

    def half(self, t: Half) -> tuple[int, list[Branch]]:
        k, brs = self.run(t.arg)
        brs = self.lift_branches(brs, k, k + 1)
        for v in {v for b in brs for v in _branch_vars(b)}:
            if v not in self.sigma:
                raise PreconditionError(f"variable {v!r} occurs under half but has no residue")
        out = []
        for b in brs:
            rho = b.value.terms.get((), 0) % 2
            h = b.value - rho
            if not all(isinstance(c, int) and c % 2 == 0 for c in h.terms.values()):
                raise AssertionError(f"halving produced a non-integral polynomial from {b.value}")
            out.append(Branch(b.guards, MPoly({m: c // 2 for m, c in h.terms.items()})))
        return k + 1, out


def _branch_vars(b: Branch) -> set[str]:
    out = b.value.variables()
    for g, _ in b.guards:
        out |= g.variables()
    return out


def _merge_guards(a: tuple[Guard, ...], b: tuple[Guard, ...]) -> tuple[Guard, ...] | None:
    """Concatenate guard lists; None when they contradict syntactically."""
    seen = dict(a)
    out = list(a)
    for g, pol in b:
        if g in seen:
            if seen[g] != pol:
                return None
            continue
        seen[g] = pol
        out.append((g, pol))
    return tuple(out)


def _monus_split(guards: tuple[Guard, ...], diff: MPoly) -> list[Branch]:
    if diff.is_const():
        return [Branch(guards, diff if diff.const_value() >= 0 else MPoly())]
    known = dict(guards)
    if diff in known:
        return [Branch(guards, diff if known[diff] else MPoly())]
    return [Branch(guards + ((diff, True),), diff), Branch(guards + ((diff, False),), MPoly())]


def normalize_term(t: Term, sigma: Mapping[str, int], depth: int | None = None) -> list[Branch]:
    """Guarded polynomials for ``t`` on the residue class ``sigma`` modulo ``2^depth``.

    Variables listed in ``sigma`` are read as ``2^depth * y + sigma[v]``; each branch
    gives ``t`` as a polynomial in those ``y`` (same names), valid when its guards
    hold. The guards of the returned branches are mutually exclusive and cover every
    input. ``depth`` defaults to the ``half`` nesting depth of ``t``; every variable
    under ``half`` needs a residue.
    """
    c = floor_depth(t) if depth is None else depth
    if c < floor_depth(t):
        raise PreconditionError(f"depth {c} is below the half nesting depth {floor_depth(t)}")
    for v, r in sigma.items():
        if not 0 <= r < (1 << c):
            raise PreconditionError(f"residue {r} of {v!r} is not below 2^{c}")
    norm = _TermNormalizer(sigma)
    k, brs = norm.run(t)
    return norm.lift_branches(brs, k, c)


# Boolean structure over polynomial inequalities


@dataclass(frozen=True)
class Atom:
    """``poly >= 0``."""

    poly: MPoly


@dataclass(frozen=True)
class Congruence:
    """``var = modulus * v + residue`` for some ``v <= bound // modulus``."""

    var: str
    modulus: int
    residue: int
    bound: int


@dataclass(frozen=True)
class Conj:
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class Disj:
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class Truth:
    value: bool


Expr = Union[Atom, Congruence, Conj, Disj, Truth]
TRUE, FALSE = Truth(True), Truth(False)


def atom(p: MPoly) -> Expr:
    if p.is_const():
        return Truth(p.const_value() >= 0)
    return Atom(p)


def conj(args: Sequence[Expr]) -> Expr:
    flat: list[Expr] = []
    for a in args:
        if a == FALSE:
            return FALSE
        if a == TRUE:
            continue
        if isinstance(a, Conj):
            flat.extend(a.args)
        elif a not in flat:
            flat.append(a)
    if not flat:
        return TRUE
    return flat[0] if len(flat) == 1 else Conj(tuple(flat))


def disj(args: Sequence[Expr]) -> Expr:
    flat: list[Expr] = []
    for a in args:
        if a == TRUE:
            return TRUE
        if a == FALSE:
            continue
        if isinstance(a, Disj):
            flat.extend(a.args)
        elif a not in flat:
            flat.append(a)
    if not flat:
        return FALSE
    return flat[0] if len(flat) == 1 else Disj(tuple(flat))


def eval_expr(e: Expr, env: Mapping[str, int]) -> bool:
    if isinstance(e, Atom):
        return e.poly.evaluate(env) >= 0
    if isinstance(e, Congruence):
        val = env[e.var]
        return val % e.modulus == e.residue and (val - e.residue) // e.modulus <= e.bound // e.modulus
    if isinstance(e, Conj):
        return all(eval_expr(a, env) for a in e.args)
    if isinstance(e, Disj):
        return any(eval_expr(a, env) for a in e.args)
    return e.value


def expr_atoms(e: Expr) -> Iterator[Atom]:
    if isinstance(e, Atom):
        yield e
    elif isinstance(e, (Conj, Disj)):
        for a in e.args:
            yield from expr_atoms(a)


def expr_to_json(e: Expr) -> dict:
    if isinstance(e, Atom):
        return {"ge": e.poly.to_json()}
    if isinstance(e, Congruence):
        return {"cong": {"var": e.var, "modulus": e.modulus, "residue": e.residue, "bound": e.bound}}
    if isinstance(e, Conj):
        return {"and": [expr_to_json(a) for a in e.args]}
    if isinstance(e, Disj):
        return {"or": [expr_to_json(a) for a in e.args]}
    return {"const": e.value}


def expr_from_json(obj: dict) -> Expr:
    (key, val), = obj.items()
    if key == "ge":
        return Atom(MPoly.from_json(val))
    if key == "cong":
        return Congruence(val["var"], val["modulus"], val["residue"], val["bound"])
    if key == "and":
        return Conj(tuple(expr_from_json(a) for a in val))
    if key == "or":
        return Disj(tuple(expr_from_json(a) for a in val))
    if key == "const":
        return Truth(bool(val))
    raise ValueError(f"unknown normal-form node {key!r}")


def show_expr(e: Expr) -> str:
    if isinstance(e, Atom):
        return f"{e.poly} >= 0"
    if isinstance(e, Congruence):
        return f"{e.var} = {e.residue} mod {e.modulus}"
    if isinstance(e, Conj):
        return " and ".join(f"({show_expr(a)})" for a in e.args)
    if isinstance(e, Disj):
        return " or ".join(f"({show_expr(a)})" for a in e.args)
    return "true" if e.value else "false"


# prenex / negation normal form

_FLIP = {"<=": ">", "<": ">=", ">=": "<", ">": "<="}


def _prenex(phi: Formula, negate: bool = False) -> tuple[list[tuple[str, str, int]], Formula]:
    """Pull quantifiers to the front (names are distinct) and push negations to atoms."""
    if isinstance(phi, Cmp):
        if not negate:
            return [], phi
        if phi.op == "=":
            return [], Or((Cmp("<", phi.left, phi.right), Cmp(">", phi.left, phi.right)))
        return [], Cmp(_FLIP[phi.op], phi.left, phi.right)
    if isinstance(phi, BoolConst):
        return [], BoolConst(phi.value != negate)
    if isinstance(phi, Not):
        return _prenex(phi.arg, not negate)
    if isinstance(phi, (And, Or)):
        prefix: list[tuple[str, str, int]] = []
        parts = []
        for a in phi.args:
            q, m = _prenex(a, negate)
            prefix.extend(q)
            parts.append(m)
        as_and = isinstance(phi, And) != negate
        return prefix, (And if as_and else Or)(tuple(parts))
    if isinstance(phi, Quant):
        kind = phi.kind
        if negate:
            kind = "forall" if kind == "exists" else "exists"
        q, m = _prenex(phi.body, negate)
        return [(kind, phi.var, phi.bound)] + q, m
    raise TypeError(f"not a formula: {phi!r}")


def _back_to_original(p: MPoly, sigma: Mapping[str, int], c: int) -> MPoly:
    """``2^(c*D) * p((v - sigma_v) / 2^c)`` with ``D`` the total degree of ``p``."""
    if c == 0 or p.is_const():
        return p
    m = 1 << c
    mapping = {v: (MPoly.var(v) - sigma[v]) * Fraction(1, m) for v in p.variables() if v in sigma}
    d = max(sum(e for v, e in mono if v in sigma) for mono in p.terms)
    q = p.substitute(mapping) * (m ** d)
    if not q.is_integral():
        raise AssertionError(f"scaled polynomial {q} is not integral")
    return q


@dataclass(frozen=True)
class ResidueBranch:
    sigma: tuple[int, ...]
    prefix: tuple[tuple[str, str, int], ...]
    body: Expr

    def atoms(self) -> list[Atom]:
        out: list[Atom] = []
        for a in expr_atoms(self.body):
            if a not in out:
                out.append(a)
        return out

    def to_json(self) -> dict:
        return {"sigma": list(self.sigma),
                "prefix": [list(q) for q in self.prefix],
                "body": expr_to_json(self.body)}

    @classmethod
    def from_json(cls, obj: dict) -> "ResidueBranch":
        return cls(tuple(obj["sigma"]), tuple((k, v, int(b)) for k, v, b in obj["prefix"]),
                   expr_from_json(obj["body"]))


def _pow2_env(env: dict[str, int], quantified: Sequence[str]) -> dict[str, int]:
    for u in quantified:
        if u in env:
            env["2^" + u] = 1 << env[u]
    return env


def eval_branch(branch: ResidueBranch, env: Mapping[str, int]) -> bool:
    prefix = branch.prefix
    names = [v for _, v, _ in prefix]

    def rec(i: int, local: dict[str, int]) -> bool:
        if i == len(prefix):
            return eval_expr(branch.body, _pow2_env(dict(local), names))
        kind, var, bound = prefix[i]
        want = kind == "exists"
        for u in range(bound + 1):
            local[var] = u
            if rec(i + 1, local) == want:
                return want
        return not want

    return rec(0, dict(env))


class _Emitter:
    def __init__(self, free: Sequence[str], prefix: Sequence[tuple[str, str, int]]):
        self.names: dict[str, str] = {}
        for i, v in enumerate(free):
            self.names[v] = f"f{i}"
        for i, (_, v, _) in enumerate(prefix):
            self.names[v] = f"q{i}"
            self.names["2^" + v] = f"(1 << q{i})"

    def expr(self, e: Expr) -> str:
        if isinstance(e, Atom):
            return f"({e.poly.python_expr(self.names)} >= 0)"
        if isinstance(e, Congruence):
            v = self.names[e.var]
            return f"({v} % {e.modulus} == {e.residue})"
        if isinstance(e, Conj):
            return "(" + " and ".join(self.expr(a) for a in e.args) + ")"
        if isinstance(e, Disj):
            return "(" + " or ".join(self.expr(a) for a in e.args) + ")"
        return repr(e.value)


def compile_branch(branch: ResidueBranch, free: Sequence[str]) -> Callable[..., bool]:
    """``f(*free_values) -> bool`` evaluating the branch (quantifiers included)."""
    em = _Emitter(free, branch.prefix)
    src = em.expr(branch.body)
    for i in range(len(branch.prefix) - 1, -1, -1):
        kind, _, bound = branch.prefix[i]
        pick = "any" if kind == "exists" else "all"
        src = f"{pick}({src} for q{i} in range({bound + 1}))"
    args = ", ".join(f"f{i}" for i in range(len(free)))
    return eval(f"lambda {args}: {src}",
                {"__builtins__": {"any": any, "all": all, "range": range}, "Fraction": Fraction})


@dataclass(frozen=True)
class ResidueNormalForm:
    """Per residue vector of the free variables modulo ``2^depth``: prefix and body."""

    free: tuple[str, ...]
    depth: int
    branches: tuple[ResidueBranch, ...]

    @property
    def modulus(self) -> int:
        return 1 << self.depth

    def branch_for(self, env: Mapping[str, int]) -> ResidueBranch:
        m = self.modulus
        sigma = tuple(env[v] % m for v in self.free)
        idx = 0
        for r in sigma:
            idx = idx * m + r
        return self.branches[idx]

    def evaluate(self, env: Mapping[str, int]) -> bool:
        return eval_branch(self.branch_for(env), env)

    def compile(self) -> Callable[..., bool]:
        """Fast evaluator taking the free variables positionally."""
        fns = [compile_branch(b, self.free) for b in self.branches]
        m = self.modulus

        def run(*xs: int) -> bool:
            idx = 0
            for x in xs:
                idx = idx * m + x % m
            return fns[idx](*xs)

        return run

    def to_json(self) -> dict:
        return {"free": list(self.free), "depth": self.depth, "modulus": self.modulus,
                "branches": [b.to_json() for b in self.branches]}

    @classmethod
    def from_json(cls, obj: dict) -> "ResidueNormalForm":
        nf = cls(tuple(obj["free"]), int(obj["depth"]),
                 tuple(ResidueBranch.from_json(b) for b in obj["branches"]))
        if "modulus" in obj and obj["modulus"] != nf.modulus:
            raise ValueError("modulus does not match depth")
        return nf

    def __str__(self) -> str:
        lines = [f"free {', '.join(self.free)}; modulus {self.modulus}"]
        for b in self.branches:
            cls_ = ", ".join(f"{v} = {r}" for v, r in zip(self.free, b.sigma)) or "all inputs"
            prefix = " ".join(f"{k} {v} <= {bd} ." for k, v, bd in b.prefix)
            lines.append(f"[{cls_}] {prefix + ' ' if prefix else ''}{show_expr(b.body)}")
        return "\n".join(lines)


def _pow2_residues(bound: int, c: int) -> list[int]:
    """Possible values of ``2^u mod 2^c`` for ``u <= bound``."""
    m = 1 << c
    return sorted({(1 << u) % m for u in range(min(bound, c) + 1)})


class _FormulaNormalizer:
    def __init__(self, ast: FormulaAst):
        self.ast = ast
        self.prefix, self.matrix = _prenex(ast.body)
        self.bounds = {v: b for _, v, b in self.prefix}
        self.c = ast.floor_depth
        under = set()
        for t in terms_of(self.matrix):
            under |= variables_under_half(t)
            if any(isinstance(s, (Len, Smash)) for s in subterms(t)):
                raise PreconditionError("len and # must be rewritten away before normalization")
        self.split_bound = sorted(v for v in under if v not in ast.free)

    def residue_choices(self, v: str) -> list[int]:
        m = 1 << self.c
        if _is_pow2_name(v):
            return _pow2_residues(self.bounds[v[2:]], self.c)
        return list(range(min(m, self.bounds[v] + 1)))

    def pin(self, v: str, r: int) -> Expr:
        if _is_pow2_name(v):
            p = MPoly.var(v)
            exact = conj([atom(p - r), atom(r - p)])
            if r == 0:
                return disj([exact, atom(MPoly.var(v[2:]) - self.c)])
            return exact
        return Congruence(v, 1 << self.c, r, self.bounds[v])

    def translate(self, phi: Formula, sigma: Mapping[str, int]) -> Expr:
        if isinstance(phi, BoolConst):
            return Truth(phi.value)
        if isinstance(phi, And):
            return conj([self.translate(a, sigma) for a in phi.args])
        if isinstance(phi, Or):
            return disj([self.translate(a, sigma) for a in phi.args])
        if not isinstance(phi, Cmp):
            raise TypeError(f"unexpected node in matrix: {phi!r}")
        back = lambda p: atom(_back_to_original(p, sigma, self.c))  # noqa: E731
        left = normalize_term(phi.left, sigma, self.c)
        right = normalize_term(phi.right, sigma, self.c)
        cases = []
        for bl, br in itertools.product(left, right):
            guards = _merge_guards(bl.guards, br.guards)
            if guards is None:
                continue
            d = br.value - bl.value  # right - left
            if phi.op == "<=":
                rel = back(d)
            elif phi.op == "<":
                rel = back(d - 1)
            elif phi.op == ">=":
                rel = back(-d)
            elif phi.op == ">":
                rel = back(-d - 1)
            else:
                rel = conj([back(d), back(-d)])
            gs = [back(g) if pol else back(-g - 1) for g, pol in guards]
            cases.append(conj(gs + [rel]))
        return disj(cases)

    def run(self) -> ResidueNormalForm:
        m = 1 << self.c
        free = self.ast.free
        branches = []
        for sig_free in itertools.product(range(m), repeat=len(free)):
            alts = []
            choices = [self.residue_choices(v) for v in self.split_bound]
            for tau in itertools.product(*choices):
                sigma = dict(zip(free, sig_free))
                sigma.update(zip(self.split_bound, tau))
                body = self.translate(self.matrix, sigma)
                pins = [self.pin(v, r) for v, r in zip(self.split_bound, tau)]
                alts.append(conj(pins + [body]))
            branches.append(ResidueBranch(tuple(sig_free), tuple(self.prefix), disj(alts)))
        return ResidueNormalForm(tuple(free), self.c, tuple(branches))


def normalize_formula(ast: FormulaAst, collapse: bool = False) -> ResidueNormalForm:
    """Residue normal form of ``ast``; ``collapse`` turns each body into one inequality."""
    nf = _FormulaNormalizer(ast).run()
    if collapse:
        nf = ResidueNormalForm(nf.free, nf.depth, tuple(collapse_branch(b, nf.depth) for b in nf.branches))
    return nf


# single-inequality collapse

Prefix = list[tuple[str, str, int]]


class _Collapser:
    def __init__(self, depth: int):
        self.depth = depth
        self.count = 0

    def fresh(self) -> str:
        self.count += 1
        return f"$w{self.count}"

    @staticmethod
    def negate(q: Prefix, p: MPoly) -> tuple[Prefix, MPoly]:
        dual = [("forall" if k == "exists" else "exists", v, b) for k, v, b in q]
        return dual, -p - 1

    def both(self, a: tuple[Prefix, MPoly], b: tuple[Prefix, MPoly]) -> tuple[Prefix, MPoly]:
        (qa, f), (qb, g) = a, b
        w = self.fresh()
        wv = MPoly.var(w)
        return qa + qb + [("forall", w, 1)], wv * f + (1 - wv) * (1 - wv) * g

    def run(self, e: Expr) -> tuple[Prefix, MPoly]:
        if isinstance(e, Truth):
            return [], MPoly.const(0 if e.value else -1)
        if isinstance(e, Atom):
            return [], e.poly
        if isinstance(e, Congruence):
            v = self.fresh()
            diff = MPoly.var(e.var) - e.modulus * MPoly.var(v) - e.residue
            q, p = self.both(([], diff), ([], -diff))
            return [("exists", v, e.bound // e.modulus)] + q, p
        if isinstance(e, Conj):
            acc = self.run(e.args[0])
            for a in e.args[1:]:
                acc = self.both(acc, self.run(a))
            return acc
        if isinstance(e, Disj):
            acc = self.negate(*self.run(e.args[0]))
            for a in e.args[1:]:
                acc = self.both(acc, self.negate(*self.run(a)))
            return self.negate(*acc)
        raise TypeError(e)


def collapse_branch(b: ResidueBranch, depth: int) -> ResidueBranch:
    """``not (f >= 0)`` becomes ``-f - 1 >= 0``; ``f >= 0 and g >= 0`` becomes
    ``forall w <= 1 . w f + (1 - w)^2 g >= 0``; disjunction goes through De Morgan."""
    q, p = _Collapser(depth).run(b.body)
    return ResidueBranch(b.sigma, b.prefix + tuple(q), atom(p))
