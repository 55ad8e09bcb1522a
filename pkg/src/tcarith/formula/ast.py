"""Terms and formulas over the naturals with truncated subtraction and halving.

Terms are built from natural constants, variables, ``+``, ``*``, ``monus``
(``x monus y = max(x - y, 0)``), ``half(t) = floor(t/2)`` and ``2^u`` for a bounded
quantified variable ``u``. ``len(t)`` (bit length) and ``t # s`` (``2^(len t * len s)``)
can be evaluated here, but the parser rewrites them into bounded quantifiers and the
normalizer refuses them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Pow2:
    var: str

    @property
    def name(self) -> str:
        return f"2^{self.var}"


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Mul:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Monus:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Half:
    arg: "Term"


@dataclass(frozen=True)
class Len:
    arg: "Term"


@dataclass(frozen=True)
class Smash:
    left: "Term"
    right: "Term"


Term = Union[Const, Var, Pow2, Add, Mul, Monus, Half, Len, Smash]

COMPARISONS = ("<=", "<", ">=", ">", "=")


@dataclass(frozen=True)
class Cmp:
    op: str
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Quant:
    kind: str  # "exists" | "forall"
    var: str
    bound: int
    body: "Formula"


@dataclass(frozen=True)
class BoolConst:
    value: bool


Formula = Union[Cmp, Not, And, Or, Quant, BoolConst]


@dataclass(frozen=True)
class FormulaAst:
    """A parsed formula together with its declared free variables."""

    free: tuple[str, ...]
    body: Formula
    src: str = field(default="", compare=False)

    @property
    def floor_depth(self) -> int:
        return max((floor_depth(t) for t in terms_of(self.body)), default=0)

    @property
    def monus_count(self) -> int:
        return sum(monus_count(t) for t in terms_of(self.body))

    def quantifiers(self) -> list[Quant]:
        return [q for q in _walk(self.body) if isinstance(q, Quant)]

    def evaluate(self, env: Mapping[str, int]) -> bool:
        missing = [v for v in self.free if v not in env]
        if missing:
            raise KeyError(f"no value for free variable(s) {missing}")
        return eval_formula(self.body, dict(env))


def _walk(phi: Formula) -> Iterator[Formula]:
    yield phi
    if isinstance(phi, Not):
        yield from _walk(phi.arg)
    elif isinstance(phi, (And, Or)):
        for a in phi.args:
            yield from _walk(a)
    elif isinstance(phi, Quant):
        yield from _walk(phi.body)


def terms_of(phi: Formula) -> Iterator[Term]:
    for node in _walk(phi):
        if isinstance(node, Cmp):
            yield node.left
            yield node.right


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, (Add, Mul, Monus, Smash)):
        yield from subterms(t.left)
        yield from subterms(t.right)
    elif isinstance(t, (Half, Len)):
        yield from subterms(t.arg)


def floor_depth(t: Term) -> int:
    """Nesting depth of ``half``."""
    if isinstance(t, Half):
        return 1 + floor_depth(t.arg)
    if isinstance(t, (Add, Mul, Monus, Smash)):
        return max(floor_depth(t.left), floor_depth(t.right))
    if isinstance(t, Len):
        return floor_depth(t.arg)
    return 0


def monus_count(t: Term) -> int:
    return sum(1 for s in subterms(t) if isinstance(s, Monus))


def term_variables(t: Term) -> set[str]:
    """Variable names, with ``2^u`` atoms reported under their own name ``"2^u"``."""
    out = set()
    for s in subterms(t):
        if isinstance(s, (Var, Pow2)):
            out.add(s.name)
    return out


def variables_under_half(t: Term, inside: bool = False) -> set[str]:
    if isinstance(t, (Var, Pow2)):
        return {t.name} if inside else set()
    if isinstance(t, Half):
        return variables_under_half(t.arg, True)
    if isinstance(t, (Add, Mul, Monus, Smash)):
        return variables_under_half(t.left, inside) | variables_under_half(t.right, inside)
    if isinstance(t, Len):
        return variables_under_half(t.arg, inside)
    return set()


def eval_term(t: Term, env: Mapping[str, int]) -> int:
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Pow2):
        return 1 << env[t.var]
    if isinstance(t, Add):
        return eval_term(t.left, env) + eval_term(t.right, env)
    if isinstance(t, Mul):
        return eval_term(t.left, env) * eval_term(t.right, env)
    if isinstance(t, Monus):
        return max(eval_term(t.left, env) - eval_term(t.right, env), 0)
    if isinstance(t, Half):
        return eval_term(t.arg, env) >> 1
    if isinstance(t, Len):
        return eval_term(t.arg, env).bit_length()
    if isinstance(t, Smash):
        return 1 << (eval_term(t.left, env).bit_length() * eval_term(t.right, env).bit_length())
    raise TypeError(f"not a term: {t!r}")


def compare(op: str, a: int, b: int) -> bool:
    if op == "<=":
        return a <= b
    if op == "<":
        return a < b
    if op == ">=":
        return a >= b
    if op == ">":
        return a > b
    if op == "=":
        return a == b
    raise ValueError(op)


def eval_formula(phi: Formula, env: dict[str, int]) -> bool:
    if isinstance(phi, Cmp):
        return compare(phi.op, eval_term(phi.left, env), eval_term(phi.right, env))
    if isinstance(phi, Not):
        return not eval_formula(phi.arg, env)
    if isinstance(phi, And):
        return all(eval_formula(a, env) for a in phi.args)
    if isinstance(phi, Or):
        return any(eval_formula(a, env) for a in phi.args)
    if isinstance(phi, BoolConst):
        return phi.value
    if isinstance(phi, Quant):
        want = phi.kind == "exists"
        for u in range(phi.bound + 1):
            if eval_formula(phi.body, {**env, phi.var: u}) == want:
                return want
        return not want
    raise TypeError(f"not a formula: {phi!r}")


def show_term(t: Term) -> str:
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Pow2):
        return f"2^{t.var}"
    if isinstance(t, Add):
        return f"({show_term(t.left)} + {show_term(t.right)})"
    if isinstance(t, Mul):
        return f"({show_term(t.left)} * {show_term(t.right)})"
    if isinstance(t, Monus):
        return f"({show_term(t.left)} monus {show_term(t.right)})"
    if isinstance(t, Half):
        return f"half({show_term(t.arg)})"
    if isinstance(t, Len):
        return f"len({show_term(t.arg)})"
    if isinstance(t, Smash):
        return f"({show_term(t.left)} # {show_term(t.right)})"
    raise TypeError(t)


def show(phi: Formula) -> str:
    if isinstance(phi, Cmp):
        return f"{show_term(phi.left)} {phi.op} {show_term(phi.right)}"
    if isinstance(phi, Not):
        return f"not ({show(phi.arg)})"
    if isinstance(phi, And):
        return " and ".join(f"({show(a)})" for a in phi.args)
    if isinstance(phi, Or):
        return " or ".join(f"({show(a)})" for a in phi.args)
    if isinstance(phi, BoolConst):
        return "true" if phi.value else "false"
    if isinstance(phi, Quant):
        return f"{phi.kind} {phi.var} <= {phi.bound} . ({show(phi.body)})"
    raise TypeError(phi)


class _PyEmitter:
    """Translate an AST into one Python expression over safe local names."""

    def __init__(self) -> None:
        self.names: dict[str, str] = {}

    def name(self, v: str) -> str:
        if v not in self.names:
            self.names[v] = f"v{len(self.names)}"
        return self.names[v]

    def term(self, t: Term) -> str:
        if isinstance(t, Const):
            return repr(t.value)
        if isinstance(t, Var):
            return self.name(t.name)
        if isinstance(t, Pow2):
            return f"(1 << {self.name(t.var)})"
        if isinstance(t, Add):
            return f"({self.term(t.left)} + {self.term(t.right)})"
        if isinstance(t, Mul):
            return f"({self.term(t.left)} * {self.term(t.right)})"
        if isinstance(t, Monus):
            return f"max({self.term(t.left)} - {self.term(t.right)}, 0)"
        if isinstance(t, Half):
            return f"({self.term(t.arg)} >> 1)"
        if isinstance(t, Len):
            return f"({self.term(t.arg)}).bit_length()"
        if isinstance(t, Smash):
            return f"(1 << (({self.term(t.left)}).bit_length() * ({self.term(t.right)}).bit_length()))"
        raise TypeError(t)

    def formula(self, phi: Formula) -> str:
        if isinstance(phi, Cmp):
            op = "==" if phi.op == "=" else phi.op
            return f"({self.term(phi.left)} {op} {self.term(phi.right)})"
        if isinstance(phi, Not):
            return f"(not {self.formula(phi.arg)})"
        if isinstance(phi, And):
            return "(" + " and ".join(self.formula(a) for a in phi.args) + ")"
        if isinstance(phi, Or):
            return "(" + " or ".join(self.formula(a) for a in phi.args) + ")"
        if isinstance(phi, BoolConst):
            return repr(phi.value)
        if isinstance(phi, Quant):
            pick = "any" if phi.kind == "exists" else "all"
            v = self.name(phi.var)
            return f"{pick}({self.formula(phi.body)} for {v} in range({phi.bound + 1}))"
        raise TypeError(phi)


def compile_formula(ast: FormulaAst):
    """Return ``f(*free_values) -> bool``, a compiled equivalent of :meth:`FormulaAst.evaluate`."""
    em = _PyEmitter()
    args = [em.name(v) for v in ast.free]
    body = em.formula(ast.body)
    src = f"lambda {', '.join(args)}: {body}"
    return eval(src, {"__builtins__": {"any": any, "all": all, "max": max, "range": range}})
