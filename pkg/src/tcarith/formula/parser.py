"""Recursive-descent parser for bounded formulas.

Grammar (``//`` starts a comment that runs to the end of the line)::

    file     = [ "vars" IDENT { "," IDENT } ";" ] [ "lengths" "<=" NAT ";" ] formula
    formula  = conj { "or" conj }
    conj     = unary { "and" unary }
    unary    = "not" unary
             | ( "exists" | "forall" ) IDENT ( "<=" | "<" ) NAT "." formula
             | "true" | "false"
             | "(" formula ")"
             | term CMP term
    CMP      = "<=" | "<" | ">=" | ">" | "=" | "!="
    term     = prod { ( "+" | "monus" ) prod }
    prod     = smash { "*" smash }
    smash    = factor { "#" factor }
    factor   = NAT | IDENT | "2" "^" IDENT | "pow2" "(" IDENT ")"
             | "half" "(" term ")" | "len" "(" term ")" | "(" term ")"

Free variables default to ``x`` when there is no ``vars`` header. Every other
identifier must be bound by an enclosing quantifier, bound names must be distinct,
and the exponent of ``2^u`` must be a quantified variable.

``len(t)`` and ``t # s`` are rewritten on the spot into bounded existentials over
fresh variables, which needs the ``lengths <= N`` header (or the ``length_bound``
argument): ``N`` must bound the bit length of every ``len`` argument for the inputs
of interest. ``a # b`` introduces a product variable bounded by ``N*N``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import FormulaSyntaxError
from .ast import (
    Add, And, BoolConst, Cmp, Const, Formula, FormulaAst, Half, Monus, Mul, Not, Or, Pow2,
    Quant, Term, Var,
)

KEYWORDS = {"exists", "forall", "and", "or", "not", "monus", "half", "len", "pow2",
            "vars", "lengths", "true", "false"}
CMP_OPS = ("<=", "<", ">=", ">", "=", "!=")
TERM_OPS = ("+", "monus", "*", "#", "^")

_TOKEN = re.compile(r"""
    (?P<ws>\s+|//[^\n]*)
  | (?P<nat>\d+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op><=|>=|!=|[<>=+*#^().,;])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # "nat" | "ident" | "kw" | "op" | "eof"
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    out, pos = [], 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {src[pos]!r}", pos, src)
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            if kind == "ident" and text in KEYWORDS:
                kind = "kw"
            out.append(Token(kind, text, pos))
        pos = m.end()
    out.append(Token("eof", "", len(src.rstrip())))
    return out


@dataclass
class _Pending:
    """A ``len``/``#`` occurrence awaiting its existential wrapper at atom level."""

    var: str
    arg: Term
    smash_with: Term | None = None
    product: str | None = None
    other: str | None = None


class _Parser:
    def __init__(self, src: str, length_bound: int | None):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0
        self.length_bound = length_bound
        self.free: tuple[str, ...] = ("x",)
        self.scope: list[str] = []
        self.bound_names: set[str] = set()
        self.pending: list[_Pending] = []
        self.fresh = 0

    # token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Token | None = None) -> FormulaSyntaxError:
        tok = tok or self.tok
        return FormulaSyntaxError(msg, tok.pos, self.src)

    def at(self, *texts: str) -> bool:
        return self.tok.kind in ("op", "kw") and self.tok.text in texts

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        t = self.tok
        self.i += 1
        return t

    def nat(self) -> int:
        if self.tok.kind != "nat":
            raise self.error(f"expected a natural number, found {self.tok.text or 'end of input'!r}")
        v = int(self.tok.text)
        self.i += 1
        return v

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            raise self.error(f"expected an identifier, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    # grammar

    def file(self) -> FormulaAst:
        if self.at("vars"):
            self.i += 1
            names = [self.ident()]
            while self.at(","):
                self.i += 1
                names.append(self.ident())
            self.expect(";")
            seen = set()
            for t in names:
                if t.text in seen:
                    raise self.error(f"free variable {t.text!r} declared twice", t)
                seen.add(t.text)
            self.free = tuple(t.text for t in names)
        if self.at("lengths"):
            self.i += 1
            self.expect("<=")
            self.length_bound = self.nat()
            self.expect(";")
        body = self.formula()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r} after the end of the formula")
        return FormulaAst(self.free, body, self.src)

    def formula(self) -> Formula:
        args = [self.conj()]
        while self.at("or"):
            self.i += 1
            args.append(self.conj())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conj(self) -> Formula:
        args = [self.unary()]
        while self.at("and"):
            self.i += 1
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self) -> Formula:
        if self.at("not"):
            self.i += 1
            return Not(self.unary())
        if self.at("exists", "forall"):
            return self.quant()
        if self.at("true", "false"):
            v = self.tok.text == "true"
            self.i += 1
            return BoolConst(v)
        if self.at("("):
            return self.parenthesized()
        return self.atom()

    def parenthesized(self) -> Formula:
        # "(" may open a subformula or the first operand of a comparison
        start, saved = self.i, (len(self.pending), self.fresh, set(self.bound_names))
        try:
            self.i += 1
            inner = self.formula()
            self.expect(")")
            if not (self.at(*CMP_OPS) or self.at(*TERM_OPS)):
                return inner
            first_err = self.error("parenthesized formula used as a term")
        except FormulaSyntaxError as exc:
            first_err = exc
        self.i = start
        del self.pending[saved[0]:]
        self.fresh = saved[1]
        self.bound_names = saved[2]
        try:
            return self.atom()
        except FormulaSyntaxError as exc:
            raise exc if exc.pos >= first_err.pos else first_err

    def quant(self) -> Formula:
        kind = self.tok.text
        self.i += 1
        name_tok = self.ident()
        name = name_tok.text
        if name in self.free or name in self.bound_names:
            raise self.error(f"variable {name!r} is already in use; bound names must be fresh", name_tok)
        if not self.at("<=", "<"):
            raise self.error(f"quantifier over {name!r} needs an explicit bound '<= N'")
        strict = self.tok.text == "<"
        self.i += 1
        bound_tok = self.tok
        bound = self.nat()
        if strict:
            if bound == 0:
                raise self.error(f"empty range '< 0' for {name!r}", bound_tok)
            bound -= 1
        self.expect(".")
        self.bound_names.add(name)
        self.scope.append(name)
        try:
            body = self.formula()
        finally:
            self.scope.pop()
        return Quant(kind, name, bound, body)

    def atom(self) -> Formula:
        mark = len(self.pending)
        left = self.term()
        if not self.at(*CMP_OPS):
            found = self.tok.text or "end of input"
            raise self.error(f"expected a comparison operator, found {found!r}")
        op = self.tok.text
        self.i += 1
        right = self.term()
        phi: Formula = Not(Cmp("=", left, right)) if op == "!=" else Cmp(op, left, right)
        deferred = self.pending[mark:]
        del self.pending[mark:]
        return _wrap_lengths(phi, deferred, self.length_bound)

    def term(self) -> Term:
        t = self.prod()
        while self.at("+", "monus"):
            op = self.tok.text
            self.i += 1
            rhs = self.prod()
            t = Add(t, rhs) if op == "+" else Monus(t, rhs)
        return t

    def prod(self) -> Term:
        t = self.smash()
        while self.at("*"):
            self.i += 1
            t = Mul(t, self.smash())
        return t

    def smash(self) -> Term:
        t = self.factor()
        while self.at("#"):
            hash_tok = self.tok
            self.i += 1
            rhs = self.factor()
            t = self.defer_smash(t, rhs, hash_tok)
        return t

    def factor(self) -> Term:
        tok = self.tok
        if tok.kind == "nat":
            if tok.text == "2" and self.peek().text == "^":
                self.i += 2
                return Pow2(self.exponent())
            self.i += 1
            return Const(int(tok.text))
        if tok.kind == "ident":
            self.i += 1
            if tok.text not in self.free and tok.text not in self.scope:
                raise self.error(f"unbound variable {tok.text!r}", tok)
            return Var(tok.text)
        if self.at("pow2"):
            self.i += 1
            self.expect("(")
            u = self.exponent()
            self.expect(")")
            return Pow2(u)
        if self.at("half", "len"):
            self.i += 1
            self.expect("(")
            arg = self.term()
            self.expect(")")
            return Half(arg) if tok.text == "half" else self.defer_len(arg, tok)
        if self.at("("):
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        raise self.error(f"expected a term, found {tok.text or 'end of input'!r}")

    def exponent(self) -> str:
        tok = self.ident()
        if tok.text not in self.scope:
            raise self.error(f"exponent {tok.text!r} must be a quantified variable in scope", tok)
        return tok.text

    # len / smash rewriting

    def _fresh(self) -> str:
        self.fresh += 1
        return f"${self.fresh}"

    def _need_bound(self, tok: Token) -> None:
        if self.length_bound is None:
            raise self.error(f"{tok.text!r} needs a length bound: add 'lengths <= N;' to the header", tok)

    def defer_len(self, arg: Term, tok: Token) -> Term:
        self._need_bound(tok)
        u = self._fresh()
        self.pending.append(_Pending(u, arg))
        return Var(u)

    def defer_smash(self, left: Term, right: Term, tok: Token) -> Term:
        self._need_bound(tok)
        u, v, w = self._fresh(), self._fresh(), self._fresh()
        self.pending.append(_Pending(u, left, smash_with=right, product=w, other=v))
        return Pow2(w)


def _len_is(u: str, t: Term) -> Formula:
    """``len(t) = u`` as ``half(2^u) <= t < 2^u``."""
    return And((Cmp("<=", Half(Pow2(u)), t), Cmp("<", t, Pow2(u))))


def _wrap_lengths(phi: Formula, deferred: list[_Pending], bound: int | None) -> Formula:
    for p in reversed(deferred):
        if p.smash_with is None:
            phi = Quant("exists", p.var, bound, And((_len_is(p.var, p.arg), phi)))
        else:
            body = And((_len_is(p.var, p.arg), _len_is(p.other, p.smash_with),
                        Cmp("=", Var(p.product), Mul(Var(p.var), Var(p.other))), phi))
            phi = Quant("exists", p.var, bound,
                        Quant("exists", p.other, bound,
                              Quant("exists", p.product, bound * bound, body)))
    return phi


def parse(src: str, length_bound: int | None = None) -> FormulaAst:
    """Parse a formula file; raises :class:`FormulaSyntaxError` with a character offset."""
    return _Parser(src, length_bound).file()

