"""Least satisfying input of a bounded formula, found from polynomial breakpoints.

On one residue class of ``x`` the normal form is a quantifier prefix over a Boolean
combination of polynomial inequalities. Fixing every quantified variable turns each
inequality into a univariate polynomial in ``x``, whose truth only changes at its
breakpoints. Merging the breakpoints of all inequalities under all quantifier
assignments cuts ``[0, a)`` into cells on which the whole formula is constant, so
testing the first point of the residue class in each cell, in order, finds the
least solution.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..errors import BudgetExceeded, PreconditionError
from .ast import FormulaAst
from .normal import ResidueBranch, ResidueNormalForm, normalize_formula
from .signs import breakpoints

DEFAULT_BUDGET = 1 << 16


@dataclass
class MinSatResult:
    value: int | None
    a: int
    modulus: int
    cells: int = 0
    assignments: int = 0
    per_residue: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"min": self.value, "bound": self.a, "modulus": self.modulus,
                "cells": self.cells, "assignments": self.assignments,
                "per_residue": {str(k): v for k, v in sorted(self.per_residue.items())}}


def _residue_breakpoints(branch: ResidueBranch, x: str, params: Mapping[str, int],
                         a: int, budget: int) -> tuple[set[int], int]:
    ranges = [range(bound + 1) for _, _, bound in branch.prefix]
    total = math.prod(len(r) for r in ranges)
    if total > budget:
        raise BudgetExceeded(f"{total} quantifier assignments exceed the budget of {budget}")
    names = [v for _, v, _ in branch.prefix]
    atoms = [at.poly.substitute(dict(params)) for at in branch.atoms()]
    atoms = [p for p in atoms if x in p.variables()]
    points: set[int] = set()
    for values in itertools.product(*ranges):
        env: dict[str, int] = dict(zip(names, values))
        for u, val in zip(names, values):
            env["2^" + u] = 1 << val
        for p in atoms:
            uni = p.substitute(env).to_univariate(x)
            points.update(breakpoints(uni, a))
    return points, total


def min_sat(phi: FormulaAst, a: int, params: Mapping[str, int] | None = None,
            budget: int = DEFAULT_BUDGET, extra_breakpoints: Iterable[int] = (),
            normal_form: ResidueNormalForm | None = None) -> int | None:
    """Least ``x`` in ``[0, a)`` satisfying ``phi`` (first free variable), or None."""
    return min_sat_report(phi, a, params, budget, extra_breakpoints, normal_form).value


def min_sat_report(phi: FormulaAst, a: int, params: Mapping[str, int] | None = None,
                   budget: int = DEFAULT_BUDGET, extra_breakpoints: Iterable[int] = (),
                   normal_form: ResidueNormalForm | None = None) -> MinSatResult:
    if a < 0:
        raise PreconditionError(f"bound must be natural, got {a}")
    if not phi.free:
        raise PreconditionError("formula has no free variable to minimize over")
    x, rest = phi.free[0], phi.free[1:]
    params = dict(params or {})
    missing = [v for v in rest if v not in params]
    if missing:
        raise PreconditionError(f"no value supplied for parameter(s) {missing}")
    nf = normal_form or normalize_formula(phi)
    m = nf.modulus
    run = nf.compile()
    extra = {w for w in extra_breakpoints if 0 <= w <= a}
    result = MinSatResult(None, a, m)
    for r in range(min(m, a)):
        branch = nf.branch_for({x: r, **params})
        pts, count = _residue_breakpoints(branch, x, params, a, budget)
        result.assignments += count
        cells = sorted(pts | extra | {0, a})
        result.cells += len(cells) - 1
        found = None
        for lo, hi in zip(cells, cells[1:]):
            cand = lo + (r - lo) % m
            if cand < hi and run(cand, *(params[v] for v in rest)):
                found = cand
                break
        result.per_residue[r] = found
        if found is not None and (result.value is None or found < result.value):
            result.value = found
    return result

