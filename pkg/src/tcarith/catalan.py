"""Generalized Catalan numbers over degree vectors, their identities, and a tree oracle.

A degree vector ``m = (m_2, ..., m_d)`` records how many nodes of out-degree
``2, ..., d`` an ordered rooted tree has. ``C_m`` counts those trees; its closed form is

    C_m = (sum_i i*m_i)! / ((sum_i (i-1)*m_i + 1)! * prod_i m_i!)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from typing import Iterator, Sequence

from .errors import BudgetExceeded, PreconditionError
from .exact import factorial

TREE_ORACLE_BUDGET = 14


@dataclass(frozen=True, order=False)
class DegreeVector:
    """Entries ``m_2..m_d`` for a fixed degree ``d >= 1`` (so ``len(entries) == d - 1``)."""

    entries: tuple[int, ...]

    def __init__(self, entries: Sequence[int]):
        es = tuple(int(e) for e in entries)
        if any(e < 0 for e in es):
            raise ValueError(f"degree vector entries must be natural: {es}")
        object.__setattr__(self, "entries", es)

    @classmethod
    def zero(cls, d: int) -> "DegreeVector":
        _check_degree(d)
        return cls((0,) * (d - 1))

    @classmethod
    def delta(cls, d: int, k: int) -> "DegreeVector":
        """Unit vector with a single 1 at out-degree ``k`` (``2 <= k <= d``)."""
        if not 2 <= k <= d:
            raise ValueError(f"delta index {k} outside 2..{d}")
        return cls(tuple(int(i == k) for i in range(2, d + 1)))

    @property
    def d(self) -> int:
        return len(self.entries) + 1

    def __getitem__(self, i: int) -> int:
        """Entry ``m_i`` for out-degree ``i`` (``2 <= i <= d``)."""
        if not 2 <= i <= self.d:
            raise IndexError(i)
        return self.entries[i - 2]

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def items(self) -> Iterator[tuple[int, int]]:
        return zip(range(2, self.d + 1), self.entries)

    @property
    def nodes(self) -> int:
        """Number of internal nodes, sum_i m_i."""
        return sum(self.entries)

    @property
    def size(self) -> int:
        """sum_i i*m_i, the number of edges of any tree with these degrees."""
        return sum(i * mi for i, mi in self.items())

    @property
    def weight(self) -> int:
        """sum_i (i-1)*m_i, one less than the number of leaves."""
        return sum((i - 1) * mi for i, mi in self.items())

    def is_zero(self) -> bool:
        return not any(self.entries)

    def _same_d(self, other: "DegreeVector") -> None:
        if self.d != other.d:
            raise ValueError(f"degree mismatch: {self.d} vs {other.d}")

    def __add__(self, other: "DegreeVector") -> "DegreeVector":
        self._same_d(other)
        return DegreeVector(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other: "DegreeVector") -> "DegreeVector":
        if not other <= self:
            raise ValueError(f"{other} is not <= {self}")
        return DegreeVector(a - b for a, b in zip(self.entries, other.entries))

    def __le__(self, other: "DegreeVector") -> bool:
        self._same_d(other)
        return all(a <= b for a, b in zip(self.entries, other.entries))

    def __lt__(self, other: "DegreeVector") -> bool:
        return self <= other and self != other

    def __ge__(self, other: "DegreeVector") -> bool:
        return other <= self

    def __gt__(self, other: "DegreeVector") -> bool:
        return other < self

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.entries)) + ")"


def _check_degree(d: int) -> None:
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"degree d must be >= 1, got {d!r}")


@lru_cache(maxsize=None)
def _catalan_entries(entries: tuple[int, ...]) -> int:
    m = DegreeVector(entries)
    num = factorial(m.size)
    den = factorial(m.weight + 1)
    for mi in m.entries:
        den *= factorial(mi)
    q, r = divmod(num, den)
    if r:
        raise AssertionError(f"C_{m} is not integral: {num}/{den}")
    return q


def catalan(m: DegreeVector | Sequence[int]) -> int:
    """Closed-form generalized Catalan number ``C_m``.

    >>> catalan(DegreeVector([3]))
    5
    """
    if not isinstance(m, DegreeVector):
        m = DegreeVector(m)
    return _catalan_entries(m.entries)


def vectors_below(m: DegreeVector) -> Iterator[DegreeVector]:
    """All ``m' <= m`` in lexicographic order."""
    for es in cartesian(*(range(mi + 1) for mi in m.entries)):
        yield DegreeVector(es)


def vectors_with_nodes_at_most(d: int, total: int) -> Iterator[DegreeVector]:
    """All degree vectors of degree ``d`` with ``sum m_i <= total``, lexicographically."""
    _check_degree(d)
    for es in cartesian(*(range(total + 1) for _ in range(d - 1))):
        if sum(es) <= total:
            yield DegreeVector(es)


def compositions_with_weight(d: int, n: int) -> list[DegreeVector]:
    """Every ``m`` of degree ``d`` with ``sum_i (i-1) m_i == n - 1``, lexicographically."""
    _check_degree(d)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    target = n - 1
    out: list[DegreeVector] = []

    def rec(i: int, left: int, acc: list[int]) -> None:
        if i > d:
            if left == 0:
                out.append(DegreeVector(acc))
            return
        for mi in range(left // (i - 1) + 1):
            acc.append(mi)
            rec(i + 1, left - (i - 1) * mi, acc)
            acc.pop()

    rec(2, target, [])
    return out


def splits(m: DegreeVector, k: int) -> Iterator[tuple[DegreeVector, ...]]:
    """Every ordered ``k``-tuple ``(m^1, ..., m^k)`` with ``m^1 + ... + m^k == m``."""
    if k < 0:
        raise ValueError(k)
    if k == 0:
        if m.is_zero():
            yield ()
        return
    if k == 1:
        yield (m,)
        return
    for first in vectors_below(m):
        for rest in splits(m - first, k - 1):
            yield (first,) + rest


def _tuple_product_sum(m: DegreeVector, k: int) -> int:
    total = 0
    for parts in splits(m, k):
        p = 1
        for part in parts:
            p *= catalan(part)
        total += p
    return total


def check_identity_cm(m: DegreeVector) -> bool:
    """``C_m == sum_{k=2..d} sum_{m^1+..+m^k = m - delta^k} C_{m^1} ... C_{m^k}``."""
    if m.is_zero():
        raise PreconditionError("the root-decomposition identity needs m != 0")
    rhs = 0
    for k in range(2, m.d + 1):
        dk = DegreeVector.delta(m.d, k)
        if dk <= m:
            rhs += _tuple_product_sum(m - dk, k)
    return catalan(m) == rhs


def check_identity_bin(m: DegreeVector) -> bool:
    """``sum_{m'+m''=m} (weight(m')+1) C_{m'} C_{m''} == (size(m)+1) C_m``."""
    lhs = 0
    for m1, m2 in splits(m, 2):
        lhs += (m1.weight + 1) * catalan(m1) * catalan(m2)
    return lhs == (m.size + 1) * catalan(m)


def k_tuple_closed_form(m: DegreeVector, k: int) -> Fraction:
    """Right-hand side of the k-fold convolution identity."""
    den = factorial(m.weight + k)
    for mi in m.entries:
        den *= factorial(mi)
    return Fraction(factorial(m.size + k - 1) * k, den)


def check_identity_k(m: DegreeVector, k: int) -> bool:
    """``sum_{m^1+..+m^k=m} prod C_{m^j} == (size+k-1)! k / ((weight+k)! prod m_i!)``."""
    if not 1 <= k <= m.d:
        raise PreconditionError(f"k must lie in 1..{m.d}, got {k}")
    return _tuple_product_sum(m, k) == k_tuple_closed_form(m, k)


def _multiset_permutations(counts: dict[int, int]) -> Iterator[tuple[int, ...]]:
    keys = sorted(counts)
    length = sum(counts.values())
    buf: list[int] = []
    left = dict(counts)

    def rec() -> Iterator[tuple[int, ...]]:
        if len(buf) == length:
            yield tuple(buf)
            return
        for key in keys:
            if left[key]:
                left[key] -= 1
                buf.append(key)
                yield from rec()
                buf.pop()
                left[key] += 1

    yield from rec()


def is_preorder_encoding(word: Sequence[int]) -> bool:
    """True iff ``word`` lists the out-degrees of some ordered tree in preorder."""
    open_slots = 1
    for deg in word:
        if open_slots == 0:
            return False
        open_slots += deg - 1
    return open_slots == 0 and len(word) > 0


def count_trees_oracle(m: DegreeVector, budget: int = TREE_ORACLE_BUDGET) -> int:
    """Count ordered rooted trees with degree vector ``m`` by brute force.

    Generates every arrangement of ``m_i`` copies of ``i`` and ``weight(m) + 1`` zeros
    and keeps the valid preorder out-degree strings.
    """
    if m.size > budget:
        raise BudgetExceeded(f"tree enumeration needs size <= {budget}, got {m.size}")
    counts = {0: m.weight + 1}
    for i, mi in m.items():
        if mi:
            counts[i] = mi
    return sum(1 for w in _multiset_permutations(counts) if is_preorder_encoding(w))
