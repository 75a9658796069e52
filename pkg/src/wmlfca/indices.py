"""Index terms naming Boolean combinations of fuzzy relations.

Terms are built from ``0``, primitive names, intersection, union and
complement, and denote relations under pointwise min / max / ``1 - x``.
Equality of terms is decided semantically over a small finite algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
import typing
from typing import Callable, Mapping, Sequence, TypeVar

T = TypeVar("T")


@dataclass(frozen=True)
class Zero:
    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True)
class Prim:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Inter:
    left: "IndexTerm"
    right: "IndexTerm"

    def __str__(self) -> str:
        return format_index(self)


@dataclass(frozen=True)
class Union:
    left: "IndexTerm"
    right: "IndexTerm"

    def __str__(self) -> str:
        return format_index(self)


@dataclass(frozen=True)
class Compl:
    arg: "IndexTerm"

    def __str__(self) -> str:
        return format_index(self)


IndexTerm = typing.Union[Zero, Prim, Inter, Union, Compl]


def primitives(term: IndexTerm) -> frozenset[str]:
    if isinstance(term, Prim):
        return frozenset([term.name])
    if isinstance(term, Zero):
        return frozenset()
    if isinstance(term, Compl):
        return primitives(term.arg)
    return primitives(term.left) | primitives(term.right)


def depth(term: IndexTerm) -> int:
    if isinstance(term, (Zero, Prim)):
        return 0
    if isinstance(term, Compl):
        return 1 + depth(term.arg)
    return 1 + max(depth(term.left), depth(term.right))


def format_index(term: IndexTerm, top: bool = True) -> str:
    """ASCII spelling: ``&`` intersection, ``|`` union, ``~`` complement.

    Binary nodes are always parenthesised below the top level so the text
    reparses to the same tree.
    """
    if isinstance(term, Zero):
        return "0"
    if isinstance(term, Prim):
        return term.name
    if isinstance(term, Compl):
        return "~" + format_index(term.arg, top=False)
    op = " & " if isinstance(term, Inter) else " | "
    text = format_index(term.left, top=False) + op + format_index(term.right, top=False)
    return text if top else f"({text})"


class Algebra:
    """A finite algebra with min/max-like meet, join, an involution and 0."""

    def __init__(self, name: str, carrier: Sequence[T], meet: Callable[[T, T], T],
                 join: Callable[[T, T], T], neg: Callable[[T], T], zero: T) -> None:
        self.name = name
        self.carrier = tuple(carrier)
        self.meet, self.join, self.neg, self.zero = meet, join, neg, zero


HALF = Fraction(1, 2)

KLEENE3 = Algebra("kleene", (Fraction(0), HALF, Fraction(1)), min, max, lambda x: 1 - x, Fraction(0))

# 2x2 with componentwise order and (a, b) -> (1-b, 1-a): both middle
# elements are fixed points and incomparable, so x & ~x <= y | ~y fails.
DEMORGAN4 = Algebra(
    "demorgan",
    ((0, 0), (0, 1), (1, 0), (1, 1)),
    lambda x, y: (min(x[0], y[0]), min(x[1], y[1])),
    lambda x, y: (max(x[0], y[0]), max(x[1], y[1])),
    lambda x: (1 - x[1], 1 - x[0]),
    (0, 0),
)

ALGEBRAS = {"kleene": KLEENE3, "demorgan": DEMORGAN4}


def evaluate(term: IndexTerm, env: Mapping[str, T], algebra: Algebra = KLEENE3) -> T:
    if isinstance(term, Zero):
        return algebra.zero
    if isinstance(term, Prim):
        return env[term.name]
    if isinstance(term, Compl):
        return algebra.neg(evaluate(term.arg, env, algebra))
    left = evaluate(term.left, env, algebra)
    right = evaluate(term.right, env, algebra)
    return algebra.meet(left, right) if isinstance(term, Inter) else algebra.join(left, right)


def za_equal(i: IndexTerm, j: IndexTerm, algebra: str = "kleene") -> bool:
    """Whether ``i`` and ``j`` denote the same relation in every context.

    The default checks every assignment into the three-element chain
    {0, 1/2, 1}; pointwise min/max/1-x on [0, 1] satisfies exactly the
    equations valid there. ``algebra="demorgan"`` checks the four-element
    De Morgan algebra instead, which refutes the Kleene law.
    """
    alg = ALGEBRAS[algebra]
    names = sorted(primitives(i) | primitives(j))
    for values in product(alg.carrier, repeat=len(names)):
        env = dict(zip(names, values))
        if evaluate(i, env, alg) != evaluate(j, env, alg):
            return False
    return True


@dataclass(frozen=True)
class ZAReport:
    kleene: bool
    demorgan: bool

    @property
    def disagree(self) -> bool:
        return self.kleene != self.demorgan


def za_report(i: IndexTerm, j: IndexTerm) -> ZAReport:
    return ZAReport(za_equal(i, j, "kleene"), za_equal(i, j, "demorgan"))


def normal_key(term: IndexTerm) -> tuple:
    """A hashable normal form used as a cache key.

    Complements are pushed to primitives, unions and intersections are
    flattened, sorted and deduplicated, and 0 / ~0 are absorbed. Terms with
    equal keys denote equal relations; the converse need not hold.
    """
    return _nf(term, False)


_ONE = ("one",)
_ZERO = ("zero",)


def _nf(term: IndexTerm, negated: bool) -> tuple:
    if isinstance(term, Zero):
        return _ONE if negated else _ZERO
    if isinstance(term, Prim):
        return ("neg", term.name) if negated else ("prim", term.name)
    if isinstance(term, Compl):
        return _nf(term.arg, not negated)
    is_inter = isinstance(term, Inter) != negated
    kind = "inter" if is_inter else "union"
    absorbing, neutral = (_ZERO, _ONE) if is_inter else (_ONE, _ZERO)
    parts: set[tuple] = set()
    for side in (term.left, term.right):
        part = _nf(side, negated)
        if part[0] == kind:
            parts.update(part[1])
        else:
            parts.add(part)
    if absorbing in parts:
        return absorbing
    parts.discard(neutral)
    if not parts:
        return neutral
    if len(parts) == 1:
        return next(iter(parts))
    return (kind, tuple(sorted(parts)))
