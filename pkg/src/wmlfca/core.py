"""Fuzzy formal contexts over exact rationals.

Degrees are :class:`fractions.Fraction` values in [0, 1]. Crisp subsets of a
domain are stored as bitmasks over the domain's index order, which keeps the
cut operators and the model checker cheap on small contexts.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Literal, Mapping, NamedTuple, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)

Degree = Fraction
Matrix = tuple[tuple[Fraction, ...], ...]


class DegreeError(ValueError):
    """A value could not be read as a degree in [0, 1]."""


class SortError(ValueError):
    """An element, set or formula was used on the wrong side of a context."""


class Sort(enum.Enum):
    """The two sorts: objects (s1) and properties/attributes (s2)."""

    OBJECT = "o"
    PROPERTY = "p"

    @property
    def other(self) -> "Sort":
        return Sort.PROPERTY if self is Sort.OBJECT else Sort.OBJECT

    @classmethod
    def parse(cls, text: str) -> "Sort":
        key = text.strip().lower()
        aliases = {"o": cls.OBJECT, "s1": cls.OBJECT, "object": cls.OBJECT,
                   "p": cls.PROPERTY, "s2": cls.PROPERTY, "property": cls.PROPERTY}
        if key not in aliases:
            raise ValueError(f"unknown sort {text!r} (expected o or p)")
        return aliases[key]


_DEGREE_RE = re.compile(r"^\s*(\d+(?:\.\d*)?|\.\d+)\s*(?:/\s*(\d+)\s*)?$")


def degree(value: object) -> Fraction:
    """Read ``value`` as an exact degree.

    Strings may be decimals (``"0.3"`` is exactly 3/10) or ``num/den``
    fractions. Floats are read through their shortest repr, so ``0.3`` also
    becomes 3/10.
    """
    if isinstance(value, bool):
        raise DegreeError(f"not a degree: {value!r}")
    if isinstance(value, Fraction):
        d = value
    elif isinstance(value, int):
        d = Fraction(value)
    elif isinstance(value, float):
        d = Fraction(repr(value))
    elif isinstance(value, str):
        match = _DEGREE_RE.match(value)
        if match is None:
            raise DegreeError(f"malformed degree {value!r}")
        num, den = match.groups()
        if den is not None:
            if "." in num:
                raise DegreeError(f"malformed fraction {value!r}")
            if int(den) == 0:
                raise DegreeError(f"zero denominator in {value!r}")
            d = Fraction(int(num), int(den))
        else:
            d = Fraction(num)
    else:
        raise DegreeError(f"not a degree: {value!r}")
    if not ZERO <= d <= ONE:
        raise DegreeError(f"degree {value!r} outside [0, 1]")
    return d


def format_degree(d: Fraction) -> str:
    """Shortest exact spelling: a decimal when it terminates, else ``num/den``."""
    if d.denominator == 1:
        return str(d.numerator)
    den = d.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{d.numerator}/{d.denominator}"
    places = max(twos, fives)
    scaled = d * 10**places
    text = str(scaled.numerator).rjust(places + 1, "0")
    return f"{text[:-places]}.{text[-places:]}"


def residuum(a: Fraction, b: Fraction) -> Fraction:
    """Lukasiewicz implication: 1 if a <= b, else 1 - a + b."""
    return ONE if a <= b else ONE - a + b


def bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def full_mask(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True)
class CrispSet:
    """A subset of one domain of a context, stored as a bitmask."""

    sort: Sort
    universe: tuple[str, ...]
    mask: int

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask >> len(self.universe):
            raise ValueError("mask has bits outside the universe")

    @classmethod
    def of(cls, sort: Sort, universe: Sequence[str], elements: Iterable[str]) -> "CrispSet":
        universe = tuple(universe)
        index = {name: i for i, name in enumerate(universe)}
        mask = 0
        for e in elements:
            if e not in index:
                raise SortError(f"{e!r} is not in the {sort.name.lower()} domain")
            mask |= 1 << index[e]
        return cls(sort, universe, mask)

    @property
    def elements(self) -> frozenset[str]:
        return frozenset(self.universe[i] for i in bits(self.mask))

    def sorted(self) -> list[str]:
        return [self.universe[i] for i in bits(self.mask)]

    def complement(self) -> "CrispSet":
        return CrispSet(self.sort, self.universe, full_mask(len(self.universe)) & ~self.mask)

    def issubset(self, other: "CrispSet") -> bool:
        self._check_same(other)
        return self.mask & ~other.mask == 0

    def union(self, other: "CrispSet") -> "CrispSet":
        self._check_same(other)
        return CrispSet(self.sort, self.universe, self.mask | other.mask)

    def intersection(self, other: "CrispSet") -> "CrispSet":
        self._check_same(other)
        return CrispSet(self.sort, self.universe, self.mask & other.mask)

    def _check_same(self, other: "CrispSet") -> None:
        if self.sort is not other.sort or self.universe != other.universe:
            raise SortError("sets live in different domains")

    def __contains__(self, name: object) -> bool:
        try:
            i = self.universe.index(name)  # type: ignore[arg-type]
        except ValueError:
            return False
        return bool(self.mask >> i & 1)

    def __iter__(self) -> Iterator[str]:
        return iter(self.sorted())

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __str__(self) -> str:
        return "{" + ", ".join(self.sorted()) + "}"


@dataclass(frozen=True)
class FuzzySet:
    """Membership table over one domain of a context."""

    sort: Sort
    universe: tuple[str, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(self.universe):
            raise ValueError("membership must be defined on the whole universe")

    def __getitem__(self, name: str) -> Fraction:
        return self.values[self.universe.index(name)]

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.universe, self.values))

    def __str__(self) -> str:
        inner = ", ".join(f"{u}: {format_degree(v)}" for u, v in zip(self.universe, self.values))
        return "{" + inner + "}"


def _check_names(names: Sequence[str], what: str) -> tuple[str, ...]:
    names = tuple(str(n) for n in names)
    if not names:
        raise ValueError(f"{what} must be non-empty")
    if len(set(names)) != len(names):
        dup = sorted({n for n in names if names.count(n) > 1})
        raise ValueError(f"duplicate {what}: {', '.join(dup)}")
    return names


def as_matrix(rows: Sequence[Sequence[object]], n_rows: int, n_cols: int) -> Matrix:
    if len(rows) != n_rows or any(len(r) != n_cols for r in rows):
        raise ValueError(f"incidence must be {n_rows}x{n_cols}")
    return tuple(tuple(degree(v) for v in row) for row in rows)


@dataclass(frozen=True)
class FuzzyContext:
    """Objects ``G``, attributes ``M`` and a degree-valued incidence on G x M.

    ``incidence[i][j]`` is the degree relating ``objects[i]`` and
    ``attributes[j]``. Cells may be given as anything :func:`degree` accepts.
    """

    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    incidence: Matrix

    def __post_init__(self) -> None:
        objects = _check_names(self.objects, "objects")
        attributes = _check_names(self.attributes, "attributes")
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "attributes", attributes)
        object.__setattr__(self, "incidence", as_matrix(self.incidence, len(objects), len(attributes)))

    @classmethod
    def from_table(cls, table: Mapping[str, Mapping[str, object]]) -> "FuzzyContext":
        objects = list(table)
        attributes = list(next(iter(table.values())))
        return cls(tuple(objects), tuple(attributes),
                   tuple(tuple(table[g][m] for m in attributes) for g in objects))

    def value(self, g: str, m: str) -> Fraction:
        return self.incidence[self.objects.index(g)][self.attributes.index(m)]

    def universe(self, sort: Sort) -> tuple[str, ...]:
        return self.objects if sort is Sort.OBJECT else self.attributes

    def size(self, sort: Sort) -> int:
        return len(self.universe(sort))

    def crisp(self, sort: Sort, elements: Iterable[str] = ()) -> CrispSet:
        return CrispSet.of(sort, self.universe(sort), elements)

    def full(self, sort: Sort) -> CrispSet:
        return CrispSet(sort, self.universe(sort), full_mask(self.size(sort)))

    def distribution(self, pivot: str, sort: Sort) -> tuple[Fraction, ...]:
        """The possibility distribution of ``pivot`` over the other domain."""
        if sort is Sort.OBJECT:
            return self.incidence[self.objects.index(pivot)]
        j = self.attributes.index(pivot)
        return tuple(row[j] for row in self.incidence)

    def relation_for(self, index: object) -> Matrix:
        if index is not None:
            raise SortError("indexed modality evaluated over a single-relation context")
        return self.incidence

    def complement(self) -> "FuzzyContext":
        return complement_context(self)

    def is_crisp(self) -> bool:
        return all(v in (ZERO, ONE) for row in self.incidence for v in row)


def complement_context(ctx: FuzzyContext) -> FuzzyContext:
    """Same domains, every incidence value replaced by ``1 - value``."""
    return FuzzyContext(ctx.objects, ctx.attributes,
                        tuple(tuple(ONE - v for v in row) for row in ctx.incidence))


class Measures(NamedTuple):
    possibility: Fraction
    necessity: Fraction
    guaranteed: Fraction
    potential: Fraction


def possibility(values: Sequence[Fraction], mask: int) -> Fraction:
    return max((v for i, v in enumerate(values) if mask >> i & 1), default=ZERO)


def necessity(values: Sequence[Fraction], mask: int) -> Fraction:
    return min((ONE - v for i, v in enumerate(values) if not mask >> i & 1), default=ONE)


def guaranteed(values: Sequence[Fraction], mask: int) -> Fraction:
    return min((v for i, v in enumerate(values) if mask >> i & 1), default=ONE)


def potential(values: Sequence[Fraction], mask: int) -> Fraction:
    return max((ONE - v for i, v in enumerate(values) if not mask >> i & 1), default=ZERO)


def measures(ctx: FuzzyContext, pivot: str, subset: CrispSet) -> Measures:
    """Possibility, necessity, guaranteed possibility and potential certainty
    of ``subset`` under the distribution of ``pivot``.

    The pivot lives in the domain opposite to ``subset``.
    """
    pivot_sort = subset.sort.other
    if subset.universe != ctx.universe(subset.sort):
        raise SortError("subset does not belong to this context")
    if pivot not in ctx.universe(pivot_sort):
        raise SortError(f"pivot {pivot!r} is not in the {pivot_sort.name.lower()} domain")
    pi = ctx.distribution(pivot, pivot_sort)
    return Measures(possibility(pi, subset.mask), necessity(pi, subset.mask),
                    guaranteed(pi, subset.mask), potential(pi, subset.mask))


Operator = Literal["plus", "minus", "box", "diamond"]


def derive(ctx: FuzzyContext, subset: CrispSet, operator: Operator) -> FuzzySet:
    """Fuzzy derivation of a crisp set, straight from the residuum definitions.

    ``plus`` takes object sets, ``minus`` attribute sets; ``box`` and
    ``diamond`` take either and land in the opposite domain.
    """
    if subset.universe != ctx.universe(subset.sort):
        raise SortError("subset does not belong to this context")
    if operator == "plus" and subset.sort is not Sort.OBJECT:
        raise SortError("plus is defined on object sets only")
    if operator == "minus" and subset.sort is not Sort.PROPERTY:
        raise SortError("minus is defined on attribute sets only")
    if operator not in ("plus", "minus", "box", "diamond"):
        raise ValueError(f"unknown operator {operator!r}")

    src = subset.sort
    chi = [ONE if subset.mask >> i & 1 else ZERO for i in range(ctx.size(src))]

    def rel(src_i: int, dst_j: int) -> Fraction:
        if src is Sort.OBJECT:
            return ctx.incidence[src_i][dst_j]
        return ctx.incidence[dst_j][src_i]

    values = []
    for j in range(ctx.size(src.other)):
        if operator in ("plus", "minus"):
            v = min(residuum(chi[i], rel(i, j)) for i in range(len(chi)))
        elif operator == "box":
            v = min(residuum(rel(i, j), chi[i]) for i in range(len(chi)))
        else:
            v = max(min(rel(i, j), chi[i]) for i in range(len(chi)))
        values.append(v)
    return FuzzySet(src.other, ctx.universe(src.other), tuple(values))


def cut(fs: FuzzySet, c: Fraction, strict: bool = False) -> CrispSet:
    """``{w : fs(w) >= c}``, or ``> c`` when ``strict``."""
    c = degree(c)
    mask = 0
    for i, v in enumerate(fs.values):
        if (v > c) if strict else (v >= c):
            mask |= 1 << i
    return CrispSet(fs.sort, fs.universe, mask)
