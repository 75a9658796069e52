"""Cut-based formal, object-oriented and property-oriented concepts.

For a threshold ``c`` the six cut operators collapse to crisp relations:
the formal pair reads ``I(g, m) >= c`` and the rough pair reads
``I(g, m) > 1 - c``. :class:`CutOperators` precomputes those relations as
bitmasks and the engine works on masks throughout.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import ONE, CrispSet, FuzzyContext, Sort, degree, full_mask


class ConceptFlavor(enum.Enum):
    FORMAL = "formal"
    OBJECT_ORIENTED = "object_oriented"
    PROPERTY_ORIENTED = "property_oriented"

    @classmethod
    def parse(cls, text: str) -> "ConceptFlavor":
        aliases = {"formal": cls.FORMAL, "b": cls.FORMAL, "fc": cls.FORMAL,
                   "oo": cls.OBJECT_ORIENTED, "o": cls.OBJECT_ORIENTED, "oc": cls.OBJECT_ORIENTED,
                   "object_oriented": cls.OBJECT_ORIENTED,
                   "po": cls.PROPERTY_ORIENTED, "p": cls.PROPERTY_ORIENTED, "pc": cls.PROPERTY_ORIENTED,
                   "property_oriented": cls.PROPERTY_ORIENTED}
        key = text.strip().lower().replace("-", "_")
        if key not in aliases:
            raise ValueError(f"unknown concept flavor {text!r}")
        return aliases[key]


class CutOperators:
    """The cut derivation operators of one context at one threshold.

    ``plus``/``minus`` are the c-cuts of the fuzzy derivations, ``box_*`` the
    c-cuts of the lower approximations and ``dia_*`` the strict (1-c)-cuts of
    the upper approximations. Suffix ``_g`` means "takes an object set".
    """

    def __init__(self, ctx: FuzzyContext, c: Fraction) -> None:
        self.ctx = ctx
        self.c = c = degree(c)
        n_g, n_m = len(ctx.objects), len(ctx.attributes)
        self.n_g, self.n_m = n_g, n_m
        self.full_g, self.full_m = full_mask(n_g), full_mask(n_m)
        rows = ctx.incidence
        # formal pair: I(g, m) >= c
        self._ge_col = [sum(1 << i for i in range(n_g) if rows[i][j] >= c) for j in range(n_m)]
        self._ge_row = [sum(1 << j for j in range(n_m) if rows[i][j] >= c) for i in range(n_g)]
        # rough pair: I(g, m) > 1 - c
        gate = ONE - c
        self._gt_col = [sum(1 << i for i in range(n_g) if rows[i][j] > gate) for j in range(n_m)]
        self._gt_row = [sum(1 << j for j in range(n_m) if rows[i][j] > gate) for i in range(n_g)]

    def plus(self, a: int) -> int:
        return sum(1 << j for j, col in enumerate(self._ge_col) if a & ~col == 0)

    def minus(self, b: int) -> int:
        return sum(1 << i for i, row in enumerate(self._ge_row) if b & ~row == 0)

    def box_g(self, a: int) -> int:
        return sum(1 << j for j, col in enumerate(self._gt_col) if col & ~a == 0)

    def box_m(self, b: int) -> int:
        return sum(1 << i for i, row in enumerate(self._gt_row) if row & ~b == 0)

    def dia_g(self, a: int) -> int:
        return sum(1 << j for j, col in enumerate(self._gt_col) if col & a)

    def dia_m(self, b: int) -> int:
        return sum(1 << i for i, row in enumerate(self._gt_row) if row & b)

    # closures -------------------------------------------------------------

    def from_extent(self, flavor: ConceptFlavor, a: int) -> tuple[int, int]:
        if flavor is ConceptFlavor.FORMAL:
            b = self.plus(a)
            return self.minus(b), b
        if flavor is ConceptFlavor.OBJECT_ORIENTED:
            b = self.box_g(a)
            return self.dia_m(b), b
        b = self.dia_g(a)
        return self.box_m(b), b

    def from_intent(self, flavor: ConceptFlavor, b: int) -> tuple[int, int]:
        if flavor is ConceptFlavor.FORMAL:
            a = self.minus(b)
            return a, self.plus(a)
        if flavor is ConceptFlavor.OBJECT_ORIENTED:
            a = self.dia_m(b)
            return a, self.box_g(a)
        a = self.box_m(b)
        return a, self.dia_g(a)

    def is_concept(self, flavor: ConceptFlavor, a: int, b: int) -> bool:
        if flavor is ConceptFlavor.FORMAL:
            return self.plus(a) == b and self.minus(b) == a
        if flavor is ConceptFlavor.OBJECT_ORIENTED:
            return self.box_g(a) == b and self.dia_m(b) == a
        return self.dia_g(a) == b and self.box_m(b) == a

    def join(self, flavor: ConceptFlavor, x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
        (a, b), (c, d) = x, y
        if flavor is ConceptFlavor.FORMAL:
            return self.minus(b & d), b & d
        if flavor is ConceptFlavor.OBJECT_ORIENTED:
            return a | c, self.box_g(a | c)
        return self.box_m(b | d), b | d

    def meet(self, flavor: ConceptFlavor, x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
        (a, b), (c, d) = x, y
        if flavor is ConceptFlavor.FORMAL:
            return a & c, self.plus(a & c)
        if flavor is ConceptFlavor.OBJECT_ORIENTED:
            return self.dia_m(b & d), b & d
        return a & c, self.dia_g(a & c)


@dataclass(frozen=True)
class CutConcept:
    extent: CrispSet
    intent: CrispSet
    flavor: ConceptFlavor
    threshold: Fraction

    def __str__(self) -> str:
        return f"({self.extent}, {self.intent})"

    @property
    def pair(self) -> tuple[frozenset[str], frozenset[str]]:
        return self.extent.elements, self.intent.elements


def _concept(ctx: FuzzyContext, flavor: ConceptFlavor, c: Fraction, pair: tuple[int, int]) -> CutConcept:
    return CutConcept(CrispSet(Sort.OBJECT, ctx.objects, pair[0]),
                      CrispSet(Sort.PROPERTY, ctx.attributes, pair[1]), flavor, c)


def closure(ctx: FuzzyContext, seed: CrispSet, flavor: ConceptFlavor, c: Fraction) -> CutConcept:
    """The concept generated by a set of objects or of attributes.

    An object seed is pushed to the attribute side and back; an attribute
    seed goes the other way round. Closing the extent (or intent) of a
    concept returns that concept.
    """
    c = degree(c)
    if seed.universe != ctx.universe(seed.sort):
        raise ValueError("seed does not belong to this context")
    ops = CutOperators(ctx, c)
    if seed.sort is Sort.OBJECT:
        pair = ops.from_extent(flavor, seed.mask)
    else:
        pair = ops.from_intent(flavor, seed.mask)
    return _concept(ctx, flavor, c, pair)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _mask_key(mask: int, n: int) -> tuple[int, tuple[int, ...]]:
    return _popcount(mask), tuple(i for i in range(n) if mask >> i & 1)


@dataclass(frozen=True)
class ConceptLattice:
    """All concepts of one flavor at one threshold, with explicit structure.

    ``concepts`` are ordered by extent size, then lexicographically by the
    context order of their extent members. ``leq[i][j]`` is extent inclusion
    and ``meet[i][j]``/``join[i][j]`` are indices into ``concepts``.
    """

    context: FuzzyContext
    flavor: ConceptFlavor
    threshold: Fraction
    concepts: tuple[CutConcept, ...]
    leq: tuple[tuple[bool, ...], ...]
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.concepts)

    def __iter__(self):
        return iter(self.concepts)

    def pairs(self) -> set[tuple[frozenset[str], frozenset[str]]]:
        return {k.pair for k in self.concepts}

    def index(self, extent: Iterable[str], intent: Iterable[str]) -> int:
        key = (frozenset(extent), frozenset(intent))
        for i, k in enumerate(self.concepts):
            if k.pair == key:
                return i
        raise KeyError(key)

    def hasse_edges(self) -> list[tuple[int, int]]:
        """Covering pairs ``(lower, upper)``."""
        n = len(self.concepts)
        edges = []
        for i in range(n):
            for j in range(n):
                if i == j or not self.leq[i][j]:
                    continue
                if not any(k not in (i, j) and self.leq[i][k] and self.leq[k][j] for k in range(n)):
                    edges.append((i, j))
        return edges

    def is_complete_lattice(self) -> bool:
        """Every pair's table entries are its glb/lub under ``leq``.

        On a finite poset, binary meets and joins plus a top and a bottom
        give completeness.
        """
        n = len(self.concepts)
        if n == 0:
            return False
        for i in range(n):
            for j in range(n):
                m, s = self.meet[i][j], self.join[i][j]
                if not (self.leq[m][i] and self.leq[m][j] and self.leq[i][s] and self.leq[j][s]):
                    return False
                for k in range(n):
                    if self.leq[k][i] and self.leq[k][j] and not self.leq[k][m]:
                        return False
                    if self.leq[i][k] and self.leq[j][k] and not self.leq[s][k]:
                        return False
        has_top = any(all(self.leq[i][t] for i in range(n)) for t in range(n))
        has_bottom = any(all(self.leq[b][i] for i in range(n)) for b in range(n))
        return has_top and has_bottom


def concept_pairs(ctx: FuzzyContext, flavor: ConceptFlavor, c: Fraction) -> set[tuple[int, int]]:
    """Extent/intent mask pairs, generated from singleton seeds and then
    closed under the lattice operations."""
    ops = CutOperators(ctx, c)
    found: set[tuple[int, int]] = set()
    for a in (0, ops.full_g, *(1 << i for i in range(ops.n_g))):
        found.add(ops.from_extent(flavor, a))
    for b in (0, ops.full_m, *(1 << j for j in range(ops.n_m))):
        found.add(ops.from_intent(flavor, b))
    frontier = list(found)
    while frontier:
        fresh = []
        current = list(found)
        for x in frontier:
            for y in current:
                for z in (ops.meet(flavor, x, y), ops.join(flavor, x, y)):
                    if z not in found:
                        found.add(z)
                        fresh.append(z)
        frontier = fresh
    return found


def enumerate_concepts(ctx: FuzzyContext, flavor: ConceptFlavor, c: Fraction) -> ConceptLattice:
    c = degree(c)
    ops = CutOperators(ctx, c)
    pairs = sorted(concept_pairs(ctx, flavor, c),
                   key=lambda p: (_mask_key(p[0], ops.n_g), _mask_key(p[1], ops.n_m)))
    position = {p: i for i, p in enumerate(pairs)}
    n = len(pairs)
    leq = tuple(tuple(pairs[i][0] & ~pairs[j][0] == 0 for j in range(n)) for i in range(n))
    meet = tuple(tuple(position[ops.meet(flavor, pairs[i], pairs[j])] for j in range(n)) for i in range(n))
    join = tuple(tuple(position[ops.join(flavor, pairs[i], pairs[j])] for j in range(n)) for i in range(n))
    return ConceptLattice(ctx, flavor, c, tuple(_concept(ctx, flavor, c, p) for p in pairs),
                          leq, meet, join)


class Duality(enum.Enum):
    B_O = "B<->O"
    B_P = "B<->P"
    O_P = "O<->P"

    @classmethod
    def parse(cls, text: str) -> "Duality":
        key = text.replace(" ", "").upper().replace("↔", "<->")
        for d in cls:
            if d.value.upper() == key or d.name == key:
                return d
        raise ValueError(f"unknown duality {text!r}")

    @property
    def complements_context(self) -> bool:
        """Whether the image lives in the complemented context.

        B<->O and B<->P cross to the complemented context; O<->P, being
        their composite, stays in the same one.
        """
        return self is not Duality.O_P


_DUAL_TARGET = {
    Duality.B_O: {ConceptFlavor.FORMAL: ConceptFlavor.OBJECT_ORIENTED,
                  ConceptFlavor.OBJECT_ORIENTED: ConceptFlavor.FORMAL},
    Duality.B_P: {ConceptFlavor.FORMAL: ConceptFlavor.PROPERTY_ORIENTED,
                  ConceptFlavor.PROPERTY_ORIENTED: ConceptFlavor.FORMAL},
    Duality.O_P: {ConceptFlavor.OBJECT_ORIENTED: ConceptFlavor.PROPERTY_ORIENTED,
                  ConceptFlavor.PROPERTY_ORIENTED: ConceptFlavor.OBJECT_ORIENTED},
}


def dualize(concept: CutConcept, direction: Duality | str) -> CutConcept:
    """Map a concept to its partner of the other flavor.

    B<->O complements the extent, B<->P the intent, O<->P both. The image is
    a concept of the complemented context for B<->O and B<->P and of the
    same context for O<->P (see :attr:`Duality.complements_context`).
    """
    if isinstance(direction, str):
        direction = Duality.parse(direction)
    targets = _DUAL_TARGET[direction]
    if concept.flavor not in targets:
        raise ValueError(f"{direction.value} does not apply to {concept.flavor.value} concepts")
    extent, intent = concept.extent, concept.intent
    if direction in (Duality.B_O, Duality.O_P):
        extent = extent.complement()
    if direction in (Duality.B_P, Duality.O_P):
        intent = intent.complement()
    return CutConcept(extent, intent, targets[concept.flavor], concept.threshold)


def threshold_grid(ctx: FuzzyContext) -> list[Fraction]:
    """Incidence values and their complements, 0 and 1, plus midpoints.

    Formal cuts only change at incidence values and rough cuts at their
    complements, so the grid visits every regime of both operator pairs.
    """
    seen = {v for row in ctx.incidence for v in row}
    values = sorted(seen | {ONE - v for v in seen} | {Fraction(0), ONE})
    mids = [(a + b) / 2 for a, b in zip(values, values[1:])]
    return sorted(set(values) | set(mids))
