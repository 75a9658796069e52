"""Several fuzzy relations over one pair of domains, addressed by index terms."""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import indices as ix
from .core import ONE, ZERO, FuzzyContext, Matrix, Sort, _check_names, as_matrix, degree
from .indices import IndexTerm, za_equal, za_report  # noqa: F401  (re-exported)


class UndeclaredRelation(KeyError):
    pass


def combine(term: IndexTerm, relations: Mapping[str, Matrix], shape: tuple[int, int]) -> Matrix:
    """Evaluate ``term`` pointwise: min, max, ``1 - x`` and constant 0."""
    n_g, n_m = shape
    if isinstance(term, ix.Zero):
        return tuple((ZERO,) * n_m for _ in range(n_g))
    if isinstance(term, ix.Prim):
        if term.name not in relations:
            raise UndeclaredRelation(f"relation {term.name!r} is not declared")
        return relations[term.name]
    if isinstance(term, ix.Compl):
        inner = combine(term.arg, relations, shape)
        return tuple(tuple(ONE - v for v in row) for row in inner)
    left = combine(term.left, relations, shape)
    right = combine(term.right, relations, shape)
    op = min if isinstance(term, ix.Inter) else max
    return tuple(tuple(op(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(left, right))


@dataclass(frozen=True, eq=False)
class MultiContext:
    """Objects, attributes and named primitive relations of the same shape.

    Derived relations are computed on demand and cached by a normal form of
    their index term. The cache is guarded by a lock so one context can be
    shared between threads.
    """

    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    relations: Mapping[str, Matrix]
    _cache: dict = field(default_factory=dict, init=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

    def __post_init__(self) -> None:
        objects = _check_names(self.objects, "objects")
        attributes = _check_names(self.attributes, "attributes")
        if not self.relations:
            raise ValueError("at least one primitive relation is required")
        rels = {}
        for name, rows in self.relations.items():
            if not name or name == "0" or not (name[0].isalpha() or name[0] == "_"):
                raise ValueError(f"bad relation name {name!r}")
            rels[name] = as_matrix(rows, len(objects), len(attributes))
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "attributes", attributes)
        object.__setattr__(self, "relations", rels)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, MultiContext) and self.objects == other.objects
                and self.attributes == other.attributes and dict(self.relations) == dict(other.relations))

    def __hash__(self) -> int:
        return hash((self.objects, self.attributes, tuple(sorted(self.relations.items()))))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.objects), len(self.attributes)

    def universe(self, sort: Sort) -> tuple[str, ...]:
        return self.objects if sort is Sort.OBJECT else self.attributes

    def size(self, sort: Sort) -> int:
        return len(self.universe(sort))

    def relation_for(self, index: Optional[IndexTerm]) -> Matrix:
        if index is None:
            if len(self.relations) != 1:
                raise ValueError("unindexed modality is ambiguous with several relations")
            return next(iter(self.relations.values()))
        key = ix.normal_key(index)
        with self._lock:
            hit = self._cache.get(key)
        if hit is None:
            hit = combine(index, self.relations, self.shape)
            with self._lock:
                self._cache[key] = hit
        return hit

    def single(self, index: IndexTerm | str) -> FuzzyContext:
        """The plain context carrying one derived relation."""
        if isinstance(index, str):
            index = ix.Prim(index)
        return FuzzyContext(self.objects, self.attributes, self.relation_for(index))

    def complement(self) -> "MultiContext":
        """Every primitive replaced by its complement."""
        return MultiContext(self.objects, self.attributes,
                            {k: tuple(tuple(ONE - v for v in row) for row in m)
                             for k, m in self.relations.items()})


def derived_relation(mctx: MultiContext, idx: IndexTerm) -> Matrix:
    undeclared = ix.primitives(idx) - set(mctx.relations)
    if undeclared:
        raise UndeclaredRelation(f"undeclared relation(s): {', '.join(sorted(undeclared))}")
    return mctx.relation_for(idx)


def random_index_term(rng: random.Random, names: Sequence[str], max_depth: int) -> IndexTerm:
    if max_depth <= 0 or rng.random() < 0.25:
        return ix.Zero() if rng.random() < 0.1 else ix.Prim(rng.choice(list(names)))
    r = rng.random()
    if r < 0.3:
        return ix.Compl(random_index_term(rng, names, max_depth - 1))
    node = ix.Inter if r < 0.65 else ix.Union
    return node(random_index_term(rng, names, max_depth - 1), random_index_term(rng, names, max_depth - 1))


def random_multicontext(rng: random.Random, n_g: int, n_m: int, names: Sequence[str],
                        grid: Sequence[Fraction]) -> MultiContext:
    return MultiContext(
        tuple(f"g{i + 1}" for i in range(n_g)),
        tuple(f"m{j + 1}" for j in range(n_m)),
        {k: tuple(tuple(rng.choice(list(grid)) for _ in range(n_m)) for _ in range(n_g)) for k in names},
    )


def to_degree_grid(values: Sequence[object]) -> list[Fraction]:
    return [degree(v) for v in values]
