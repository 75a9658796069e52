"""Random contexts, models and formulas for fuzzing and property tests."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import indices as ix
from .core import ONE, FuzzyContext, Sort
from .semantics import Model
from .syntax import Atom, Conj, Formula, Nec, Neg, Suff, Weight


def rational_grid(rng: random.Random, max_den: int = 10) -> list[Fraction]:
    """``{k/n : 0 <= k <= n}`` for a random ``n``."""
    n = rng.randint(1, max_den)
    return [Fraction(k, n) for k in range(n + 1)]


def random_context(rng: random.Random, n_g: int, n_m: int, grid: Sequence[Fraction]) -> FuzzyContext:
    return FuzzyContext(
        tuple(f"g{i + 1}" for i in range(n_g)),
        tuple(f"m{j + 1}" for j in range(n_m)),
        tuple(tuple(rng.choice(grid) for _ in range(n_m)) for _ in range(n_g)),
    )


@dataclass(frozen=True)
class Signature:
    """Propositional symbols available to random formulas."""

    objects: tuple[str, ...] = ("p1", "p2")
    properties: tuple[str, ...] = ("q1", "q2")

    def names(self, sort: Sort) -> tuple[str, ...]:
        return self.objects if sort is Sort.OBJECT else self.properties


DEFAULT_SIGNATURE = Signature()


def random_model(rng: random.Random, context, signature: Signature = DEFAULT_SIGNATURE) -> Model:
    n_g, n_m = len(context.objects), len(context.attributes)
    return Model(context,
                 {p: rng.getrandbits(n_g) for p in signature.objects},
                 {q: rng.getrandbits(n_m) for q in signature.properties})


def random_fuzzy_model(rng: random.Random, max_g: int = 4, max_m: int = 4,
                       signature: Signature = DEFAULT_SIGNATURE,
                       grid: Optional[Sequence[Fraction]] = None) -> Model:
    grid = list(grid) if grid is not None else rational_grid(rng)
    ctx = random_context(rng, rng.randint(1, max_g), rng.randint(1, max_m), grid)
    return random_model(rng, ctx, signature)


@dataclass(frozen=True)
class FormulaShape:
    """Knobs for :func:`random_formula`."""

    necessity: bool = True
    sufficiency: bool = True
    strict: bool = True
    indices: tuple[str, ...] = ()
    index_depth: int = 1


def random_formula(rng: random.Random, sort: Sort, depth: int, degrees: Sequence[Fraction],
                   signature: Signature = DEFAULT_SIGNATURE,
                   shape: FormulaShape = FormulaShape()) -> Formula:
    """A formula of at most ``depth`` constructors over the given symbols,
    with weights drawn from ``degrees``."""
    kinds = []
    if shape.necessity:
        kinds.append(Nec)
    if shape.sufficiency:
        kinds.append(Suff)
    if depth <= 0 or rng.random() < 0.2:
        return Atom(rng.choice(signature.names(sort)), sort)
    r = rng.random()
    if r < 0.25:
        return Neg(random_formula(rng, sort, depth - 1, degrees, signature, shape))
    if r < 0.45 or not kinds:
        return Conj(random_formula(rng, sort, depth - 1, degrees, signature, shape),
                    random_formula(rng, sort, depth - 1, degrees, signature, shape))
    node = rng.choice(kinds)
    weight = Weight(rng.choice(list(degrees)), shape.strict and rng.random() < 0.5)
    index = None
    if shape.indices:
        from .multirel import random_index_term

        index = random_index_term(rng, shape.indices, shape.index_depth)
    arg = random_formula(rng, sort.other, depth - 1, degrees, signature, shape)
    return node(weight, sort.other, arg, index)


def random_degree_pair(rng: random.Random, grid: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """``(c, d)`` with ``c > d``, both from ``grid`` (which needs two values)."""
    c, d = rng.sample(sorted(set(grid)), 2)
    return (c, d) if c > d else (d, c)


def random_degree(rng: random.Random, grid: Sequence[Fraction]) -> Fraction:
    """Mostly grid values, sometimes their complements or a fresh rational."""
    r = rng.random()
    if r < 0.7:
        return rng.choice(list(grid))
    if r < 0.85:
        return ONE - rng.choice(list(grid))
    den = rng.randint(1, 12)
    return Fraction(rng.randint(0, den), den)


def random_index(rng: random.Random, names: Sequence[str], depth: int) -> ix.IndexTerm:
    from .multirel import random_index_term

    return random_index_term(rng, names, depth)
