"""Degree quantization and bounded model finding for the necessity fragment.

Truth of a formula whose weights lie in a finite set ``D`` (closed under
``1 - c``) only depends on how each incidence value compares with the
members of ``D``. Collapsing every open interval between consecutive
members to its midpoint therefore changes nothing, and a search may
restrict incidence values to ``D`` plus those midpoints.

The search is bounded in domain size, so running out of candidates says
nothing about unsatisfiability: the result is then ``"exhausted"``.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .core import ONE, FuzzyContext, Sort, SortError, full_mask
from .semantics import Evaluator, Model
from .syntax import (
    DegreeSet,
    Formula,
    FragmentError,
    atoms,
    deg_of,
    in_necessity_fragment,
    in_sufficiency_fragment,
    is_indexed,
    translate_rho,
)


@dataclass(frozen=True)
class QuantizedGrid:
    degrees: DegreeSet

    @property
    def thresholds(self) -> list[Fraction]:
        """``D`` in decreasing order, from 1 down to 0."""
        return self.degrees.descending()

    @property
    def relation_values(self) -> list[Fraction]:
        """``{1 - c}`` for ``c`` in ``D`` plus ``1 - (c_i + c_{i+1}) / 2`` for neighbours."""
        ts = self.thresholds
        vals = {ONE - c for c in ts}
        vals |= {ONE - (a + b) / 2 for a, b in zip(ts, ts[1:])}
        return sorted(vals)

    def representative(self, value: Fraction) -> Fraction:
        cuts = sorted(ONE - c for c in self.degrees)
        k = bisect_left(cuts, value)
        if k < len(cuts) and cuts[k] == value:
            return value
        # cuts contains 0 and 1, so 0 < k < len(cuts) here
        return (cuts[k - 1] + cuts[k]) / 2


def quantize_context(ctx: FuzzyContext, degrees: DegreeSet | Iterable[object]) -> FuzzyContext:
    grid = QuantizedGrid(degrees if isinstance(degrees, DegreeSet) else DegreeSet.of(degrees))
    return FuzzyContext(ctx.objects, ctx.attributes,
                        tuple(tuple(grid.representative(v) for v in row) for row in ctx.incidence))


def quantize_model(model: Model, degrees: DegreeSet | Iterable[object]) -> Model:
    """Replace each incidence value by the representative of its class."""
    if not isinstance(model.context, FuzzyContext):
        raise TypeError("quantize_model works on single-relation contexts")
    return model.with_context(quantize_context(model.context, degrees))


@dataclass(frozen=True)
class SatResult:
    status: str  # "found" or "exhausted"
    model: Optional[Model] = None
    world: Optional[str] = None
    sort: Optional[Sort] = None
    candidates: int = 0
    degrees: Optional[DegreeSet] = None
    translated: bool = False

    @property
    def found(self) -> bool:
        return self.status == "found"


def _signature(gamma: Sequence[Formula]) -> tuple[list[str], list[str]]:
    names_o, names_p = set(), set()
    for f in gamma:
        for a in atoms(f):
            (names_o if a.sort is Sort.OBJECT else names_p).add(a.name)
    return sorted(names_o), sorted(names_p)


def _sizes(max_g: int, max_m: int) -> list[tuple[int, int]]:
    pairs = [(g, m) for g in range(1, max_g + 1) for m in range(1, max_m + 1)]
    return sorted(pairs, key=lambda p: (p[0] + p[1], p))


def _feature_masks(features: Sequence[int], n_symbols: int) -> list[int]:
    """Turn per-element feature codes into one valuation mask per symbol."""
    return [sum(1 << e for e, f in enumerate(features) if f >> s & 1) for s in range(n_symbols)]


def candidate_models(n_g: int, n_m: int, values: Sequence[Fraction], names_o: Sequence[str],
                     names_p: Sequence[str], symmetry_breaking: bool = True) -> Iterator[Model]:
    """Every model of the given shape, up to isomorphism when ``symmetry_breaking``.

    Each object carries a feature code (its membership in every object
    symbol) and likewise each attribute. Rows are kept in non-decreasing
    order of (feature, incidence row) and columns in non-decreasing order of
    (feature, incidence column). Any matrix can be brought into this doubly
    lexical form by permuting rows and columns, which leaves satisfiability
    at some world unchanged.
    """
    objects = tuple(f"g{i + 1}" for i in range(n_g))
    attributes = tuple(f"m{j + 1}" for j in range(n_m))
    values = sorted(values)
    feats_o = range(1 << len(names_o))
    feats_p = range(1 << len(names_p))
    if not symmetry_breaking:
        for col_feats in itertools.product(feats_p, repeat=n_m):
            for row_feats in itertools.product(feats_o, repeat=n_g):
                v1 = dict(zip(names_o, _feature_masks(row_feats, len(names_o))))
                v2 = dict(zip(names_p, _feature_masks(col_feats, len(names_p))))
                for cells in itertools.product(values, repeat=n_g * n_m):
                    rows = tuple(tuple(cells[i * n_m:(i + 1) * n_m]) for i in range(n_g))
                    yield Model(FuzzyContext(objects, attributes, rows), v1, v2)
        return
    row_keys = [(f, row) for f in feats_o for row in itertools.product(values, repeat=n_m)]
    for col_feats in itertools.combinations_with_replacement(feats_p, n_m):
        v2 = dict(zip(names_p, _feature_masks(col_feats, len(names_p))))
        for chosen in itertools.combinations_with_replacement(row_keys, n_g):
            rows = tuple(r for _, r in chosen)
            cols = [(col_feats[j],) + tuple(r[j] for r in rows) for j in range(n_m)]
            if any(cols[j] > cols[j + 1] for j in range(n_m - 1)):
                continue
            v1 = dict(zip(names_o, _feature_masks([f for f, _ in chosen], len(names_o))))
            yield Model(FuzzyContext(objects, attributes, rows), v1, v2)


def satisfying_world(model: Model, gamma: Sequence[Formula], sort: Sort) -> Optional[str]:
    ev = Evaluator(model)
    hold = full_mask(model.context.size(sort))
    for f in gamma:
        hold &= ev.mask(f)
        if not hold:
            return None
    return model.context.universe(sort)[(hold & -hold).bit_length() - 1]


def bounded_sat(gamma: Sequence[Formula], sort: Sort, max_g: int = 2, max_m: int = 2,
                degrees: Optional[DegreeSet] = None, symmetry_breaking: bool = True) -> SatResult:
    """Look for a model and a world satisfying every formula of ``gamma``.

    Formulas must all be necessity formulas or all sufficiency formulas; the
    latter are translated, solved, and the witness context complemented.
    Incidence values range over the quantized grid of ``deg(gamma)`` (or of
    ``degrees`` when given, which must contain it).
    """
    gamma = list(gamma)
    for f in gamma:
        if f.sort is not sort:
            raise SortError(f"formula {f} has sort {f.sort.value}, expected {sort.value}")
        if is_indexed(f):
            raise FragmentError("indexed modalities are not supported by the search")
    translated = False
    if not all(in_necessity_fragment(f) for f in gamma):
        if not all(in_sufficiency_fragment(f) for f in gamma):
            raise FragmentError("the search needs formulas from a single fragment")
        translated = True
        gamma_n = [translate_rho(f, "suff2nec") for f in gamma]
    else:
        gamma_n = gamma
    dset = deg_of(gamma_n) if degrees is None else degrees | deg_of(gamma_n)
    grid = QuantizedGrid(dset)
    names_o, names_p = _signature(gamma_n)
    count = 0
    for n_g, n_m in _sizes(max_g, max_m):
        for model in candidate_models(n_g, n_m, grid.relation_values, names_o, names_p, symmetry_breaking):
            count += 1
            world = satisfying_world(model, gamma_n, sort)
            if world is not None:
                if translated:
                    model = model.complemented()
                return SatResult("found", model, world, sort, count, dset, translated)
    return SatResult("exhausted", None, None, sort, count, dset, translated)
