"""Satisfaction, truth sets and semantic consequence over fuzzy context models.

Truth sets are bitmasks over the index order of the relevant domain. A modal
formula ``[c]_t a`` is evaluated at each world ``w`` of the other sort by
taking the necessity of ``|a|`` under the distribution of ``w``; ``[[c]]_t``
uses guaranteed possibility instead. Non-strict weights compare with ``>=``,
strict (``c+``) weights with ``>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Protocol, Sequence

from .concepts import ConceptFlavor, CutOperators
from .core import (
    ONE,
    CrispSet,
    FuzzyContext,
    Matrix,
    Sort,
    SortError,
    bits,
    degree,
    derive,
    cut,
    full_mask,
    guaranteed,
    necessity,
)
from .syntax import Atom, Conj, Formula, Modal, Nec, Neg, expand_derived, nec, suff


class ContextLike(Protocol):
    objects: tuple[str, ...]
    attributes: tuple[str, ...]

    def universe(self, sort: Sort) -> tuple[str, ...]: ...

    def size(self, sort: Sort) -> int: ...

    def relation_for(self, index: object) -> Matrix: ...


class ValuationError(KeyError):
    pass


def _as_mask(ctx: ContextLike, sort: Sort, value: object) -> int:
    if isinstance(value, CrispSet):
        if value.sort is not sort or value.universe != ctx.universe(sort):
            raise SortError(f"valuation set is not over the {sort.name.lower()} domain")
        return value.mask
    if isinstance(value, int) and not isinstance(value, bool):
        if value < 0 or value >> ctx.size(sort):
            raise ValueError("valuation mask out of range")
        return value
    return CrispSet.of(sort, ctx.universe(sort), value).mask  # type: ignore[arg-type]


@dataclass(frozen=True)
class Model:
    """A context plus a valuation of object symbols (``v1``) and property
    symbols (``v2``). Valuation entries may be given as crisp sets, element
    name iterables or raw bitmasks; they are stored as bitmasks."""

    context: ContextLike
    v1: Mapping[str, object] = field(default_factory=dict)
    v2: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "v1", {k: _as_mask(self.context, Sort.OBJECT, v) for k, v in self.v1.items()})
        object.__setattr__(self, "v2", {k: _as_mask(self.context, Sort.PROPERTY, v) for k, v in self.v2.items()})

    def valuation(self, sort: Sort) -> Mapping[str, int]:
        return self.v1 if sort is Sort.OBJECT else self.v2  # type: ignore[return-value]

    def symbol_set(self, name: str, sort: Sort) -> CrispSet:
        return CrispSet(sort, self.context.universe(sort), self.valuation(sort)[name])

    def complemented(self) -> "Model":
        """The same valuation over the complemented context."""
        return Model(_complement(self.context), self.v1, self.v2)

    def with_context(self, context: ContextLike) -> "Model":
        return Model(context, self.v1, self.v2)


def _complement(ctx: ContextLike) -> ContextLike:
    comp = getattr(ctx, "complement", None)
    if comp is None:
        raise TypeError("context does not support complementation")
    return comp()


@dataclass(frozen=True)
class TruthSet:
    sort: Sort
    members: CrispSet

    @property
    def mask(self) -> int:
        return self.members.mask


class Evaluator:
    """Computes truth masks with a per-evaluator memo table.

    One evaluator belongs to one model; it is cheap to create, so callers
    that want isolation (e.g. worker threads) simply make their own.
    """

    def __init__(self, model: Model) -> None:
        self.model = model
        self.ctx = model.context
        self._memo: dict[Formula, int] = {}
        self._dists: dict[tuple, tuple[tuple[Fraction, ...], ...]] = {}

    def distributions(self, tag: Sort, index: object) -> tuple[tuple[Fraction, ...], ...]:
        """Distributions of every world of sort ``tag.other`` over the ``tag`` domain."""
        key = (tag, _index_key(index))
        hit = self._dists.get(key)
        if hit is None:
            rel = self.ctx.relation_for(index)
            if tag is Sort.PROPERTY:
                hit = tuple(tuple(row) for row in rel)
            else:
                hit = tuple(zip(*rel)) if rel else ()
            self._dists[key] = hit
        return hit

    def mask(self, phi: Formula) -> int:
        hit = self._memo.get(phi)
        if hit is not None:
            return hit
        if isinstance(phi, Atom):
            val = self.model.valuation(phi.sort)
            if phi.name not in val:
                raise ValuationError(f"symbol {phi.name!r} of sort {phi.sort.value} has no valuation")
            out = val[phi.name]
        elif isinstance(phi, Neg):
            out = full_mask(self.ctx.size(phi.sort)) & ~self.mask(phi.arg)
        elif isinstance(phi, Conj):
            out = self.mask(phi.left) & self.mask(phi.right)
        else:
            assert isinstance(phi, Modal)
            arg = self.mask(phi.arg)
            measure = necessity if isinstance(phi, Nec) else guaranteed
            c, strict = phi.weight.degree, phi.weight.strict
            out = 0
            for w, dist in enumerate(self.distributions(phi.tag, phi.index)):
                v = measure(dist, arg)
                if (v > c) if strict else (v >= c):
                    out |= 1 << w
        self._memo[phi] = out
        return out

    def truth_set(self, phi: Formula) -> TruthSet:
        return TruthSet(phi.sort, CrispSet(phi.sort, self.ctx.universe(phi.sort), self.mask(phi)))

    def satisfies(self, world: str | int, phi: Formula) -> bool:
        return bool(self.mask(phi) >> self.world_index(world, phi.sort) & 1)

    def world_index(self, world: str | int, sort: Sort) -> int:
        if isinstance(world, int):
            if not 0 <= world < self.ctx.size(sort):
                raise SortError(f"world index {world} out of range")
            return world
        universe = self.ctx.universe(sort)
        if world not in universe:
            raise SortError(f"{world!r} is not in the {sort.name.lower()} domain")
        return universe.index(world)


def _index_key(index: object) -> object:
    if index is None:
        return None
    from .indices import normal_key

    return normal_key(index)  # type: ignore[arg-type]


def satisfies(model: Model, world: str | int, phi: Formula) -> bool:
    return Evaluator(model).satisfies(world, phi)


def truth_set(model: Model, phi: Formula) -> TruthSet:
    return Evaluator(model).truth_set(phi)


def is_valid_in(model: Model, phi: Formula) -> bool:
    return Evaluator(model).mask(phi) == full_mask(model.context.size(phi.sort))


def consequence(models: Iterable[Model], sort: Sort, gamma: Sequence[Formula], phi: Formula) -> bool:
    """Local consequence over an explicit list of models: wherever all of
    ``gamma`` hold, ``phi`` holds. With empty ``gamma`` this is validity."""
    for f in list(gamma) + [phi]:
        if f.sort is not sort:
            raise SortError(f"formula {f} has sort {f.sort.value}, expected {sort.value}")
    for model in models:
        ev = Evaluator(model)
        hold = full_mask(model.context.size(sort))
        for g in gamma:
            hold &= ev.mask(g)
        if hold & ~ev.mask(phi):
            return False
    return True


def countermodel_world(model: Model, sort: Sort, gamma: Sequence[Formula], phi: Formula) -> Optional[str]:
    """A world where ``gamma`` holds and ``phi`` fails, if any."""
    ev = Evaluator(model)
    hold = full_mask(model.context.size(sort))
    for g in gamma:
        hold &= ev.mask(g)
    bad = hold & ~ev.mask(phi)
    if not bad:
        return None
    return model.context.universe(sort)[next(bits(bad))]


# --------------------------------------------------------------------------
# operator / modality correspondence


@dataclass(frozen=True)
class IdentityCheck:
    label: str
    operator_side: CrispSet
    formula_side: CrispSet

    @property
    def holds(self) -> bool:
        return self.operator_side == self.formula_side


@dataclass(frozen=True)
class Prop2Report:
    threshold: Fraction
    items: tuple[IdentityCheck, ...]

    @property
    def all_hold(self) -> bool:
        return all(i.holds for i in self.items)

    def failures(self) -> list[str]:
        return [i.label for i in self.items if not i.holds]


def check_prop2(model: Model, phi: Formula, c: object, psi: Optional[Formula] = None) -> Prop2Report:
    """Compare cut derivation operators on truth sets with the matching modal
    truth sets: eight identities for the four primitive modalities on both
    sides plus four for the upper approximations (angle modalities).

    ``phi`` must be an object formula; ``psi`` (a property formula) defaults
    to ``[c]_o phi`` so that both sides get exercised from one input.
    """
    c = degree(c)
    if phi.sort is not Sort.OBJECT:
        raise SortError("check_prop2 expects an object formula")
    if psi is None:
        psi = nec(c, Sort.OBJECT, phi)
    if psi.sort is not Sort.PROPERTY:
        raise SortError("psi must be a property formula")
    ctx = model.context
    if not isinstance(ctx, FuzzyContext):
        raise TypeError("check_prop2 works on single-relation contexts")
    ev = Evaluator(model)
    ext, intn = ev.truth_set(phi).members, ev.truth_set(psi).members
    o, p = Sort.OBJECT, Sort.PROPERTY

    def side(fs, strict):  # cut of a derived fuzzy set
        return cut(fs, c, strict)

    items = []
    plus, box_a = derive(ctx, ext, "plus"), derive(ctx, ext, "box")
    minus, box_b = derive(ctx, intn, "minus"), derive(ctx, intn, "box")
    dia_a, dia_b = derive(ctx, ext, "diamond"), derive(ctx, intn, "diamond")
    checks = [
        ("1 plus >c", plus, True, suff(c, o, phi, True)),
        ("2 plus >=c", plus, False, suff(c, o, phi)),
        ("3 box(ext) >c", box_a, True, nec(c, o, phi, True)),
        ("4 box(ext) >=c", box_a, False, nec(c, o, phi)),
        ("5 minus >c", minus, True, suff(c, p, psi, True)),
        ("6 minus >=c", minus, False, suff(c, p, psi)),
        ("7 box(int) >c", box_b, True, nec(c, p, psi, True)),
        ("8 box(int) >=c", box_b, False, nec(c, p, psi)),
        ("C1 diamond(ext) >c", dia_a, True, expand_derived("pos_strict", c, phi)),
        ("C2 diamond(ext) >=c", dia_a, False, expand_derived("pos", c, phi)),
        ("C3 diamond(int) >c", dia_b, True, expand_derived("pos_strict", c, psi)),
        ("C4 diamond(int) >=c", dia_b, False, expand_derived("pos", c, psi)),
    ]
    for label, fs, strict, formula in checks:
        items.append(IdentityCheck(label, side(fs, strict), ev.truth_set(formula).members))
    return Prop2Report(c, tuple(items))


# --------------------------------------------------------------------------
# concept representation by formula pairs


def concept_pair_formulas(phi: Formula, psi: Formula, c: object,
                          flavor: ConceptFlavor) -> tuple[tuple[Formula, Formula], tuple[Formula, Formula]]:
    """The two equivalences that make ``(phi, psi)`` represent a concept.

    Returned as ``((phi, rhs1), (psi, rhs2))``: the pair represents a concept
    of the flavor when ``|phi| = |rhs1|`` and ``|psi| = |rhs2|``.
    """
    c = degree(c)
    o, p = Sort.OBJECT, Sort.PROPERTY
    if flavor is ConceptFlavor.FORMAL:
        return (phi, suff(c, p, psi)), (psi, suff(c, o, phi))
    upper = ONE - c
    if flavor is ConceptFlavor.PROPERTY_ORIENTED:
        return (phi, nec(c, p, psi)), (psi, expand_derived("pos_strict", upper, phi))
    return (phi, expand_derived("pos_strict", upper, psi)), (psi, nec(c, o, phi))


def check_concept_pair(model: Model, phi: Formula, psi: Formula, c: object,
                       flavor: ConceptFlavor | str) -> bool:
    """Whether both defining equivalences hold in ``model``."""
    if isinstance(flavor, str):
        flavor = ConceptFlavor.parse(flavor)
    if phi.sort is not Sort.OBJECT or psi.sort is not Sort.PROPERTY:
        raise SortError("expected an object formula and a property formula")
    ev = Evaluator(model)
    (a, ra), (b, rb) = concept_pair_formulas(phi, psi, c, flavor)
    return ev.mask(a) == ev.mask(ra) and ev.mask(b) == ev.mask(rb)


def truth_pair_is_concept(model: Model, phi: Formula, psi: Formula, c: object,
                          flavor: ConceptFlavor) -> bool:
    """Concept-engine side of the same question, for cross-checking."""
    ev = Evaluator(model)
    ops = CutOperators(model.context, degree(c))  # type: ignore[arg-type]
    return ops.is_concept(flavor, ev.mask(phi), ev.mask(psi))


__all__ = [
    "ContextLike", "Evaluator", "IdentityCheck", "Model", "Prop2Report", "TruthSet", "ValuationError",
    "check_concept_pair", "check_prop2", "concept_pair_formulas", "consequence", "countermodel_world",
    "is_valid_in", "satisfies", "truth_pair_is_concept", "truth_set",
]

