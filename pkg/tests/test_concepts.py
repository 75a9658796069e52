from fractions import Fraction

import pytest
from conftest import contexts
from hypothesis import given
from hypothesis import strategies as st
from oracles import classical_concepts, concept_oracle, crisp_relation

from wmlfca.concepts import (
    ConceptFlavor,
    CutOperators,
    Duality,
    closure,
    dualize,
    enumerate_concepts,
    threshold_grid,
)
from wmlfca.core import FuzzyContext, Sort, complement_context

F = Fraction
O, P = Sort.OBJECT, Sort.PROPERTY
FORMAL, OO, PO = ConceptFlavor.FORMAL, ConceptFlavor.OBJECT_ORIENTED, ConceptFlavor.PROPERTY_ORIENTED
FLAVORS = [FORMAL, OO, PO]
G, M = frozenset({"g1", "g2"}), frozenset({"m1", "m2"})


def fs(*names):
    return frozenset(names)


def identity_context(n: int) -> FuzzyContext:
    names = tuple(str(i) for i in range(n))
    return FuzzyContext(tuple("g" + x for x in names), tuple("m" + x for x in names),
                        tuple(tuple(F(int(i == j)) for j in range(n)) for i in range(n)))


# -- closure --------------------------------------------------------------------


def test_closure_examples(K0):
    assert closure(K0, K0.crisp(O, ["g1"]), FORMAL, F(3, 5)).pair == (fs("g1"), M)
    assert closure(K0, K0.full(O), FORMAL, F(3, 5)).pair == (G, fs())


def test_closure_on_crisp_context_is_classical():
    ctx = FuzzyContext(("a", "b", "c"), ("x", "y"), ((F(1), F(0)), (F(1), F(1)), (F(0), F(1))))
    rel = crisp_relation(ctx)
    classical = classical_concepts(ctx.objects, ctx.attributes, rel, "formal")
    for g in ctx.objects:
        assert closure(ctx, ctx.crisp(O, [g]), FORMAL, F(1)).pair in classical


@given(contexts(), st.data(), st.sampled_from(FLAVORS))
def test_closure_is_idempotent(ctx, data, flavor):
    c = data.draw(st.sampled_from(threshold_grid(ctx)))
    side = data.draw(st.sampled_from([O, P]))
    seed = ctx.crisp(side, data.draw(st.sets(st.sampled_from(ctx.universe(side)))))
    k = closure(ctx, seed, flavor, c)
    assert closure(ctx, k.extent, flavor, c) == k
    assert closure(ctx, k.intent, flavor, c) == k
    assert CutOperators(ctx, c).is_concept(flavor, k.extent.mask, k.intent.mask)


# -- enumeration ----------------------------------------------------------------


def test_k0_formal_concepts(K0):
    assert enumerate_concepts(K0, FORMAL, F(3, 5)).pairs() == {(fs("g1"), M), (G, fs())}


def test_identity_context_concepts():
    ctx = identity_context(2)
    rel = crisp_relation(ctx)
    expected = classical_concepts(ctx.objects, ctx.attributes, rel, "formal")
    assert len(expected) == 4
    assert enumerate_concepts(ctx, FORMAL, F(1)).pairs() == expected


@given(contexts())
def test_object_oriented_at_zero_is_single_concept(ctx):
    lat = enumerate_concepts(ctx, OO, F(0))
    assert lat.pairs() == {(fs(), frozenset(ctx.attributes))}


@given(contexts(max_g=3, max_m=3), st.sampled_from(FLAVORS), st.data())
def test_enumeration_matches_brute_force(ctx, flavor, data):
    c = data.draw(st.sampled_from(threshold_grid(ctx)))
    assert enumerate_concepts(ctx, flavor, c).pairs() == concept_oracle(ctx, flavor.value, c)


@given(contexts(), st.sampled_from(FLAVORS), st.data())
def test_lattice_tables_are_a_complete_lattice(ctx, flavor, data):
    c = data.draw(st.sampled_from(threshold_grid(ctx)))
    lat = enumerate_concepts(ctx, flavor, c)
    assert lat.is_complete_lattice()
    ops = CutOperators(ctx, c)
    masks = {(k.extent.mask, k.intent.mask) for k in lat}
    for x in masks:
        for y in masks:
            assert ops.meet(flavor, x, y) in masks
            assert ops.join(flavor, x, y) in masks


def test_lattice_order_is_deterministic(K0):
    lat = enumerate_concepts(K0, FORMAL, F(3, 5))
    assert [k.pair for k in lat] == [(fs("g1"), M), (G, fs())]
    assert lat.hasse_edges() == [(0, 1)]


# -- Galois laws ----------------------------------------------------------------


@given(contexts(), st.data())
def test_galois_laws(ctx, data):
    c = data.draw(st.sampled_from(threshold_grid(ctx)))
    ops = CutOperators(ctx, c)
    a1 = data.draw(st.integers(0, ops.full_g))
    a2 = a1 | data.draw(st.integers(0, ops.full_g))
    b = data.draw(st.integers(0, ops.full_m))
    sub = lambda x, y: x & ~y == 0  # noqa: E731
    # antitone / monotone
    assert sub(ops.plus(a2), ops.plus(a1))
    assert sub(ops.box_g(a1), ops.box_g(a2))
    assert sub(ops.dia_g(a1), ops.dia_g(a2))
    # extensive, idempotent
    assert sub(a1, ops.minus(ops.plus(a1)))
    assert ops.plus(ops.minus(ops.plus(a1))) == ops.plus(a1)
    assert sub(ops.dia_m(ops.box_g(a1)), a1)
    assert sub(a1, ops.box_m(ops.dia_g(a1)))
    # adjunctions
    assert sub(b, ops.plus(a1)) == sub(a1, ops.minus(b))
    assert sub(ops.dia_g(a1), b) == sub(a1, ops.box_m(b))
    assert sub(ops.dia_m(b), a1) == sub(b, ops.box_g(a1))


# -- duality --------------------------------------------------------------------


def test_dualize_examples(K0):
    c = F(3, 5)
    lat = enumerate_concepts(K0, FORMAL, c)
    k = lat.concepts[lat.index(["g1"], ["m1", "m2"])]
    d = dualize(k, "B<->O")
    assert d.pair == (fs("g2"), M) and d.flavor is OO
    assert d.pair in concept_oracle(complement_context(K0), "object_oriented", c)
    top = lat.concepts[lat.index(["g1", "g2"], [])]
    d = dualize(top, Duality.B_P)
    assert d.pair == (G, M) and d.flavor is PO
    assert d.pair in concept_oracle(complement_context(K0), "property_oriented", c)
    assert dualize(dualize(k, "B<->O"), "B<->O") == k


def test_dualize_rejects_wrong_flavor(K0):
    k = enumerate_concepts(K0, FORMAL, F(3, 5)).concepts[0]
    with pytest.raises(ValueError):
        dualize(k, Duality.O_P)


@given(contexts(max_g=3, max_m=3), st.sampled_from(list(Duality)), st.data())
def test_duality_is_order_bijection(ctx, direction, data):
    c = data.draw(st.sampled_from(threshold_grid(ctx)))
    src = {Duality.B_O: FORMAL, Duality.B_P: FORMAL, Duality.O_P: OO}[direction]
    lat = enumerate_concepts(ctx, src, c)
    images = [dualize(k, direction) for k in lat]
    home = complement_context(ctx) if direction.complements_context else ctx
    target = enumerate_concepts(home, images[0].flavor, c)
    assert {k.pair for k in images} == target.pairs()
    reverses = direction in (Duality.B_O, Duality.O_P)
    for i, x in enumerate(images):
        for j, y in enumerate(images):
            dual_leq = x.extent.issubset(y.extent)
            assert dual_leq == (lat.leq[j][i] if reverses else lat.leq[i][j])


def test_object_and_property_oriented_pair_up_in_one_context():
    ctx = FuzzyContext(("g1",), ("m1",), ((F(0),),))
    k = enumerate_concepts(ctx, OO, F(1, 2)).concepts[0]
    image = dualize(k, Duality.O_P)
    assert image.pair in concept_oracle(ctx, "property_oriented", F(1, 2))
    assert image.pair not in concept_oracle(complement_context(ctx), "property_oriented", F(1, 2))


def test_threshold_grid_contains_complements(K0):
    grid = threshold_grid(K0)
    for v in (F(0), F(3, 10), F(3, 5), F(1), F(7, 10), F(2, 5)):
        assert v in grid
