from fractions import Fraction

import pytest
from conftest import models
from hypothesis import given
from hypothesis import strategies as st
from oracles import OracleModel

from wmlfca.core import Sort, SortError
from wmlfca.generators import FormulaShape, random_formula
from wmlfca.search import QuantizedGrid, bounded_sat, candidate_models, quantize_model
from wmlfca.semantics import Evaluator, satisfies
from wmlfca.syntax import DegreeSet, FragmentError, deg_of, parse

F = Fraction
O, P = Sort.OBJECT, Sort.PROPERTY
NEC_ONLY = FormulaShape(sufficiency=False)
SUFF_ONLY = FormulaShape(necessity=False)


# -- the quantized grid ---------------------------------------------------------


def test_relation_values():
    grid = QuantizedGrid(DegreeSet.of(["0.3"]))
    assert grid.thresholds == [1, F(7, 10), F(3, 10), 0]
    assert grid.relation_values == [0, F(3, 20), F(3, 10), F(1, 2), F(7, 10), F(17, 20), 1]


def test_representatives():
    grid = QuantizedGrid(DegreeSet.of(["0.3"]))
    for v in (F(0), F(3, 10), F(7, 10), F(1)):
        assert grid.representative(v) == v
    assert grid.representative(F(1, 2)) == F(1, 2)
    assert grid.representative(F(2, 5)) == F(1, 2)
    assert grid.representative(F(1, 100)) == F(3, 20)


@given(st.lists(st.fractions(0, 1, max_denominator=10), max_size=3), st.fractions(0, 1, max_denominator=50))
def test_representative_keeps_order_class(ds, v):
    dset = DegreeSet.of(ds)
    r = QuantizedGrid(dset).representative(v)
    assert r in QuantizedGrid(dset).relation_values
    for c in dset:
        assert (v >= 1 - c) == (r >= 1 - c)
        assert (v > 1 - c) == (r > 1 - c)


@given(models(), st.randoms(use_true_random=False), st.sampled_from([F(1, 5), F(1, 3), F(1, 2), F(3, 5)]))
def test_quantization_preserves_satisfaction(model, rng, c):
    phi = random_formula(rng, rng.choice([O, P]), 3, [F(0), c, 1 - c, F(1)])
    q = quantize_model(model, deg_of(phi))
    assert Evaluator(model).mask(phi) == Evaluator(q).mask(phi)


# -- bounded search -------------------------------------------------------------


def test_sat_finds_witness():
    phi = parse("[0+]_p q")
    res = bounded_sat([phi], O)
    assert res.found
    assert satisfies(res.model, res.world, phi)


def test_sat_exhausts_on_impossible_weight():
    res = bounded_sat([parse("[1+]_p q")], O)
    assert res.status == "exhausted" and res.model is None
    assert res.candidates > 0


def test_sat_boundary_value():
    gamma = [parse("[0.5]_p q"), parse("![0.5+]_p q")]
    res = bounded_sat(gamma, O)
    assert res.found
    assert all(satisfies(res.model, res.world, f) for f in gamma)
    assert F(1, 2) in {v for row in res.model.context.incidence for v in row}


def test_sat_input_checks():
    with pytest.raises(FragmentError):
        bounded_sat([parse("[0.5]_p q & [[0.5]]_p q")], O)
    with pytest.raises(SortError):
        bounded_sat([parse("[0.5]_p q")], P)
    with pytest.raises(FragmentError):
        bounded_sat([parse("[0.5]_p^a q")], O)


def test_sufficiency_goes_through_translation():
    phi = parse("[[0.5]]_p q & ![[0.5+]]_p q")
    res = bounded_sat([phi], O)
    assert res.found and res.translated
    assert satisfies(res.model, res.world, phi)


@given(st.randoms(use_true_random=False))
def test_symmetry_breaking_loses_nothing(rng):
    degrees = [F(0), F(1, 2), F(1)]
    phi = random_formula(rng, rng.choice([O, P]), 2, degrees, shape=NEC_ONLY)
    d = DegreeSet.of(degrees)
    fast = bounded_sat([phi], phi.sort, 2, 2, d)
    slow = bounded_sat([phi], phi.sort, 2, 2, d, symmetry_breaking=False)
    assert fast.status == slow.status
    if fast.found:
        assert OracleModel.from_model(fast.model).holds(fast.world, phi)


@given(st.randoms(use_true_random=False))
def test_sufficiency_witnesses_satisfy_original(rng):
    degrees = [F(0), F(1, 2), F(1)]
    phi = random_formula(rng, rng.choice([O, P]), 2, degrees, shape=SUFF_ONLY)
    res = bounded_sat([phi], phi.sort, 2, 2, DegreeSet.of(degrees))
    if res.found:
        assert satisfies(res.model, res.world, phi)


def test_candidate_counts():
    values = [F(0), F(1)]
    everything = list(candidate_models(2, 1, values, ["p"], [], symmetry_breaking=False))
    reduced = list(candidate_models(2, 1, values, ["p"], [], symmetry_breaking=True))
    assert len(everything) == 16
    # rows are (feature, value) with 4 kinds; multisets of size 2 number 10
    assert len(reduced) == 10
