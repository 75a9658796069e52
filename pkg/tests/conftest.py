from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from wmlfca.core import FuzzyContext
from wmlfca.semantics import Model

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = Path(__file__).parent / "data"
GRID = (Fraction(0), Fraction(3, 10), Fraction(3, 5), Fraction(1))


def k0() -> FuzzyContext:
    return FuzzyContext(("g1", "g2"), ("m1", "m2"),
                        ((Fraction(1), Fraction(3, 5)), (Fraction(3, 10), Fraction(0))))


@pytest.fixture
def K0() -> FuzzyContext:
    return k0()


@pytest.fixture
def data_dir() -> Path:
    return DATA


# -- strategies -----------------------------------------------------------------

degrees = st.fractions(min_value=0, max_value=1, max_denominator=12)
grid_degrees = st.sampled_from([Fraction(k, 10) for k in range(11)] + [Fraction(1, 3), Fraction(2, 3)])


@st.composite
def contexts(draw, max_g: int = 4, max_m: int = 4, values=grid_degrees) -> FuzzyContext:
    n_g = draw(st.integers(1, max_g))
    n_m = draw(st.integers(1, max_m))
    rows = tuple(tuple(draw(values) for _ in range(n_m)) for _ in range(n_g))
    return FuzzyContext(tuple(f"g{i + 1}" for i in range(n_g)), tuple(f"m{j + 1}" for j in range(n_m)), rows)


@st.composite
def models(draw, max_g: int = 3, max_m: int = 3) -> Model:
    ctx = draw(contexts(max_g, max_m))
    n_g, n_m = len(ctx.objects), len(ctx.attributes)
    v1 = {p: draw(st.integers(0, (1 << n_g) - 1)) for p in ("p1", "p2")}
    v2 = {q: draw(st.integers(0, (1 << n_m) - 1)) for q in ("q1", "q2")}
    return Model(ctx, v1, v2)


def masks(n: int):
    return st.integers(0, (1 << n) - 1)
