from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from parhiggs.errors import RegimeError, ValidationError
from parhiggs.spectral import (
    compatibility_multiplicity,
    hitchin_base_dim,
    hitchin_fiber_components,
    lift_weights,
    prym_data,
    spectral_cover_data,
)
from parhiggs.vgeom import OrbifoldSignature

BASE = OrbifoldSignature(2, (2,))


def test_cover_frozen():
    c = spectral_cover_data(BASE, 2)
    assert (c.twist_degree, c.branch_degree, c.spectral_genus) == (3, 6, 6)
    assert c.spectral_signature == OrbifoldSignature(6, (2, 2))
    assert c.regular_assumed
    assert c.to_json()["spectral_signature"] == {"genus": 6, "orders": [2, 2]}


def test_cover_rank_three_with_explicit_twist():
    c = spectral_cover_data(OrbifoldSignature(0, (2, 3, 5, 7)), 3, 2)
    assert c.branch_degree == 12
    assert c.spectral_genus == 4
    assert c.spectral_signature.orders == (2, 2, 2, 3, 3, 3, 5, 5, 5, 7, 7, 7)


def test_cover_rejects_impossible_genus():
    with pytest.raises(ValidationError):
        spectral_cover_data(OrbifoldSignature(0, (2,)), 3, 0)


def test_lift_weights():
    base = [[F(0), F(1, 2)], [F(1, 3), F(1, 3)]]
    assert lift_weights(base) == ((0, F(1, 2)), (F(1, 3), F(1, 3)))
    assert lift_weights(base, [(1, 0), (0, 1)]) == ((F(1, 2), 0), (F(1, 3), F(1, 3)))
    with pytest.raises(ValidationError):
        lift_weights(base, [(0, 0), (0, 1)])
    with pytest.raises(ValidationError):
        lift_weights([[F(1, 2), F(0)]])


def test_multiplicity_values():
    assert compatibility_multiplicity([0, 0, F(1, 2)]) == 3
    assert compatibility_multiplicity([F(1, 4)] * 4) == 1
    assert compatibility_multiplicity([0, F(1, 3), F(2, 3)]) == 6


def test_hitchin_base():
    assert hitchin_base_dim(2, 1, 2) == 7
    assert hitchin_base_dim(2, 1, 2, strong=True) == 6
    assert hitchin_base_dim(0, 4, 2, strong=True) == 1
    with pytest.raises(ValidationError):
        hitchin_base_dim(1, 0, 2)


def test_strong_base_on_sphere_with_three_points():
    # the i = 2 term has degree -1 on the sphere and contributes nothing
    assert hitchin_base_dim(0, 3, 2, strong=True) == 0
    assert hitchin_base_dim(0, 3, 3, strong=True) == 1


def test_fiber_components():
    assert hitchin_fiber_components(OrbifoldSignature(1, (2, 3)), 2) == 36


def test_prym():
    p = prym_data(BASE)
    assert (p.dimension, p.component_count, p.spectral_genus) == (4, 2, 6)
    assert not p.copy_count_resolved
    with pytest.raises(RegimeError):
        prym_data(OrbifoldSignature(1, (3,)))


@given(st.integers(0, 6), st.lists(st.integers(2, 6), min_size=1, max_size=4), st.integers(1, 6))
def test_genus_is_riemann_hurwitz(g, orders, n):
    base = OrbifoldSignature(g, tuple(orders))
    if base.kd_degree <= 0:
        return
    c = spectral_cover_data(base, n)
    assert 2 * c.spectral_genus - 2 == n * (2 * g - 2) + c.branch_degree
    assert c.spectral_genus >= 0
