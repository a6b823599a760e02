import pytest
from gmpy2 import mpq

from levinorm.algebroid import (AlgebroidData, AlgebroidError, NotALieAlgebroid,
                                algebroid_levi_normalize, check_fiberwise_linear, dual_poisson,
                                from_dual_poisson, linear_levi_data, algebroid_shape)
from levinorm.catalog import action_algebroid, perturbed_algebroid, sl2_k2
from levinorm.poisson import levi_table
from levinorm.polyalg import PolyMap, Polynomial

B = ("x1", "x2")


def test_action_algebroid_dual_is_levi_table():
    d = sl2_k2()
    A = action_algebroid(d, 4)
    table = dual_poisson(A)
    assert table.pi == levi_table(d, 4, table.variables).pi
    assert linear_levi_data(A, 3) == d
    assert algebroid_shape(A, d) == {"ss_constant": True, "sv_constant": True, "anchor_linear": True}


@pytest.mark.parametrize("seed", range(2))
def test_round_trip_through_dual(seed):
    A, _ = perturbed_algebroid(sl2_k2(), 5, seed)
    table = dual_poisson(A)
    assert check_fiberwise_linear(table, 3)
    assert from_dual_poisson(table, 3) == A


def test_linear_action_gives_identity():
    d = sl2_k2()
    A = action_algebroid(d, 4)
    out, phi, log = algebroid_levi_normalize(A, d, 2)
    assert out == A
    assert phi == PolyMap.identity(A.variables)


@pytest.mark.parametrize("seed", range(2))
def test_perturbed_action_algebroid(seed):
    d = sl2_k2()
    A, _ = perturbed_algebroid(d, 4, seed)
    assert algebroid_shape(A, d) != {"ss_constant": True, "sv_constant": True, "anchor_linear": True}
    out, phi, log = algebroid_levi_normalize(A, d, 2)
    assert out == action_algebroid(d, 4)
    assert log.checks["fiberwise_linear"]
    for s in log.steps:
        for i, p in enumerate(s.psi):
            assert all(sum(e[:3]) == (1 if i < 3 else 0) for e in p.terms)


def test_validation_errors():
    zero = Polynomial(B)
    x1 = Polynomial.variable(B, 0)
    with pytest.raises(AlgebroidError):
        AlgebroidData(1, 2, 3, {}, [[Polynomial.constant(B, 1), zero]])
    with pytest.raises(AlgebroidError):
        AlgebroidData(2, 2, 3, {(0, 1): [zero]}, [[zero, zero], [zero, zero]])
    with pytest.raises(AlgebroidError):
        AlgebroidData(1, 2, 3, {}, [[zero]])
    with pytest.raises(AlgebroidError):
        AlgebroidData(1, 1, 3, {}, [[x1]])
    # anchor not a Lie algebra morphism: [s1, s2] = 0 but the anchors do not commute
    bad = AlgebroidData(2, 2, 3, {}, [[zero, x1], [Polynomial.variable(B, 1), zero]])
    with pytest.raises(NotALieAlgebroid):
        dual_poisson(bad)


def test_levi_data_dimension_check():
    d = sl2_k2()
    A = action_algebroid(d, 4)
    b1 = ("x1",)
    bracket = {k: [Polynomial(b1, {(0,): c.coefficient((0, 0))}) for c in v] for k, v in A.bracket.items()}
    small = AlgebroidData(3, 1, 4, bracket, [[Polynomial(b1)] for _ in range(3)])
    with pytest.raises(AlgebroidError):
        algebroid_levi_normalize(small, d, 2)


def test_bracket_antisymmetry_fill():
    x = Polynomial.constant(B, mpq(2))
    zero = Polynomial(B)
    A = AlgebroidData(2, 2, 3, {(1, 0): [x, zero]}, [[zero, zero], [zero, zero]])
    assert A.structure(0, 1)[0] == -x
