import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given

from levinorm.catalog import perturbed_table, sl2, sl2_heisenberg, sl2_k2
from levinorm.liealg import NotALieAlgebra
from levinorm.poisson import (ConstantTermError, PoissonTable, bracket, hamiltonian_vf, jacobi_defects,
                              jacobiator, levi_table, linear_part, pushforward)
from levinorm.polyalg import Polynomial, VariableMismatch, invert_near_identity, truncate

from conftest import polynomials

LIN = levi_table(sl2(), 6)
V = LIN.variables
SYM = sympy.symbols(V)


def to_sympy(p):
    out = 0
    for e, c in p.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for s, k in zip(SYM, e):
            term *= s ** k
        out += term
    return sympy.expand(out)


@given(polynomials(names=V), polynomials(names=V))
def test_bracket_matches_sympy(f, g):
    want = 0
    for (i, j), p in LIN.pi.items():
        P = to_sympy(p)
        want += P * (sympy.diff(to_sympy(f), SYM[i]) * sympy.diff(to_sympy(g), SYM[j])
                     - sympy.diff(to_sympy(f), SYM[j]) * sympy.diff(to_sympy(g), SYM[i]))
    kept = [t for t in sympy.Add.make_args(sympy.expand(want))
            if t != 0 and sympy.Poly(t, *SYM).total_degree() <= LIN.D]
    assert to_sympy(bracket(LIN, f, g)) == sympy.expand(sympy.Add(*kept))


@given(polynomials(names=V), polynomials(names=V), polynomials(names=V))
def test_bracket_antisymmetric_and_leibniz(f, g, h):
    assert bracket(LIN, f, g) == -bracket(LIN, g, f)
    assert bracket(LIN, f, g * h) == truncate(bracket(LIN, f, g) * h + g * bracket(LIN, f, h), LIN.D)


@given(polynomials(names=V, max_degree=2), polynomials(names=V, max_degree=2), polynomials(names=V, max_degree=2))
def test_jacobi_on_functions(f, g, h):
    # low degrees keep everything below the truncation
    total = (bracket(LIN, f, bracket(LIN, g, h)) + bracket(LIN, g, bracket(LIN, h, f))
             + bracket(LIN, h, bracket(LIN, f, g)))
    assert truncate(total, LIN.D - 2) == Polynomial(V)


@pytest.mark.parametrize("make", [sl2, sl2_k2, sl2_heisenberg])
def test_linear_tables_are_poisson(make):
    assert not jacobi_defects(levi_table(make(), 5))


@pytest.mark.parametrize("seed", range(2))
def test_pushforward_preserves_jacobi_and_linear_part(seed):
    d = sl2_k2()
    table, phi = perturbed_table(d, 5, seed)
    assert not jacobi_defects(table)
    assert linear_part(table) == d.full_constants()
    back = pushforward(table, invert_near_identity(phi, 5), 5)
    assert back == levi_table(d, 5)


def test_pushforward_frozen_example():
    # {x1, x2} = x2 pushed by x1 -> x1 + x2^2 gives {u1, u2} = u2 exactly
    W = ("a", "b")
    table = PoissonTable(W, {(0, 1): Polynomial(W, {(0, 1): mpq(1)})}, 5)
    phi = [Polynomial(W, {(1, 0): mpq(1), (0, 2): mpq(1)}), Polynomial.variable(W, 1)]
    out = pushforward(table, phi)
    assert out.entry(0, 1) == Polynomial(W, {(0, 1): mpq(1)})
    phi = [Polynomial.variable(W, 0), Polynomial(W, {(0, 1): mpq(1), (1, 1): mpq(1)})]
    # {a, b + ab} = b + ab = u2, so the table is unchanged in the new coordinates
    assert pushforward(table, phi).entry(0, 1) == Polynomial(W, {(0, 1): mpq(1)})


def test_jacobi_failure_detected():
    W = ("a", "b", "c")
    # (π_bc, π_ca, π_ab) = (c, 0, b) has v·curl v = c
    pi = {(0, 1): Polynomial.variable(W, 1), (1, 2): Polynomial.variable(W, 2)}
    J = jacobiator(PoissonTable(W, pi, 4))
    assert J[(0, 1, 2)] in (Polynomial.variable(W, 2), -Polynomial.variable(W, 2))


def test_linear_part_errors():
    W = ("a", "b")
    with pytest.raises(ConstantTermError):
        linear_part(PoissonTable(W, {(0, 1): Polynomial.constant(W, 1)}, 3))
    W3 = ("a", "b", "c")
    bad = {(0, 1): Polynomial.variable(W3, 1), (0, 2): Polynomial.variable(W3, 2),
           (1, 2): Polynomial.variable(W3, 0) + Polynomial.variable(W3, 1)}
    with pytest.raises(NotALieAlgebra):
        linear_part(PoissonTable(W3, bad, 3))


def test_table_validation():
    W = ("a", "b")
    with pytest.raises(VariableMismatch):
        PoissonTable(W, {(0, 1): Polynomial.variable(("u", "v"), 0)}, 3)
    with pytest.raises(ValueError):
        PoissonTable(W, {(0, 1): Polynomial.variable(W, 0), (1, 0): Polynomial.variable(W, 0)}, 3)
    t = PoissonTable(W, {(1, 0): Polynomial.variable(W, 0)}, 3)
    assert t.entry(0, 1) == -Polynomial.variable(W, 0)


def test_hamiltonian_field():
    X = hamiltonian_vf(LIN, Polynomial.variable(V, 0))
    # ad_h: e -> 2e, f -> -2f
    assert X[1] == Polynomial.variable(V, 1, 2)
    assert X[2] == Polynomial.variable(V, 2, -2)
