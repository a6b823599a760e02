import math
import random

import numpy as np
import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, strategies as st

from levinorm.polyalg import (NotNearIdentity, PolyMap, Polynomial, VariableMismatch, compose,
                              graded_lex_key, invert_near_identity, majorant_sup_norm, monomials,
                              substitute, truncate, weighted_l2_norm, window_part)
from levinorm.scalars import GaussianRational

from conftest import polynomials, rationals

V = ("z1", "z2", "z3")
SYM = sympy.symbols(V)


def to_sympy(p):
    out = 0
    for e, c in p.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for s, k in zip(SYM, e):
            term *= s ** k
        out += term
    return sympy.expand(out)


def sympy_truncate(expr, D):
    poly = sympy.Poly(expr, *SYM)
    return sum((c * sympy.prod([s ** k for s, k in zip(SYM, m)])
                for m, c in poly.terms() if sum(m) <= D), sympy.Integer(0))


def near_identity(rng, degrees=(2, 3)):
    comps = []
    for i in range(3):
        terms = {e: mpq(rng.randint(-3, 3), rng.randint(1, 3)) for d in degrees
                 for e in monomials(3, d) if rng.random() < 0.3}
        comps.append(Polynomial.variable(V, i) + Polynomial(V, terms))
    return PolyMap(comps)


# --- ring laws ---------------------------------------------------------------

@given(polynomials(), polynomials(), polynomials())
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Polynomial(V)


@given(polynomials(), polynomials())
def test_product_matches_sympy(a, b):
    assert to_sympy(a * b) == sympy.expand(to_sympy(a) * to_sympy(b))


@given(polynomials(), polynomials(), st.integers(0, 6))
def test_truncated_product(a, b, D):
    assert a.mul(b, D) == truncate(a * b, D)


@given(polynomials(), st.integers(0, 2))
def test_diff_matches_sympy(a, i):
    assert to_sympy(a.diff(i)) == sympy.expand(sympy.diff(to_sympy(a), SYM[i]))


@given(polynomials(max_degree=5), st.integers(0, 3), st.integers(0, 3))
def test_window_part_partition(p, lo, width):
    hi = lo + width
    low, mid, high = truncate(p, lo), window_part(p, lo, hi), p - truncate(p, hi)
    assert low + mid + high == p
    assert all(lo < sum(e) <= hi for e in mid.terms)


def test_monomials_graded_lex():
    ms = monomials(3, 2)
    assert len(ms) == 6
    assert sorted(ms, key=graded_lex_key) == ms
    assert ms[0] == (2, 0, 0)


def test_variable_mismatch():
    with pytest.raises(VariableMismatch):
        Polynomial(("a",), {(1,): 1}) + Polynomial(("b",), {(1,): 1})


# --- substitution, composition, inversion ------------------------------------

@pytest.mark.parametrize("seed", range(4))
def test_substitute_matches_sympy(seed):
    rng = random.Random(seed)
    phi = near_identity(rng)
    p = Polynomial(V, {e: mpq(rng.randint(-4, 4)) for d in (1, 2, 3) for e in monomials(3, d)
                       if rng.random() < 0.4})
    D = 6
    got = substitute(p, phi, D)
    expr = to_sympy(p).subs(dict(zip(SYM, [to_sympy(c) for c in phi])), simultaneous=True)
    assert to_sympy(got) == sympy.expand(sympy_truncate(sympy.expand(expr), D))


def test_substitute_general_map_with_constants():
    W = ("u", "v")
    p = Polynomial(("a", "b"), {(1, 1): mpq(1), (2, 0): mpq(2)})
    phi = [Polynomial(W, {(0, 0): mpq(1), (1, 0): mpq(1)}), Polynomial(W, {(0, 1): mpq(3)})]
    # (1+u)(3v) + 2(1+u)^2
    want = Polynomial(W, {(0, 1): mpq(3), (1, 1): mpq(3), (0, 0): mpq(2), (1, 0): mpq(4), (2, 0): mpq(2)})
    assert substitute(p, phi, 4) == want


@pytest.mark.parametrize("seed", range(4))
def test_inverse_is_two_sided(seed):
    phi = near_identity(random.Random(seed))
    D = 8
    inv = invert_near_identity(phi, D)
    ident = PolyMap.identity(V)
    assert compose(phi, inv, D) == ident.truncate(D)
    assert compose(inv, phi, D) == ident.truncate(D)


def test_inverse_frozen_example():
    # φ = (z1 + z2^2, z2): exact inverse (z1 - z2^2, z2)
    phi = PolyMap([Polynomial(V, {(1, 0, 0): 1, (0, 2, 0): 1}), Polynomial.variable(V, 1),
                   Polynomial.variable(V, 2)])
    inv = invert_near_identity(phi, 10)
    assert inv[0] == Polynomial(V, {(1, 0, 0): 1, (0, 2, 0): -1})


def test_inverse_rejects_non_near_identity():
    phi = PolyMap([Polynomial.variable(V, 0, 2), Polynomial.variable(V, 1), Polynomial.variable(V, 2)])
    with pytest.raises(NotNearIdentity):
        invert_near_identity(phi, 4)


@pytest.mark.parametrize("seed", range(3))
def test_composition_associative(seed):
    rng = random.Random(seed)
    a, b, c = near_identity(rng), near_identity(rng), near_identity(rng)
    D = 6
    assert compose(compose(a, b, D), c, D) == compose(a, compose(b, c, D), D)


# --- norms -------------------------------------------------------------------

def test_norm_frozen_values():
    p = Polynomial(("a", "b"), {(1, 1): 1})
    assert math.isclose(weighted_l2_norm(p, 1.0), 1 / math.sqrt(12))
    assert math.isclose(weighted_l2_norm(p, 1.0, measure="sphere"), 1 / math.sqrt(6))
    one = Polynomial.constant(("a", "b"), 3)
    assert weighted_l2_norm(one, 2.0) == 3.0


@given(polynomials(), st.floats(0.1, 3.0), st.floats(1.01, 2.0))
def test_norm_monotone_in_rho(p, rho, factor):
    assert weighted_l2_norm(p, rho) <= weighted_l2_norm(p, rho * factor) + 1e-12
    assert majorant_sup_norm(p, rho) <= majorant_sup_norm(p, rho * factor) + 1e-12


@given(st.integers(0, 4), st.floats(0.2, 3.0), rationals())
def test_homogeneous_scaling(d, rho, c):
    e = monomials(3, d)[0]
    p = Polynomial(V, {e: c})
    assert math.isclose(weighted_l2_norm(p, rho), weighted_l2_norm(p, 1.0) * rho ** d, rel_tol=1e-12)


@given(polynomials(), polynomials())
def test_monomials_orthogonal(a, b):
    if set(a.terms) & set(b.terms):
        return
    lhs = weighted_l2_norm(a + b, 1.3) ** 2
    assert math.isclose(lhs, weighted_l2_norm(a, 1.3) ** 2 + weighted_l2_norm(b, 1.3) ** 2,
                        rel_tol=1e-9, abs_tol=1e-12)


def test_gaussian_coefficients_norm():
    p = Polynomial(("a",), {(1,): GaussianRational(3, 4)})
    # |c|^2 / 2 on the unit disc
    assert math.isclose(weighted_l2_norm(p, 1.0), 5 / math.sqrt(2))


@given(polynomials(), st.floats(0.2, 2.0))
def test_majorant_dominates_values(p, rho):
    rng = np.random.default_rng(0)
    z = rng.normal(size=(50, 3)) + 1j * rng.normal(size=(50, 3))
    z *= rho / np.linalg.norm(z, axis=1, keepdims=True)
    bound = majorant_sup_norm(p, rho)
    for pt in z:
        val = sum(complex(float(c)) * np.prod(pt ** np.array(e)) for e, c in p.terms.items())
        assert abs(val) <= bound * (1 + 1e-9) + 1e-12
