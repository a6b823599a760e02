"""Standard Lie algebras and seeded perturbations used by tests and the CLI."""

from __future__ import annotations

import random

from gmpy2 import mpq

from .liealg import LeviAlgebraData
from .algebroid import AlgebroidData, base_names, dual_poisson, from_dual_poisson
from .poisson import levi_table, pushforward
from .polyalg import PolyMap, Polynomial, monomials

__all__ = [
    "sl2",
    "so3",
    "sl2_k2",
    "e3",
    "sl2_plus_k",
    "sl2_heisenberg",
    "ALGEBRAS",
    "random_polynomial",
    "random_near_identity",
    "perturbed_table",
    "action_algebroid",
    "perturbed_algebroid",
]

# [h, e] = 2e, [h, f] = -2f, [e, f] = h
_SL2 = [(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)]
# natural representation on (y1, y2): h y1 = y1, h y2 = -y2, e y2 = y1, f y1 = y2
_NATURAL = [(0, 0, 0, 1), (0, 1, 1, -1), (1, 1, 0, 1), (2, 0, 1, 1)]


def sl2():
    return LeviAlgebraData.from_triples(3, 3, c=_SL2)


def so3():
    """Compact form: ``[e1, e2] = e3`` and cyclic."""
    return LeviAlgebraData.from_triples(3, 3, c=[(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)])


def sl2_k2():
    """sl(2) acting on its natural representation, radical abelian."""
    return LeviAlgebraData.from_triples(5, 3, c=_SL2, a=_NATURAL)


def e3():
    """Euclidean algebra: so(3) acting on ``K^3`` by rotations, radical abelian."""
    rot = [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)]
    a = [(i, j, k, v) for i, j, k, v in rot] + [(i, k, j, -v) for i, j, k, v in rot]
    return LeviAlgebraData.from_triples(6, 3, c=rot, a=a)


def sl2_plus_k():
    """Direct sum with a one-dimensional center."""
    return LeviAlgebraData.from_triples(4, 3, c=_SL2)


def sl2_heisenberg():
    """sl(2) acting on the Heisenberg algebra ``[y1, y2] = y3``."""
    return LeviAlgebraData.from_triples(6, 3, c=_SL2, a=_NATURAL, b=[(0, 1, 2, 1)])


ALGEBRAS = {
    "sl2": sl2,
    "so3": so3,
    "sl2-k2": sl2_k2,
    "e3": e3,
    "sl2+k": sl2_plus_k,
    "sl2-heisenberg": sl2_heisenberg,
}


def random_polynomial(variables, degrees, rng, density=0.4, height=3, allowed=None):
    """Sparse polynomial with small rational coefficients in the given degrees."""
    n = len(variables)
    terms = {}
    for d in degrees:
        for e in monomials(n, d):
            if allowed is not None and not allowed(e):
                continue
            if rng.random() < density:
                num = rng.randint(-height, height)
                if num:
                    terms[e] = mpq(num, rng.randint(1, height))
    return Polynomial(variables, terms)


def random_near_identity(variables, rng, degrees=(2, 3), density=0.4, height=3, allowed=None):
    """``Id + ψ`` with ``ψ`` random of the given degrees.

    ``allowed(i, exponent)`` can restrict the support of component ``i``.
    """
    comps = []
    for i in range(len(variables)):
        filt = (lambda e, i=i: allowed(i, e)) if allowed is not None else None
        psi = random_polynomial(variables, degrees, rng, density, height, filt)
        comps.append(Polynomial.variable(variables, i) + psi)
    return PolyMap(comps)


def perturbed_table(data, D, seed, degrees=(2, 3), density=0.4, height=3):
    """Linear table of ``data`` pushed forward by a seeded near-identity map.

    Returns ``(table, phi)``.
    """
    rng = random.Random(seed)
    lin = levi_table(data, D)
    phi = random_near_identity(lin.variables, rng, degrees, density, height)
    return pushforward(lin, phi, D), phi


def action_algebroid(data, D):
    """Action algebroid of ``data.c`` acting linearly on ``K^r`` through ``data.a``.

    Sections ``s_1..s_m`` bracket with the Lie algebra constants and the
    anchor of ``s_i`` is the linear field ``Σ a_ij^k x_k ∂/∂x_j``.
    """
    m, r = data.m, data.r
    base = base_names(r)

    def linear(coeffs):
        return Polynomial(base, {tuple(int(t == k) for t in range(r)): v
                                 for k, v in enumerate(coeffs) if v})

    bracket = {(i, j): [Polynomial.constant(base, v) if v else Polynomial(base) for v in data.c[i][j]]
               for i in range(m) for j in range(i + 1, m)}
    anchor = [[linear(data.a[i][j]) for j in range(r)] for i in range(m)]
    return AlgebroidData(m, r, D, bracket, anchor)


def perturbed_algebroid(data, D, seed, degrees=(2, 3), density=0.4, height=3):
    """Action algebroid rewritten in a random fiber-linear frame and base chart.

    ``s_i -> s_i + Σ_k R_ik(x) s_k`` and ``x -> x + (base terms)``, both of the
    given total degrees.  Returns ``(AlgebroidData, phi)``.
    """
    A = action_algebroid(data, D)
    N = A.N
    lin = dual_poisson(A)

    def allowed(i, e):
        return sum(e[:N]) == (1 if i < N else 0)

    phi = random_near_identity(lin.variables, random.Random(seed), degrees, density, height, allowed)
    return from_dual_poisson(pushforward(lin, phi, D), N), phi
