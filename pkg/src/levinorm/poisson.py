"""Truncated Poisson structures given by bracket tables.

A :class:`PoissonTable` stores ``{z_i, z_j}`` for ``i < j`` as polynomials
truncated at a global degree ``D``.  For tables with ``Π(0) = 0`` every
bracket of degree-``D`` jets is exact through degree ``D``; the Jacobi
identity is asserted through ``D - 1`` to leave room for inputs whose top
degree was produced by truncation.
"""

from __future__ import annotations

from itertools import combinations

from gmpy2 import mpq

from .liealg import NotALieAlgebra, antisymmetry_violations, jacobi_violations, default_variables
from .polyalg import (NotNearIdentity, PolyMap, Polynomial, VariableMismatch,
                      invert_near_identity, substitute_many, truncate)

__all__ = [
    "PoissonTable",
    "ConstantTermError",
    "bracket",
    "jacobiator",
    "jacobi_defects",
    "linear_part",
    "hamiltonian_vf",
    "pushforward",
    "linear_table",
    "levi_table",
]


class ConstantTermError(ValueError):
    """The table does not vanish at the origin."""


class PoissonTable:
    """Antisymmetric table of bracket polynomials.

    Parameters
    ----------
    variables : sequence of str
    pi : dict
        ``{(i, j): Polynomial}``; keys with ``i > j`` are accepted and stored
        with flipped sign.  Missing pairs are zero.
    D : int
        Truncation degree.
    m : int, optional
        Size of the leading (Levi factor) block of variables.
    """

    __slots__ = ("variables", "D", "m", "pi")

    def __init__(self, variables, pi, D, m=None):
        self.variables = tuple(variables)
        self.D = int(D)
        self.m = m
        n = len(self.variables)
        table = {}
        for (i, j), p in pi.items():
            if not (0 <= i < n and 0 <= j < n):
                raise IndexError(f"bracket index ({i},{j}) out of range for {n} variables")
            if p.variables != self.variables:
                raise VariableMismatch(f"bracket ({i},{j}) is over {p.variables}, expected {self.variables}")
            if i == j:
                if p:
                    raise ValueError(f"diagonal bracket {{z_{i}, z_{i}}} must vanish")
                continue
            key, q = ((i, j), p) if i < j else ((j, i), -p)
            if key in table and table[key] != q:
                raise ValueError(f"inconsistent entries for pair {key}")
            table[key] = truncate(q, self.D)
        zero = Polynomial(self.variables)
        for key in combinations(range(n), 2):
            table.setdefault(key, zero)
        self.pi = table

    @property
    def n(self):
        return len(self.variables)

    def entry(self, i, j):
        """``{z_i, z_j}`` for any ordered pair."""
        if i == j:
            return Polynomial(self.variables)
        return self.pi[(i, j)] if i < j else -self.pi[(j, i)]

    def __eq__(self, other):
        return (isinstance(other, PoissonTable) and self.variables == other.variables
                and self.D == other.D and self.pi == other.pi)

    __hash__ = None

    def truncate(self, D):
        return PoissonTable(self.variables, self.pi, D, self.m)

    def with_block(self, m):
        return PoissonTable(self.variables, self.pi, self.D, m)

    def bracket(self, f, g):
        return bracket(self, f, g)

    def __repr__(self):
        return f"PoissonTable(n={self.n}, D={self.D}, m={self.m})"

    def __str__(self):
        lines = []
        for (i, j), p in self.pi.items():
            if p:
                lines.append(f"{{{self.variables[i]}, {self.variables[j]}}} = {p}")
        return "\n".join(lines) or "(zero table)"


def bracket(table, f, g):
    """``{f, g}`` truncated at the table's degree."""
    V = table.variables
    if f.variables != V or g.variables != V:
        raise VariableMismatch("bracket operands must be over the table's variables")
    D = table.D
    df = [f.diff(i) for i in range(table.n)]
    dg = [g.diff(i) for i in range(table.n)]
    out = Polynomial(V)
    for (i, j), p in table.pi.items():
        if not p:
            continue
        inner = df[i].mul(dg[j], D - p.min_degree()) - df[j].mul(dg[i], D - p.min_degree())
        if inner:
            out = out + p.mul(inner, D)
    return out


def jacobiator(table):
    """``J(i,j,k)`` for all ``i < j < k``, each truncated at ``D - 1``."""
    n, D = table.n, table.D
    # {p, z_k} = sum_l {z_l, z_k} dp/dz_l
    def with_coordinate(p, k):
        out = Polynomial(table.variables)
        for l in range(n):
            dl = p.diff(l)
            if dl:
                out = out + table.entry(l, k).mul(dl, D - 1)
        return out

    J = {}
    for i, j, k in combinations(range(n), 3):
        J[(i, j, k)] = truncate(with_coordinate(table.entry(i, j), k)
                                + with_coordinate(table.entry(j, k), i)
                                + with_coordinate(table.entry(k, i), j), D - 1)
    return J


def jacobi_defects(table):
    """Nonzero entries of :func:`jacobiator`."""
    return {key: p for key, p in jacobiator(table).items() if p}


def linear_part(table):
    """Degree-one coefficients as an ``n x n x n`` structure tensor.

    Raises :class:`ConstantTermError` if some bracket has a constant term and
    :class:`NotALieAlgebra` if the constants fail the Jacobi identity.
    """
    n = table.n
    zero_exp = (0,) * n
    C = [[[mpq(0)] * n for _ in range(n)] for _ in range(n)]
    for (i, j), p in table.pi.items():
        if p.coefficient(zero_exp):
            raise ConstantTermError(f"Π(0) ≠ 0: bracket ({i},{j}) has a constant term")
        for k in range(n):
            e = tuple(1 if t == k else 0 for t in range(n))
            v = p.coefficient(e)
            if v:
                C[i][j][k] = v
                C[j][i][k] = -v
    if antisymmetry_violations(C) or jacobi_violations(C):
        raise NotALieAlgebra("linear part of the table is not a Lie algebra")
    return C


def hamiltonian_vf(table, f):
    """``X_f`` with component ``j`` equal to ``{f, z_j}``."""
    comps = []
    for j in range(table.n):
        comps.append(bracket(table, f, Polynomial.variable(table.variables, j)))
    return PolyMap(comps, role="vector-field")


def pushforward(table, phi, D=None, inverse=None):
    """Brackets of the new coordinates ``u = phi(z)`` rewritten in ``u``.

    ``pi'[i][j] = {u_i, u_j} ∘ phi^{-1}``.  ``inverse`` may be supplied when
    the caller already knows ``phi^{-1}`` to degree ``D``.
    """
    if not isinstance(phi, PolyMap):
        phi = PolyMap(phi)
    D = table.D if D is None else D
    if phi.variables != table.variables or len(phi) != table.n:
        raise VariableMismatch("coordinate change must be over the table's variables")
    if not phi.is_near_identity():
        raise NotNearIdentity("pushforward needs a near-identity coordinate change")
    base = table if table.D == D else table.truncate(D)
    u = [truncate(c, D) for c in phi.components]
    inv = inverse if inverse is not None else invert_near_identity(phi, D)
    pairs = list(combinations(range(table.n), 2))
    images = substitute_many([bracket(base, u[i], u[j]) for i, j in pairs], inv, D)
    return PoissonTable(table.variables, dict(zip(pairs, images)), D, table.m)


def linear_table(C, D, variables=None, m=None):
    """Linear Poisson table ``{z_i, z_j} = Σ_k C[i][j][k] z_k``."""
    n = len(C)
    V = tuple(variables) if variables is not None else tuple(f"z{i + 1}" for i in range(n))
    pi = {}
    for i, j in combinations(range(n), 2):
        terms = {}
        for k in range(n):
            if C[i][j][k]:
                terms[tuple(1 if t == k else 0 for t in range(n))] = C[i][j][k]
        pi[(i, j)] = Polynomial(V, terms)
    return PoissonTable(V, pi, D, m)


def levi_table(data, D, variables=None):
    """Linear table of a :class:`~levinorm.liealg.LeviAlgebraData` over ``(x, y)``."""
    V = variables if variables is not None else default_variables(data.n, data.m)
    return linear_table(data.full_constants(), D, V, data.m)
