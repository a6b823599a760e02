"""Lie algebroids near a point where the anchor vanishes.

An algebroid of rank ``N`` over ``K^n`` is stored through its structure
functions in a local basis of sections ``s_1..s_N``:

* ``[s_i, s_j] = Σ_k P_ij^k(x) s_k``
* ``#s_i = Σ_j Q_ij(x) ∂/∂x_j`` with ``Q(0) = 0``

The dual table on ``(s_1..s_N, x_1..x_n)`` (sections read as fiber-linear
functions on the dual bundle) is the fiberwise-linear Poisson structure
``{s_i, s_j} = Σ_k P_ij^k s_k``, ``{s_i, x_j} = Q_ij``, ``{x_i, x_j} = 0``.
Normalizing that table with coordinate changes that are fiber-linear in
``s`` and base-only in ``x`` is the same as choosing a new basis of
sections and new base coordinates.

Degrees are total degrees in ``(s, x)``: a fiber-linear monomial
``s_k x^β`` has degree ``1 + |β|``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from gmpy2 import mpq

from .levi import NormalizationError, levi_normalize
from .liealg import LeviAlgebraData
from .poisson import PoissonTable, jacobi_defects, linear_part
from .polyalg import Polynomial, truncate

__all__ = [
    "AlgebroidData",
    "AlgebroidError",
    "NotALieAlgebroid",
    "dual_poisson",
    "from_dual_poisson",
    "check_fiberwise_linear",
    "linear_levi_data",
    "algebroid_levi_normalize",
    "algebroid_shape",
]

FUNCTION_KIND = "fiberlinear-function-window"
VECTOR_KIND = "algebroid-vectorfield-window"


class AlgebroidError(ValueError):
    """Malformed algebroid data."""


class NotALieAlgebroid(ArithmeticError):
    """Jacobi or Leibniz fails below the truncation degree."""


def fiber_names(N):
    return tuple(f"s{i + 1}" for i in range(N))


def base_names(n):
    return tuple(f"x{i + 1}" for i in range(n))


@dataclass(frozen=True)
class AlgebroidData:
    """Structure functions of a rank-``N`` algebroid over ``K^n``.

    ``bracket[(i, j)]`` (``i < j``) is the list of ``N`` coefficients
    ``P_ij^k`` and ``anchor[i]`` the list of ``n`` components ``Q_ij``, all
    polynomials in the base variables.
    """

    N: int
    n: int
    D: int
    bracket: dict
    anchor: tuple

    def __post_init__(self):
        base = base_names(self.n)
        br = {}
        for (i, j), coeffs in self.bracket.items():
            if not (0 <= i < self.N and 0 <= j < self.N) or i == j:
                raise AlgebroidError(f"bad bracket index ({i},{j})")
            if len(coeffs) != self.N:
                raise AlgebroidError(f"bracket ({i},{j}) needs {self.N} coefficients")
            coeffs = [self._base_poly(p, base) for p in coeffs]
            key, vals = ((i, j), coeffs) if i < j else ((j, i), [-p for p in coeffs])
            br[key] = [truncate(p, self.D - 1) for p in vals]
        zero = Polynomial(base)
        for key in combinations(range(self.N), 2):
            br.setdefault(key, [zero] * self.N)
        if len(self.anchor) != self.N or any(len(row) != self.n for row in self.anchor):
            raise AlgebroidError(f"anchor must be an {self.N} x {self.n} table")
        anchor = tuple(tuple(truncate(self._base_poly(p, base), self.D) for p in row)
                       for row in self.anchor)
        origin = (0,) * self.n
        for i, row in enumerate(anchor):
            for j, q in enumerate(row):
                if q.coefficient(origin):
                    raise AlgebroidError(f"anchor does not vanish at the origin: Q[{i}][{j}](0) != 0")
        object.__setattr__(self, "bracket", br)
        object.__setattr__(self, "anchor", anchor)

    @staticmethod
    def _base_poly(p, base):
        if p.variables != base:
            raise AlgebroidError(f"structure functions must be over {base}, got {p.variables}")
        return p

    @property
    def variables(self):
        return fiber_names(self.N) + base_names(self.n)

    def structure(self, i, j):
        if i == j:
            return [Polynomial(base_names(self.n))] * self.N
        if i < j:
            return self.bracket[(i, j)]
        return [-p for p in self.bracket[(j, i)]]

    def __eq__(self, other):
        return (isinstance(other, AlgebroidData) and (self.N, self.n, self.D) == (other.N, other.n, other.D)
                and self.bracket == other.bracket and self.anchor == other.anchor)

    __hash__ = None


def _lift(p, V, N):
    """Base polynomial as a polynomial on ``(s, x)``."""
    return p.embed(V, list(range(N, N + p.nvars)))


def dual_poisson(A, check=True):
    """Fiberwise-linear Poisson table on ``(s_1..s_N, x_1..x_n)``."""
    V, N = A.variables, A.N
    pi = {}
    for (i, j), coeffs in A.bracket.items():
        p = Polynomial(V)
        for k, c in enumerate(coeffs):
            if c:
                p = p + _lift(c, V, N) * Polynomial.variable(V, k)
        pi[(i, j)] = p
    for i, row in enumerate(A.anchor):
        for j, q in enumerate(row):
            pi[(i, N + j)] = _lift(q, V, N)
    table = PoissonTable(V, pi, A.D)
    if check:
        bad = jacobi_defects(table)
        if bad:
            raise NotALieAlgebroid(f"not a Lie algebroid to order {A.D - 1}: Jacobi fails on {min(bad)}")
    return table


def _fiber_degree(e, N):
    return sum(e[:N])


def _fiber_linear_change(psi, N):
    """Coordinate change with fiber components linear in ``s`` and base components free of ``s``."""
    return all(all(_fiber_degree(e, N) == (1 if i < N else 0) for e in p.terms)
               for i, p in enumerate(psi))


def check_fiberwise_linear(table, N):
    """``{s,s}`` fiber-linear, ``{s,x}`` base-only, ``{x,x} = 0``."""
    n = table.n
    for (i, j), p in table.pi.items():
        want = 1 if j < N else (0 if i < N else None)
        if want is None:
            if p:
                return False
            continue
        if any(_fiber_degree(e, N) != want for e in p.terms):
            return False
    return n >= N


def from_dual_poisson(table, N):
    """Read an :class:`AlgebroidData` back from a fiberwise-linear table."""
    if not check_fiberwise_linear(table, N):
        raise AlgebroidError("table is not fiberwise linear")
    n = table.n - N
    base = base_names(n)

    def base_part(terms):
        return Polynomial(base, {e[N:]: c for e, c in terms.items()})

    bracket = {}
    for i, j in combinations(range(N), 2):
        coeffs = []
        for k in range(N):
            coeffs.append(base_part({e: c for e, c in table.entry(i, j).terms.items() if e[k] == 1}))
        bracket[(i, j)] = coeffs
    anchor = tuple(tuple(base_part(table.entry(i, N + j).terms) for j in range(n)) for i in range(N))
    return AlgebroidData(N, n, table.D, bracket, anchor)


def linear_levi_data(A, m):
    """Levi data of the dual table's linear part, assuming ``s_1..s_m`` span a Levi factor.

    The radical block is ``(s_{m+1}..s_N, x_1..x_n)``.
    """
    C = linear_part(dual_poisson(A, check=False))
    n, r = A.N + A.n, A.N + A.n - m
    c = [[[C[i][j][k] for k in range(m)] for j in range(m)] for i in range(m)]
    for i in range(m):
        for j in range(m):
            if any(C[i][j][k] for k in range(m, n)):
                raise AlgebroidError("s_1..s_m do not close under the bracket at the origin")
    a = [[[C[i][m + j][m + k] for k in range(r)] for j in range(r)] for i in range(m)]
    b = [[[C[m + i][m + j][m + k] for k in range(r)] for j in range(r)] for i in range(r)]
    return LeviAlgebraData(n, m, c, a, b)


def algebroid_shape(A, data):
    """Exact checks of the algebroid normal form against ``data``."""
    m, N, n = data.m, A.N, A.n
    base = base_names(n)
    ok_ss = ok_sv = ok_anchor = True
    for i in range(m):
        for j in range(i + 1, N):
            for k, p in enumerate(A.structure(i, j)):
                if j < m:
                    want = data.c[i][j][k] if k < m else 0
                else:
                    want = data.a[i][j - m][k - m] if k >= m else 0
                target = Polynomial.constant(base, want) if want else Polynomial(base)
                if p != target:
                    if j < m:
                        ok_ss = False
                    else:
                        ok_sv = False
        for j in range(n):
            # #s_i (x_j) = Σ_k b_ij^k x_k, read from the Levi a-tensor on the base block
            terms = {}
            for k in range(n):
                v = data.a[i][N - m + j][N - m + k]
                if v:
                    terms[tuple(1 if t == k else 0 for t in range(n))] = v
            if A.anchor[i][j] != Polynomial(base, terms):
                ok_anchor = False
    return {"ss_constant": ok_ss, "sv_constant": ok_sv, "anchor_linear": ok_anchor}


def algebroid_levi_normalize(A, data, steps, schedule="doubling", verify=True, on_step=None):
    """Normalize an algebroid whose linear part has Levi data ``data``.

    Runs the Poisson normalization on the dual table with fiber-linear
    function windows and constrained vector-field windows.  Returns
    ``(normalized AlgebroidData, Φ, log)``.
    """
    if data.n != A.N + A.n:
        raise AlgebroidError(f"Levi data has dimension {data.n}, expected N + n = {A.N + A.n}")
    if data.m > A.N:
        raise AlgebroidError("Levi factor larger than the rank")
    table = dual_poisson(A)
    kinds = {"function": FUNCTION_KIND, "vector": VECTOR_KIND}
    out, phi, log = levi_normalize(table, data, steps, schedule, verify=verify,
                                   window_kinds=kinds, fiber=A.N, on_step=on_step)
    if not check_fiberwise_linear(out, A.N):
        raise NormalizationError("normalized table left the fiberwise-linear class", log)
    result = from_dual_poisson(out, A.N)
    if verify:
        log.checks.update(algebroid_shape(result, data))
        log.checks["fiberwise_linear"] = all(
            check_fiberwise_linear(s.table, A.N) and _fiber_linear_change(s.psi, A.N)
            for s in log.steps)
        failed = [k for k, v in log.checks.items() if not v]
        if failed:
            raise NormalizationError("algebroid normal form violates " + ", ".join(failed), log)
    return result, phi, log
