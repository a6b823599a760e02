"""Exact linear algebra over Q or Q(i).

Sparse vectors are ``dict`` objects mapping an index to a nonzero scalar.
Dense matrices are lists of row lists.  Everything is exact; there is no
pivoting for stability because there is nothing to stabilize.
"""

from __future__ import annotations

import heapq

from gmpy2 import mpq

__all__ = [
    "InconsistentSystem",
    "SparseEliminator",
    "solve_sparse",
    "rref",
    "nullspace",
    "nullspace_from_rref",
    "column_basis",
    "inverse",
    "matmul",
    "matvec",
    "transpose",
    "identity",
    "vec_add",
    "vec_scale",
    "vec_axpy",
    "vec_is_zero",
    "connected_blocks",
]


class InconsistentSystem(ArithmeticError):
    """The linear system has no exact solution."""


# --- sparse vectors -------------------------------------------------------

def vec_axpy(y, a, x):
    """In-place ``y += a*x`` for sparse vectors; returns ``y``."""
    if not a:
        return y
    for k, v in x.items():
        s = y.get(k)
        if s is None:
            y[k] = a * v
        else:
            s = s + a * v
            if s:
                y[k] = s
            else:
                del y[k]
    return y


def vec_add(x, y):
    out = dict(x)
    return vec_axpy(out, 1, y)


def vec_scale(x, a):
    if not a:
        return {}
    return {k: a * v for k, v in x.items()}


def vec_is_zero(x):
    return not any(x.values())


# --- sparse elimination ---------------------------------------------------

class SparseEliminator:
    """Online row-echelon form for sparse exact systems ``A x = b``.

    Rows are added one at a time with :meth:`add_row`.  Every stored pivot
    row is reduced against all earlier pivots, so a new row can be reduced by
    visiting pivots in creation order.

    With ``multi=True`` each right-hand side is a sparse vector indexed by
    problem number, so one elimination solves many systems at once.
    """

    def __init__(self, multi=False):
        self._pivot_of = {}      # column -> position in self._rows
        self._rows = []          # (pivot column, row dict, rhs)
        self.multi = multi

    @property
    def rank(self):
        return len(self._rows)

    def _reduce(self, row, rhs):
        heap = [self._pivot_of[c] for c in row if c in self._pivot_of]
        heapq.heapify(heap)
        seen = set(heap)
        multi = self.multi
        while heap:
            pos = heapq.heappop(heap)
            col, prow, prhs = self._rows[pos]
            a = row.get(col)
            if not a:
                continue
            for c, v in prow.items():
                s = row.get(c)
                s = -a * v if s is None else s - a * v
                if s:
                    row[c] = s
                    p = self._pivot_of.get(c)
                    if p is not None and p not in seen:
                        seen.add(p)
                        heapq.heappush(heap, p)
                else:
                    row.pop(c, None)
            if multi:
                vec_axpy(rhs, -a, prhs)
            else:
                rhs = rhs - a * prhs
        return row, rhs

    def add_row(self, row, rhs=None):
        """Add one equation; returns False if it was redundant.

        Raises :class:`InconsistentSystem` if the row reduces to ``0 = c``
        with ``c != 0`` (in multi mode the exception's ``args[1]`` lists the
        offending problem numbers).
        """
        if rhs is None:
            rhs = {} if self.multi else 0
        elif self.multi:
            rhs = {k: v for k, v in rhs.items() if v}
        row = {k: v for k, v in row.items() if v}
        row, rhs = self._reduce(row, rhs)
        if not row:
            if rhs:
                raise InconsistentSystem("system has no solution",
                                         sorted(rhs) if self.multi else None)
            return False
        col = min(row)
        inv = mpq(1) / row[col]
        row = {c: v * inv for c, v in row.items()}
        self._pivot_of[col] = len(self._rows)
        self._rows.append((col, row, vec_scale(rhs, inv) if self.multi else rhs * inv))
        return True

    def solution(self):
        """Particular solution with all free variables set to zero.

        In multi mode the value for each column is a sparse vector over
        problem numbers.
        """
        x = {}
        multi = self.multi
        for col, row, rhs in reversed(self._rows):
            s = dict(rhs) if multi else rhs
            for c, v in row.items():
                if c != col:
                    xc = x.get(c)
                    if xc:
                        if multi:
                            vec_axpy(s, -v, xc)
                        else:
                            s = s - v * xc
            if s:
                x[col] = s
        return x


def solve_sparse(rows, rhs):
    """Solve ``A x = b`` exactly with free variables set to zero.

    Parameters
    ----------
    rows : list of dict
        Sparse rows of ``A``.
    rhs : list
        Right-hand side, one scalar per row.
    """
    elim = SparseEliminator()
    for row, b in zip(rows, rhs):
        elim.add_row(row, b)
    return elim.solution()


def connected_blocks(n, entries):
    """Index blocks of the graph whose edges are the nonzero ``(i, j)`` entries."""
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in entries:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


# --- dense helpers --------------------------------------------------------

def identity(n, one=1):
    return [[mpq(one) if i == j else mpq(0) for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(r) for r in zip(*a)]


def matmul(a, b):
    """Dense product; zero entries of ``a`` are skipped."""
    ncols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [mpq(0)] * ncols
        for k, x in enumerate(row):
            if x:
                for j, y in enumerate(b[k]):
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), mpq(0)) for row in a]


def rref(a):
    """Reduced row-echelon form; returns ``(rows, pivot_columns)``."""
    m = [list(r) for r in a]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = mpq(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(a, ncols=None):
    """Basis (list of dense vectors) of ``{x : A x = 0}``."""
    if not a:
        return [[mpq(1) if i == j else mpq(0) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(a)
    return nullspace_from_rref(red, pivots, len(a[0]))


def nullspace_from_rref(red, pivots, ncols):
    """Kernel basis read off an already reduced matrix."""
    pset = set(pivots)
    free = [c for c in range(ncols) if c not in pset]
    basis = []
    for f in free:
        v = [mpq(0)] * ncols
        v[f] = mpq(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def column_basis(a):
    """Indices of a maximal independent set of columns of ``A``."""
    if not a:
        return []
    _, pivots = rref(a)
    return pivots


def inverse(a):
    n = len(a)
    aug = [list(row) + [mpq(1) if i == j else mpq(0) for j in range(n)]
           for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]
