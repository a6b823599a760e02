"""Finite-dimensional Lie algebras with a declared Levi split.

Conventions
-----------
A Lie algebra ``L`` of dimension ``n`` is given by structure constants
``C[i][j][k]`` with ``[e_i, e_j] = sum_k C[i][j][k] e_k``.  A
:class:`LeviAlgebraData` stores the three blocks of ``L = g ⋉ r``:

* ``c[i][j][k]``: ``[x_i, x_j] = sum_k c[i][j][k] x_k`` (Levi factor),
* ``a[i][j][k]``: ``[x_i, y_j] = sum_k a[i][j][k] y_k`` (action on radical),
* ``b[i][j][k]``: ``[y_i, y_j] = sum_k b[i][j][k] y_k`` (radical).

Indices are zero-based everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from gmpy2 import mpq

from . import linalg
from .polyalg import Polynomial, monomials

__all__ = [
    "LeviAlgebraData",
    "LeviInputError",
    "NotALieAlgebra",
    "NotSemisimple",
    "LeviSplitError",
    "ConstraintError",
    "ValidationReport",
    "validate_levi_input",
    "killing_form",
    "jacobi_violations",
    "adjoint_matrices",
    "levi_malcev_split",
    "CasimirElement",
    "casimir",
    "ModuleWindow",
    "WINDOW_KINDS",
    "build_window",
    "CasimirSplit",
]


class LeviInputError(ValueError):
    """Structure constants with inconsistent shapes."""


class NotALieAlgebra(ValueError):
    """Antisymmetry or the Jacobi identity fails."""


class NotSemisimple(ValueError):
    """Degenerate Killing form where a semisimple algebra is required."""


class LeviSplitError(ArithmeticError):
    """The Levi factor could not be lifted exactly."""


class ConstraintError(ArithmeticError):
    """A vector left the constrained (fiberwise-linear) subspace it must stay in."""


def _zeros(*shape):
    if len(shape) == 1:
        return [mpq(0)] * shape[0]
    return [_zeros(*shape[1:]) for _ in range(shape[0])]


def _freeze(t):
    if isinstance(t, (list, tuple)):
        return tuple(_freeze(x) for x in t)
    return t


@dataclass(frozen=True)
class LeviAlgebraData:
    """Structure constants of ``L = g ⋉ r`` in a Levi-adapted basis."""

    n: int
    m: int
    c: tuple
    a: tuple
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", _freeze(self.c))
        object.__setattr__(self, "a", _freeze(self.a))
        object.__setattr__(self, "b", _freeze(self.b))

    @property
    def r(self):
        """Dimension of the radical block."""
        return self.n - self.m

    @classmethod
    def from_triples(cls, n, m, c=(), a=(), b=()):
        """Build from sparse ``(i, j, k, value)`` entries.

        Only one of ``(i, j)`` / ``(j, i)`` needs to be listed for ``c`` and
        ``b``; the other is filled in by antisymmetry unless it is listed too.
        """
        r = n - m
        if m < 0 or r < 0:
            raise LeviInputError(f"invalid dimensions n={n}, m={m}")
        C, A, B = _zeros(m, m, m), _zeros(m, r, r), _zeros(r, r, r)
        for tensor, entries, sizes, antisym in ((C, c, (m, m, m), True),
                                                (A, a, (m, r, r), False),
                                                (B, b, (r, r, r), True)):
            given = set()
            for i, j, k, v in entries:
                if not (0 <= i < sizes[0] and 0 <= j < sizes[1] and 0 <= k < sizes[2]):
                    raise LeviInputError(f"index ({i},{j},{k}) out of range {sizes}")
                tensor[i][j][k] = v
                given.add((i, j, k))
            if antisym:
                for i, j, k in list(given):
                    if (j, i, k) not in given:
                        tensor[j][i][k] = -tensor[i][j][k]
        return cls(n, m, C, A, B)

    def to_triples(self):
        out = {}
        for name, t in (("c", self.c), ("a", self.a), ("b", self.b)):
            out[name] = [(i, j, k, v) for i, p in enumerate(t) for j, q in enumerate(p)
                         for k, v in enumerate(q) if v]
        return out

    def full_constants(self):
        """``n x n x n`` tensor of the whole algebra in the basis ``(x, y)``."""
        n, m = self.n, self.m
        C = _zeros(n, n, n)
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    C[i][j][k] = self.c[i][j][k]
            for j in range(self.r):
                for k in range(self.r):
                    v = self.a[i][j][k]
                    C[i][m + j][m + k] = v
                    C[m + j][i][m + k] = -v
        for i in range(self.r):
            for j in range(self.r):
                for k in range(self.r):
                    C[m + i][m + j][m + k] = self.b[i][j][k]
        return C

    @cached_property
    def killing(self):
        return killing_form(self.c, self.m)

    @cached_property
    def casimir(self):
        return casimir(self.c, self.m)


@dataclass
class ValidationReport:
    problems: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.problems

    def add(self, code, message, **detail):
        self.problems.append({"code": code, "message": message, **detail})

    def __bool__(self):
        return self.ok


# --- structure-constant utilities ----------------------------------------

def _shape_ok(t, shape):
    if len(shape) == 0:
        return True
    return (isinstance(t, (list, tuple)) and len(t) == shape[0]
            and all(_shape_ok(x, shape[1:]) for x in t))


def bracket_vectors(C, u, v):
    """``[u, v]`` for coordinate vectors under structure constants ``C``."""
    n = len(C)
    out = [mpq(0)] * n
    for i, ui in enumerate(u):
        if not ui:
            continue
        for j, vj in enumerate(v):
            if not vj:
                continue
            f = ui * vj
            row = C[i][j]
            for k in range(n):
                if row[k]:
                    out[k] += f * row[k]
    return out


def antisymmetry_violations(C):
    n = len(C)
    return [(i, j) for i in range(n) for j in range(i, n)
            if any(C[i][j][k] + C[j][i][k] for k in range(n))]


def jacobi_violations(C):
    """Triples ``i < j < k`` where the Jacobi identity fails."""
    n = len(C)
    bad = []
    for i, j, k in combinations(range(n), 3):
        total = [mpq(0)] * n
        for p, q, r in ((i, j, k), (j, k, i), (k, i, j)):
            # [[e_p, e_q], e_r]
            for s in range(n):
                cs = C[p][q][s]
                if cs:
                    for t in range(n):
                        if C[s][r][t]:
                            total[t] += cs * C[s][r][t]
        if any(total):
            bad.append((i, j, k))
    return bad


def adjoint_matrices(c, m):
    """``ad(x_i)`` as dense matrices: column ``j`` holds ``[x_i, x_j]``."""
    return [[[c[i][j][k] for j in range(m)] for k in range(m)] for i in range(m)]


def killing_form(c, m=None):
    """``K(i, j) = trace(ad x_i ∘ ad x_j)`` as an exact symmetric matrix."""
    m = len(c) if m is None else m
    if not _shape_ok(c, (m, m, m)):
        raise LeviInputError("structure tensor must be m x m x m")
    K = _zeros(m, m)
    for i in range(m):
        for j in range(i, m):
            s = mpq(0)
            for k in range(m):
                for l in range(m):
                    # (ad_i ad_j)[k][k] = sum_l ad_i[k][l] ad_j[l][k] = c[i][l][k] c[j][k][l]
                    if c[i][l][k] and c[j][k][l]:
                        s += c[i][l][k] * c[j][k][l]
            K[i][j] = K[j][i] = s
    return K


def _det_nonzero(M):
    if not M:
        return True
    _, piv = linalg.rref(M)
    return len(piv) == len(M)


def is_semisimple(c, m=None):
    m = len(c) if m is None else m
    return _det_nonzero(killing_form(c, m))


def validate_levi_input(data):
    """Check every invariant of :class:`LeviAlgebraData`.

    Raises :class:`LeviInputError` on inconsistent shapes; all other
    violations are collected into the returned :class:`ValidationReport`.
    """
    n, m, r = data.n, data.m, data.n - data.m
    if m < 0 or r < 0:
        raise LeviInputError(f"invalid dimensions n={n}, m={m}")
    for name, t, shape in (("c", data.c, (m, m, m)), ("a", data.a, (m, r, r)),
                           ("b", data.b, (r, r, r))):
        if not _shape_ok(t, shape):
            raise LeviInputError(f"tensor {name} does not have shape {shape}")
    rep = ValidationReport()
    for name, t, size in (("c", data.c, m), ("b", data.b, r)):
        for i in range(size):
            for j in range(i, size):
                if any(t[i][j][k] + t[j][i][k] for k in range(size)):
                    rep.add("antisymmetry", f"{name}[{i}][{j}] != -{name}[{j}][{i}]",
                            tensor=name, pair=[i, j])
    C = data.full_constants()
    for tri in jacobi_violations(C):
        rep.add("jacobi", f"Jacobi identity fails on basis triple {tri}", triple=list(tri))
    if m and not _det_nonzero(killing_form(data.c, m)):
        rep.add("not_semisimple", "Levi factor not semisimple (degenerate Killing form)")
    # module law for the a-tensor
    rho = [[[data.a[i][j][k] for j in range(r)] for k in range(r)] for i in range(m)]
    for i, j in combinations(range(m), 2):
        lhs = [[x - y for x, y in zip(r1, r2)]
               for r1, r2 in zip(linalg.matmul(rho[i], rho[j]), linalg.matmul(rho[j], rho[i]))]
        rhs = _zeros(r, r)
        for k in range(m):
            ck = data.c[i][j][k]
            if ck:
                for p in range(r):
                    for q in range(r):
                        rhs[p][q] += ck * rho[k][p][q]
        if lhs != rhs:
            rep.add("module_law", f"a-tensor is not a g-module structure for pair ({i},{j})",
                    pair=[i, j])
    return rep


# --- Levi-Malcev ----------------------------------------------------------

def _span_basis(vectors):
    vectors = [list(v) for v in vectors if any(v)]
    if not vectors:
        return []
    red, piv = linalg.rref(vectors)
    return [row for row in red[:len(piv)]]


def _coords(Binv, v):
    # rows of B are basis vectors; v = coords @ B  =>  coords = v @ Binv
    n = len(v)
    return [sum((v[i] * Binv[i][j] for i in range(n) if v[i]), mpq(0)) for j in range(n)]


def levi_malcev_split(C):
    """Levi decomposition of an arbitrary Lie algebra given by ``C``.

    Returns ``(P, data)`` where the rows of ``P`` are the new basis vectors
    written in the old basis: the first ``data.m`` span a Levi factor, the
    remaining ones the radical.  The radical is the Killing-orthogonal
    complement of ``[L, L]``; the Levi factor is lifted through the derived
    series of the radical one abelian layer at a time.
    """
    n = len(C)
    if not _shape_ok(C, (n, n, n)):
        raise LeviInputError("structure tensor must be n x n x n")
    if antisymmetry_violations(C) or jacobi_violations(C):
        raise NotALieAlgebra("input constants do not define a Lie algebra")
    ident = linalg.identity(n)
    if n == 0:
        return ident, LeviAlgebraData(0, 0, (), (), ())
    KL = killing_form(C, n)
    derived = _span_basis([C[i][j] for i in range(n) for j in range(i + 1, n)])
    if derived:
        radical = linalg.nullspace(linalg.matmul(derived, KL))
    else:
        radical = [row for row in ident]
    radical = _span_basis(radical)
    m = n - len(radical)
    if m == 0:
        return ident, LeviAlgebraData(n, 0, (), (), C)

    # complement of the radical: unit vectors at non-pivot columns
    _, piv = linalg.rref(radical) if radical else ([], [])
    S = [ident[c][:] for c in range(n) if c not in set(piv)]
    basis = S + radical
    Binv = linalg.inverse(basis)
    # constants of the quotient L / r in the images of S
    cq = [[_coords(Binv, bracket_vectors(C, S[i], S[j]))[:m] for j in range(m)] for i in range(m)]

    layers = [radical]
    while layers[-1]:
        R = layers[-1]
        layers.append(_span_basis([bracket_vectors(C, u, v) for u, v in combinations(R, 2)]))

    for Rk, Rnext in zip(layers, layers[1:]):
        if not Rk:
            break
        annihilator = linalg.nullspace(Rnext) if Rnext else [row for row in ident]
        d = len(Rk)
        # unknown mu[i][t] -> column i*d + t
        brS = [[bracket_vectors(C, S[i], Rk[t]) for t in range(d)] for i in range(m)]
        elim = linalg.SparseEliminator()
        for i, j in combinations(range(m), 2):
            const = bracket_vectors(C, S[i], S[j])
            for l in range(m):
                if cq[i][j][l]:
                    const = [x - cq[i][j][l] * y for x, y in zip(const, S[l])]
            for q in annihilator:
                row = {}
                for t in range(d):
                    # + [S_i, mu_j] - [S_j, mu_i] - sum_l c_ij^l mu_l
                    v1 = sum((a * b for a, b in zip(q, brS[i][t])), mpq(0))
                    if v1:
                        row[j * d + t] = row.get(j * d + t, 0) + v1
                    v2 = sum((a * b for a, b in zip(q, brS[j][t])), mpq(0))
                    if v2:
                        row[i * d + t] = row.get(i * d + t, 0) - v2
                    for l in range(m):
                        if cq[i][j][l]:
                            v3 = cq[i][j][l] * sum((a * b for a, b in zip(q, Rk[t])), mpq(0))
                            if v3:
                                row[l * d + t] = row.get(l * d + t, 0) - v3
                rhs = -sum((a * b for a, b in zip(q, const)), mpq(0))
                try:
                    elim.add_row(row, rhs)
                except linalg.InconsistentSystem as exc:
                    raise LeviSplitError("could not lift the Levi factor") from exc
        mu = elim.solution()
        for i in range(m):
            for t in range(d):
                v = mu.get(i * d + t)
                if v:
                    S[i] = [x + v * y for x, y in zip(S[i], Rk[t])]

    P = S + radical
    Pinv = linalg.inverse(P)
    Cn = [[_coords(Pinv, bracket_vectors(C, P[i], P[j])) for j in range(n)] for i in range(n)]
    r = n - m
    for i in range(m):
        for j in range(m):
            if any(Cn[i][j][m:]):
                raise LeviSplitError("lifted Levi factor is not closed under the bracket")
    c = [[[Cn[i][j][k] for k in range(m)] for j in range(m)] for i in range(m)]
    a = [[[Cn[i][m + j][m + k] for k in range(r)] for j in range(r)] for i in range(m)]
    b = [[[Cn[m + i][m + j][m + k] for k in range(r)] for j in range(r)] for i in range(r)]
    data = LeviAlgebraData(n, m, c, a, b)
    if not is_semisimple(c, m):
        raise LeviSplitError("recovered Levi factor is not semisimple")
    return P, data


# --- Casimir --------------------------------------------------------------

@dataclass(frozen=True)
class CasimirElement:
    """``Γ = sum_i x_i · f^i`` with ``K(x_i, f^j) = δ_ij``.

    ``pairs[i] = (i, dual)`` where ``dual`` is the coordinate vector of
    ``f^i`` in the basis ``x``.
    """

    pairs: tuple

    def operator(self, rho):
        """Dense matrix of Γ for dense representation matrices ``rho``."""
        dim = len(rho[0]) if rho else 0
        out = _zeros(dim, dim)
        for i, dual in self.pairs:
            fi = _zeros(dim, dim)
            for l, w in enumerate(dual):
                if w:
                    for p in range(dim):
                        for q in range(dim):
                            if rho[l][p][q]:
                                fi[p][q] += w * rho[l][p][q]
            prod = linalg.matmul(rho[i], fi)
            for p in range(dim):
                for q in range(dim):
                    out[p][q] += prod[p][q]
        return out

    def sparse_operator(self, columns, dim):
        """Γ on a window given by sparse action columns ``columns[i][b] = {row: v}``."""
        out = [dict() for _ in range(dim)]
        for b in range(dim):
            acc = out[b]
            for i, dual in self.pairs:
                # f^i acting on basis vector b
                fv = {}
                for l, w in enumerate(dual):
                    if w:
                        linalg.vec_axpy(fv, w, columns[l][b])
                for row, v in fv.items():
                    linalg.vec_axpy(acc, v, columns[i][row])
        return out


def casimir(c, m=None):
    """Casimir element in dual-pair form; raises if the Killing form is degenerate."""
    m = len(c) if m is None else m
    K = killing_form(c, m)
    try:
        Kinv = linalg.inverse(K) if m else []
    except ZeroDivisionError as exc:
        raise NotSemisimple("Levi factor not semisimple (degenerate Killing form)") from exc
    return CasimirElement(tuple((i, tuple(Kinv[i])) for i in range(m)))


# --- module windows -------------------------------------------------------

WINDOW_KINDS = ("function-window", "vectorfield-window",
                "fiberlinear-function-window", "algebroid-vectorfield-window")


class CasimirSplit:
    """``W = ker Γ ⊕ im Γ`` computed block by block.

    Blocks are the connected components of the nonzero pattern of Γ; on each
    block the projector onto ``ker Γ`` and the operator ``Γ^{-1} ∘ P_1`` are
    stored densely.
    """

    def __init__(self, gamma_columns, dim):
        self.dim = dim
        self.gamma = gamma_columns
        edges = [(b, row) for b in range(dim) for row in gamma_columns[b]]
        self.blocks = linalg.connected_blocks(dim, edges)
        self.block_of = {}
        self._p0 = []
        self._ginv = []
        self.dim_w0 = 0
        for bi, blk in enumerate(self.blocks):
            for t, idx in enumerate(blk):
                self.block_of[idx] = (bi, t)
            p0, ginv, k = self._factor(blk)
            self._p0.append(p0)
            self._ginv.append(ginv)
            self.dim_w0 += k

    @property
    def dim_w1(self):
        return self.dim - self.dim_w0

    def _factor(self, blk):
        s = len(blk)
        pos = {idx: t for t, idx in enumerate(blk)}
        G = _zeros(s, s)
        for t, idx in enumerate(blk):
            for row, v in self.gamma[idx].items():
                G[pos[row]][t] = v
        if not any(any(r) for r in G):
            return linalg.identity(s), None, s
        red, cols = linalg.rref(G)
        ker = linalg.nullspace_from_rref(red, cols, s)
        im = [[G[p][c] for p in range(s)] for c in cols]
        k = len(ker)
        if k + len(im) != s:
            raise ArithmeticError("Casimir operator is not diagonalizable on this window")
        T = linalg.transpose(ker + im)       # columns: kernel basis then image basis
        try:
            Tinv = linalg.inverse(T)
        except ZeroDivisionError as exc:
            raise ArithmeticError("ker Γ and im Γ intersect; module not completely reducible") from exc
        p0 = linalg.matmul(linalg.transpose(ker), Tinv[:k]) if k else None
        # Γ^{-1} P_1 v = P_1 x where v = K a + G x and x is supported on the pivot columns
        x = [[mpq(0)] * s for _ in range(s)]
        for row, c in zip(Tinv[k:], cols):
            x[c] = row
        ginv = x if p0 is None else [[a - b for a, b in zip(r1, r2)]
                                     for r1, r2 in zip(x, linalg.matmul(p0, x))]
        return p0, ginv, k

    def _apply(self, mats, v):
        out = {}
        by_block = {}
        for idx, val in v.items():
            bi, t = self.block_of[idx]
            by_block.setdefault(bi, []).append((t, val))
        for bi, entries in by_block.items():
            M = mats[bi]
            if M is None:
                continue
            blk = self.blocks[bi]
            for p in range(len(blk)):
                row = M[p]
                s = 0
                for t, val in entries:
                    if row[t]:
                        s = s + row[t] * val
                if s:
                    out[blk[p]] = s
        return out

    def project0(self, v):
        """Component of ``v`` in ``ker Γ`` (the invariants ``W_0``)."""
        return self._apply(self._p0, v)

    def project1(self, v):
        return linalg.vec_axpy({k: c for k, c in v.items() if c}, -1, self.project0(v))

    def gamma_inverse(self, v):
        """``Γ^{-1}`` applied to the ``W_1`` component of ``v``."""
        return self._apply(self._ginv, v)

    def apply_gamma(self, v):
        out = {}
        for idx, val in v.items():
            linalg.vec_axpy(out, val, self.gamma[idx])
        return out


class ModuleWindow:
    """Finite-dimensional g-module of polynomial jets in a degree window.

    Parameters
    ----------
    data : LeviAlgebraData
        Linear part; variables are ``(x_1..x_m, y_1..y_{n-m})``.
    kind : str
        One of :data:`WINDOW_KINDS`.
    lo, hi : int
        Total-degree bounds; the window holds degrees ``d`` with ``lo < d <= hi``.
    variables : sequence of str, optional
    fiber : int, optional
        For the algebroid kinds, the first ``fiber`` variables are the fiber
        (section) coordinates.

    Basis order: by total degree, then (vector kinds) by component, then
    graded-lex on exponents.  ``action[i][b]`` is the image of basis vector
    ``b`` under ``ξ_i`` as a sparse vector.
    """

    def __init__(self, data, kind, lo, hi, variables=None, fiber=None):
        if kind not in WINDOW_KINDS:
            raise ValueError(f"unknown window kind {kind!r}")
        if kind.startswith(("fiberlinear", "algebroid")) and fiber is None:
            raise ValueError(f"{kind} needs the fiber dimension")
        self.data = data
        self.kind = kind
        self.lo, self.hi = lo, hi
        self.n, self.m = data.n, data.m
        self.fiber = fiber
        self.variables = tuple(variables) if variables is not None else default_variables(data.n, data.m)
        self.is_vector = kind in ("vectorfield-window", "algebroid-vectorfield-window")
        self.basis = self._enumerate()
        self.index = {b: i for i, b in enumerate(self.basis)}
        self.action = tuple(self._build_action(i) for i in range(self.m))

    def __len__(self):
        return len(self.basis)

    @property
    def dim(self):
        return len(self.basis)

    # -- basis -------------------------------------------------------------
    def _fiber_degree(self, e):
        return sum(e[:self.fiber])

    def _allowed(self, comp, e):
        if self.kind == "function-window" or self.kind == "vectorfield-window":
            return True
        if self.kind == "fiberlinear-function-window":
            return self._fiber_degree(e) == 1
        target = self.m + comp
        return self._fiber_degree(e) == (1 if target < self.fiber else 0)

    def _enumerate(self):
        out = []
        comps = range(self.n - self.m) if self.is_vector else (None,)
        for d in range(self.lo + 1, self.hi + 1):
            mons = monomials(self.n, d)
            for comp in comps:
                out.extend((comp, e) for e in mons if self._allowed(comp, e))
        return out

    # -- action ------------------------------------------------------------
    @cached_property
    def linear_fields(self):
        """``X̂_i`` as entries ``(j, k, coef)``: ``X̂_i = sum coef z_k d/dz_j``."""
        m, r, d = self.m, self.n - self.m, self.data
        fields = []
        for i in range(m):
            ent = []
            for j in range(m):
                for k in range(m):
                    if d.c[i][j][k]:
                        ent.append((j, k, d.c[i][j][k]))
            for j in range(r):
                for k in range(r):
                    if d.a[i][j][k]:
                        ent.append((m + j, m + k, d.a[i][j][k]))
            fields.append(ent)
        return fields

    def _apply_field(self, i, e):
        out = {}
        for j, k, coef in self.linear_fields[i]:
            a = e[j]
            if a:
                f = list(e)
                f[j] -= 1
                f[k] += 1
                f = tuple(f)
                s = out.get(f, 0) + coef * a
                if s:
                    out[f] = s
                else:
                    out.pop(f, None)
        return out

    def _build_action(self, i):
        cols = []
        a = self.data.a
        for comp, e in self.basis:
            img = {}
            for f, v in self._apply_field(i, e).items():
                img[(comp, f)] = v
            if self.is_vector:
                # subtract sum_j a_{i j}^{comp} u d/dy_j
                for j in range(self.n - self.m):
                    v = a[i][j][comp]
                    if v:
                        key = (j, e)
                        s = img.get(key, 0) - v
                        if s:
                            img[key] = s
                        else:
                            img.pop(key, None)
            col = {}
            for key, v in img.items():
                idx = self.index.get(key)
                if idx is None:
                    raise ConstraintError(f"action of generator {i} leaves the {self.kind}")
                col[idx] = v
            cols.append(col)
        return cols

    def act(self, i, v):
        out = {}
        col = self.action[i]
        for b, val in v.items():
            linalg.vec_axpy(out, val, col[b])
        return out

    def check_representation(self):
        """Exact check of ``[ρ_i, ρ_j] = Σ_k c_ij^k ρ_k``; returns violating pairs."""
        bad = []
        for i, j in combinations(range(self.m), 2):
            for b in range(self.dim):
                e = {b: mpq(1)}
                lhs = linalg.vec_axpy(self.act(i, self.act(j, e)), -1, self.act(j, self.act(i, e)))
                for k in range(self.m):
                    ck = self.data.c[i][j][k]
                    if ck:
                        linalg.vec_axpy(lhs, -ck, self.act(k, e))
                if lhs:
                    bad.append((i, j))
                    break
        return bad

    @cached_property
    def action_blocks(self):
        """Index sets of the g-submodules spanned by action-graph components."""
        edges = [(b, r) for cols in self.action for b, col in enumerate(cols) for r in col]
        return linalg.connected_blocks(self.dim, edges)

    @cached_property
    def casimir_split(self):
        gamma = self.data.casimir.sparse_operator(self.action, self.dim) if self.m else \
            [dict() for _ in range(self.dim)]
        return CasimirSplit(gamma, self.dim)

    # -- conversions -------------------------------------------------------
    def to_vector(self, obj):
        """Coordinates of a window element; raises if any term falls outside the window."""
        v = {}
        if self.is_vector:
            for comp, p in enumerate(obj):
                for e, c in p.terms.items():
                    idx = self.index.get((comp, e))
                    if idx is None:
                        raise ConstraintError(
                            f"term {e} in component {comp} is not in the {self.kind} ({self.lo},{self.hi}]")
                    v[idx] = c
        else:
            for e, c in obj.terms.items():
                idx = self.index.get((None, e))
                if idx is None:
                    raise ConstraintError(f"term {e} is not in the {self.kind} ({self.lo},{self.hi}]")
                v[idx] = c
        return v

    def to_polynomial(self, v):
        if self.is_vector:
            raise TypeError("vector windows convert with to_components")
        return Polynomial(self.variables, {self.basis[i][1]: c for i, c in v.items() if c})

    def to_components(self, v):
        comps = [dict() for _ in range(self.n - self.m)]
        for i, c in v.items():
            if c:
                comp, e = self.basis[i]
                comps[comp][e] = c
        return [Polynomial(self.variables, t) for t in comps]

    def element(self, v):
        return self.to_components(v) if self.is_vector else self.to_polynomial(v)

    def __repr__(self):
        return f"ModuleWindow({self.kind}, ({self.lo},{self.hi}], dim={self.dim})"


def default_variables(n, m):
    return tuple([f"x{i + 1}" for i in range(m)] + [f"y{j + 1}" for j in range(n - m)])


def build_window(data, kind, lo, hi, variables=None, fiber=None, check=True):
    """Construct a :class:`ModuleWindow` and (optionally) verify the representation law."""
    if hi < lo:
        raise ValueError(f"empty degree range ({lo},{hi}] is reversed")
    w = ModuleWindow(data, kind, lo, hi, variables=variables, fiber=fiber)
    if check:
        bad = w.check_representation()
        if bad:
            raise ArithmeticError(f"window action violates the bracket law on pairs {bad}")
    return w
