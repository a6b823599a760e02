"""Chevalley-Eilenberg cochains of a semisimple ``g`` with values in a window.

Cochain values are sparse coordinate vectors in the window basis.  Degree
conventions, with ``ρ_i`` the action of ``ξ_i`` on the window:

* ``(δg)(ξ_i) = ρ_i g``
* ``(δw)(ξ_i, ξ_j) = ρ_i w_j - ρ_j w_i - Σ_k c_ij^k w_k``

The primitives use the Casimir ``Γ = Σ_{ij} K^{ij} ρ_i ρ_j`` (``K^{ij}``
the inverse Killing form).  With ``h(w) = Σ_{ij} K^{ij} ρ_i w(ξ_j)`` and
``h(f)(ξ) = Σ_{ij} K^{ij} ρ_i f(ξ_j, ξ)`` one has ``δh + hδ = Γ``, so on
``im Γ`` the maps ``Γ^{-1} h`` invert ``δ`` on cocycles.  Invariant
components (``ker Γ``, where ``g`` acts trivially) of a 2-cocycle are
handled by solving ``-Σ_k c_ij^k μ_k = f_ij`` since ``[g, g] = g``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations

from gmpy2 import mpq

from . import linalg
from .polyalg import weighted_l2_norm

__all__ = [
    "Cochain",
    "NotACocycle",
    "NotACoboundary",
    "UnsupportedDegree",
    "ce_differential",
    "cocycle_defect",
    "solve_2cocycle",
    "solve_1cocycle",
    "solve_direct",
    "solve_direct_many",
    "random_cochain",
    "cochain_norm",
    "homotopy_norm_bound",
    "homotopy_profile",
]


class NotACocycle(ArithmeticError):
    """``δf != 0``; carries the offending component."""

    def __init__(self, message, component=None):
        super().__init__(message)
        self.component = component


class NotACoboundary(ArithmeticError):
    """Exact linear solve of ``δx = f`` is inconsistent."""


class UnsupportedDegree(ValueError):
    pass


@dataclass(frozen=True)
class Cochain:
    """A ``k``-cochain (``k`` in 0, 1, 2) with values in ``window``.

    ``values`` is a sparse vector for ``k = 0``, a tuple of ``m`` vectors
    for ``k = 1`` and a dict ``{(i, j): vector}`` over ``i < j`` for
    ``k = 2`` (the ``i > j`` entries follow by antisymmetry).
    """

    degree: int
    window: object
    values: object

    def __post_init__(self):
        m = self.window.m
        if self.degree == 0:
            object.__setattr__(self, "values", _clean(self.values))
        elif self.degree == 1:
            vals = tuple(_clean(v) for v in self.values)
            if len(vals) != m:
                raise ValueError(f"1-cochain needs {m} values, got {len(vals)}")
            object.__setattr__(self, "values", vals)
        elif self.degree == 2:
            vals = {}
            for (i, j), v in self.values.items():
                if i == j:
                    if any(v.values()):
                        raise ValueError("2-cochain must vanish on the diagonal")
                    continue
                key, vec = ((i, j), v) if i < j else ((j, i), linalg.vec_scale(v, -1))
                if key in vals and vals[key] != _clean(vec):
                    raise ValueError(f"2-cochain is not antisymmetric at {key}")
                vals[key] = _clean(vec)
            for key in combinations(range(m), 2):
                vals.setdefault(key, {})
            object.__setattr__(self, "values", vals)
        else:
            raise UnsupportedDegree(f"cochains of degree {self.degree} are not supported")
        dim = self.window.dim
        for v in self._vectors():
            for idx in v:
                if not 0 <= idx < dim:
                    raise ValueError(f"index {idx} outside window of dimension {dim}")

    def _vectors(self):
        if self.degree == 0:
            return [self.values]
        if self.degree == 1:
            return list(self.values)
        return list(self.values.values())

    def value(self, i, j=None):
        if self.degree == 1:
            return self.values[i]
        if i == j:
            return {}
        return self.values[(i, j)] if i < j else linalg.vec_scale(self.values[(j, i)], -1)

    @classmethod
    def zero(cls, window, degree):
        if degree == 0:
            return cls(0, window, {})
        if degree == 1:
            return cls(1, window, tuple({} for _ in range(window.m)))
        return cls(2, window, {})

    @classmethod
    def from_elements(cls, window, degree, values):
        """Build from window elements (polynomials or component lists)."""
        conv = window.to_vector
        if degree == 0:
            return cls(0, window, conv(values))
        if degree == 1:
            return cls(1, window, tuple(conv(v) for v in values))
        return cls(2, window, {k: conv(v) for k, v in values.items()})

    def elements(self):
        el = self.window.element
        if self.degree == 0:
            return el(self.values)
        if self.degree == 1:
            return [el(v) for v in self.values]
        return {k: el(v) for k, v in self.values.items()}

    def is_zero(self):
        return all(not v for v in self._vectors())

    def _combine(self, other, sign):
        if other.degree != self.degree or other.window is not self.window:
            raise ValueError("cochains of different degree or window")
        if self.degree == 0:
            return Cochain(0, self.window, linalg.vec_axpy(dict(self.values), sign, other.values))
        if self.degree == 1:
            return Cochain(1, self.window, tuple(linalg.vec_axpy(dict(a), sign, b)
                                                 for a, b in zip(self.values, other.values)))
        return Cochain(2, self.window, {k: linalg.vec_axpy(dict(v), sign, other.values[k])
                                        for k, v in self.values.items()})

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __eq__(self, other):
        return (isinstance(other, Cochain) and self.degree == other.degree
                and self.window is other.window and self.values == other.values)

    __hash__ = None


def _clean(v):
    return {k: c for k, c in v.items() if c}


# --- differential ----------------------------------------------------------

def ce_differential(c):
    """``δc`` for cochains of degree 0 or 1."""
    w = c.window
    m = w.m
    if c.degree == 0:
        return Cochain(1, w, tuple(w.act(i, c.values) for i in range(m)))
    if c.degree == 1:
        cst = w.data.c
        out = {}
        for i, j in combinations(range(m), 2):
            v = w.act(i, c.values[j])
            linalg.vec_axpy(v, -1, w.act(j, c.values[i]))
            for k in range(m):
                if cst[i][j][k]:
                    linalg.vec_axpy(v, -cst[i][j][k], c.values[k])
            out[(i, j)] = v
        return Cochain(2, w, out)
    raise UnsupportedDegree("ce_differential is only implemented for degrees 0 and 1")


def _bracket_arg(cst, m, a, b):
    """Coordinates of ``[ξ_a, ξ_b]``."""
    return {k: cst[a][b][k] for k in range(m) if cst[a][b][k]}


def cocycle_defect(f):
    """Nonzero components of ``δf`` for a 1- or 2-cochain.

    For 1-cochains this is ``δf``; for 2-cochains it evaluates the degree-3
    differential on every triple ``i < j < k``.
    """
    if f.degree == 1:
        return {k: v for k, v in ce_differential(f).values.items() if v}
    if f.degree != 2:
        raise UnsupportedDegree("cocycle_defect takes 1- or 2-cochains")
    w, m, cst = f.window, f.window.m, f.window.data.c

    def fval(a, b):
        return f.value(a, b)

    def f_of_bracket(a, b, c):
        # f([ξ_a, ξ_b], ξ_c)
        out = {}
        for k, v in _bracket_arg(cst, m, a, b).items():
            linalg.vec_axpy(out, v, fval(k, c))
        return out

    bad = {}
    for i, j, k in combinations(range(m), 3):
        d = w.act(i, fval(j, k))
        linalg.vec_axpy(d, -1, w.act(j, fval(i, k)))
        linalg.vec_axpy(d, 1, w.act(k, fval(i, j)))
        linalg.vec_axpy(d, -1, f_of_bracket(i, j, k))
        linalg.vec_axpy(d, 1, f_of_bracket(i, k, j))
        linalg.vec_axpy(d, -1, f_of_bracket(j, k, i))
        if d:
            bad[(i, j, k)] = d
    return bad


# --- homotopy solvers -------------------------------------------------------

def _kinv(window):
    return [dual for _, dual in window.data.casimir.pairs]


def _trivial_solver(cst, m):
    """Left inverse of ``μ -> (-Σ_k c_ij^k μ_k)_{i<j}`` on a choice of pivot rows."""
    pairs = list(combinations(range(m), 2))
    M = [[-cst[i][j][k] for k in range(m)] for i, j in pairs]
    cols = linalg.column_basis(linalg.transpose(M))  # independent rows of M
    if len(cols) != m:
        raise ArithmeticError("[g, g] != g; Levi factor is not semisimple")
    sub = [M[r] for r in cols]
    return [pairs[r] for r in cols], linalg.inverse(sub)


def solve_2cocycle(f, check=True):
    """Primitive ``w`` with ``δw = f`` from the Casimir homotopy.

    Raises :class:`NotACocycle` if ``f`` is not closed (with ``check``) and
    ``ArithmeticError`` if the result fails ``δw = f``.
    """
    if f.degree != 2:
        raise UnsupportedDegree("solve_2cocycle takes a 2-cochain")
    w, m = f.window, f.window.m
    if check:
        bad = cocycle_defect(f)
        if bad:
            key = min(bad)
            raise NotACocycle(f"2-cochain is not a cocycle: δf{key} != 0", key)
    if f.is_zero():
        return Cochain.zero(w, 1)
    split = w.casimir_split
    Kinv = _kinv(w)
    f0 = {key: split.project0(v) for key, v in f.values.items()}
    f1 = {key: linalg.vec_axpy(dict(v), -1, f0[key]) for key, v in f.values.items()}

    def f1val(a, b):
        if a == b:
            return {}
        return f1[(a, b)] if a < b else linalg.vec_scale(f1[(b, a)], -1)

    values = []
    for i in range(m):
        acc = {}
        for j in range(m):
            inner = {}
            for l in range(m):
                if Kinv[j][l]:
                    linalg.vec_axpy(inner, Kinv[j][l], f1val(l, i))
            if inner:
                linalg.vec_axpy(acc, 1, w.act(j, inner))
        values.append(split.gamma_inverse(acc))

    if any(f0.values()):
        rows, inv = _trivial_solver(w.data.c, m)
        rhs = [f0[key] for key in rows]
        for k in range(m):
            mu = {}
            for t, key_vec in enumerate(rhs):
                if inv[k][t]:
                    linalg.vec_axpy(mu, inv[k][t], key_vec)
            linalg.vec_axpy(values[k], 1, mu)

    out = Cochain(1, w, tuple(values))
    if ce_differential(out) != f:
        raise ArithmeticError("homotopy primitive does not satisfy δw = f")
    return out


def solve_1cocycle(wc, check=True):
    """Primitive ``g`` with ``δg = w`` for a 1-cocycle ``w``."""
    if wc.degree != 1:
        raise UnsupportedDegree("solve_1cocycle takes a 1-cochain")
    win, m = wc.window, wc.window.m
    if check:
        bad = cocycle_defect(wc)
        if bad:
            key = min(bad)
            raise NotACocycle(f"1-cochain is not a cocycle: δw{key} != 0", key)
    if wc.is_zero():
        return Cochain.zero(win, 0)
    split = win.casimir_split
    for i, v in enumerate(wc.values):
        if split.project0(v):
            raise NotACocycle(f"1-cocycle has an invariant component on ξ_{i}", (i,))
    Kinv = _kinv(win)
    acc = {}
    for i in range(m):
        inner = {}
        for j in range(m):
            if Kinv[i][j]:
                linalg.vec_axpy(inner, Kinv[i][j], wc.values[j])
        if inner:
            linalg.vec_axpy(acc, 1, win.act(i, inner))
    out = Cochain(0, win, split.gamma_inverse(acc))
    if ce_differential(out) != wc:
        raise ArithmeticError("homotopy primitive does not satisfy δg = w")
    return out


def solve_direct(f):
    """Solve ``δx = f`` by exact sparse elimination (free variables set to zero).

    The system decouples over the g-submodules spanned by connected
    components of the action graph, so each component is eliminated on its
    own.
    """
    return solve_direct_many([f])[0]


def solve_direct_many(fs):
    """:func:`solve_direct` for several cochains of one degree over one window.

    The elimination of each block is shared by all right-hand sides.
    """
    fs = list(fs)
    if not fs:
        return []
    win, deg = fs[0].window, fs[0].degree
    if deg not in (1, 2):
        raise UnsupportedDegree("solve_direct takes a 1- or 2-cochain")
    if any(f.window is not win or f.degree != deg for f in fs):
        raise ValueError("all cochains must share degree and window")
    m = win.m
    outs = [[dict() for _ in range(m)] if deg == 2 else {} for _ in fs]
    live = [t for t, f in enumerate(fs) if not f.is_zero()]
    if win.dim and live:
        try:
            for blk in win.action_blocks:
                if deg == 1:
                    _direct_block_1(win, fs, live, blk, outs)
                else:
                    _direct_block_2(win, fs, live, blk, outs)
        except linalg.InconsistentSystem as exc:
            raise NotACoboundary("cochain is not a coboundary over this window") from exc
    if deg == 1:
        return [Cochain(0, win, o) for o in outs]
    return [Cochain(1, win, tuple(o)) for o in outs]


def _rhs(fs, live, getter):
    out = {}
    for t in live:
        v = getter(fs[t])
        if v:
            out[t] = v
    return out


def _direct_block_1(win, fs, live, blk, outs):
    # unknown g[b]; equation (i, r): (ρ_i g)[r] = w_i[r]
    m = win.m
    if not any(fs[t].values[i].get(r) for t in live for i in range(m) for r in blk):
        return
    elim = linalg.SparseEliminator(multi=True)
    for i in range(m):
        rows = {r: {} for r in blk}
        for b in blk:
            for r, v in win.action[i][b].items():
                rows[r][b] = v
        for r in blk:
            rhs = _rhs(fs, live, lambda f: f.values[i].get(r))
            if rows[r] or rhs:
                elim.add_row(rows[r], rhs)
    for b, vec in elim.solution().items():
        for t, v in vec.items():
            outs[t][b] = v


def _direct_block_2(win, fs, live, blk, outs):
    # unknown w_k[b] -> column k * len(blk) + position of b
    m, cst = win.m, win.data.c
    if not any(v.get(r) for t in live for v in fs[t].values.values() for r in blk):
        return
    elim = linalg.SparseEliminator(multi=True)
    pos = {b: t for t, b in enumerate(blk)}
    size = len(blk)
    for i, j in combinations(range(m), 2):
        rows = {r: {} for r in blk}
        for b in blk:
            for r, v in win.action[i][b].items():
                col = j * size + pos[b]
                rows[r][col] = rows[r].get(col, 0) + v
            for r, v in win.action[j][b].items():
                col = i * size + pos[b]
                rows[r][col] = rows[r].get(col, 0) - v
            for k in range(m):
                if cst[i][j][k]:
                    col = k * size + pos[b]
                    rows[b][col] = rows[b].get(col, 0) - cst[i][j][k]
        for r in blk:
            rhs = _rhs(fs, live, lambda f: f.values[(i, j)].get(r))
            if rows[r] or rhs:
                elim.add_row(rows[r], rhs)
    for col, vec in elim.solution().items():
        for t, v in vec.items():
            outs[t][col // size][blk[col % size]] = v


# --- sampling and norms -----------------------------------------------------

def random_cochain(window, degree, rng=None, nnz=24, height=5):
    """Random cochain whose values have about ``nnz`` small rational entries each."""
    rng = rng or random.Random(0)
    dim = window.dim

    def vec():
        v = {}
        for b in rng.sample(range(dim), min(nnz, dim)):
            num = rng.randint(-height, height)
            if num:
                v[b] = mpq(num, rng.randint(1, height))
        return v

    if degree == 0:
        return Cochain(0, window, vec())
    if degree == 1:
        return Cochain(1, window, tuple(vec() for _ in range(window.m)))
    return Cochain(2, window, {k: vec() for k in combinations(range(window.m), 2)})


def cochain_norm(c, rho):
    """Max over generator slots of the weighted L² norm of the values."""
    el = c.window.element
    n = c.window.n

    def vnorm(v):
        e = el(v)
        if isinstance(e, list):
            return math.sqrt(sum(weighted_l2_norm(p, rho, n) ** 2 for p in e))
        return weighted_l2_norm(e, rho, n)

    return max((vnorm(v) for v in c._vectors()), default=0.0)


def homotopy_norm_bound(window, rho, samples=20, rng=None, degree=2):
    """Empirical ``sup ‖h(f)‖_ρ / ‖f‖_ρ`` over random coboundaries ``f``.

    ``degree`` selects 2-cocycles (``f = δw``) or 1-cocycles (``f = δg``).
    Returns ``(max_ratio, report)``.
    """
    rng = rng or random.Random(0)
    solver = solve_2cocycle if degree == 2 else solve_1cocycle
    ratios = []
    tries = 0
    while len(ratios) < samples and tries < 10 * samples:
        tries += 1
        f = ce_differential(random_cochain(window, degree - 1, rng))
        if f.is_zero():
            continue
        h = solver(f, check=False)
        ratios.append(cochain_norm(h, rho) / cochain_norm(f, rho))
    bound = max(ratios, default=0.0)
    report = {"window": [window.lo, window.hi], "kind": window.kind, "dim": window.dim,
              "rho": rho, "samples": len(ratios), "max_ratio": bound,
              "mean_ratio": sum(ratios) / len(ratios) if ratios else 0.0}
    return bound, report


def homotopy_profile(windows, rho, samples=20, seed=0, degree=2):
    """Ratio bounds over a sequence of windows plus a uniformity verdict.

    ``slope`` is the least-squares slope of ``log(max ratio)`` against the
    window index; the profile is non-growing when that slope is ``<= 0``.
    """
    rng = random.Random(seed)
    rows = [homotopy_norm_bound(w, rho, samples, rng, degree)[1] for w in windows]
    bounds = [r["max_ratio"] for r in rows]
    pts = [(k, math.log(b)) for k, b in enumerate(bounds) if b > 0]
    slope = 0.0
    if len(pts) > 1:
        mx = sum(k for k, _ in pts) / len(pts)
        my = sum(y for _, y in pts) / len(pts)
        slope = (sum((k - mx) * (y - my) for k, y in pts)
                 / sum((k - mx) ** 2 for k, _ in pts))
    return {"rho": rho, "windows": rows, "bound": max(bounds, default=0.0), "slope": slope,
            "non_growing": slope <= 0}
