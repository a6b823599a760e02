"""Sparse multivariate polynomials with exact coefficients.

A :class:`Polynomial` is a map from exponent tuples to nonzero exact
scalars over a fixed, ordered list of variable names.  Nothing here knows
about Poisson brackets; this is the jet algebra everything else is built on.
All truncations are by total degree.
"""

from __future__ import annotations

import math
from itertools import combinations_with_replacement
from operator import add

from gmpy2 import mpq

from .scalars import abs2, to_complex

__all__ = [
    "Polynomial",
    "PolyMap",
    "VariableMismatch",
    "NotNearIdentity",
    "truncate",
    "window_part",
    "substitute",
    "substitute_many",
    "compose",
    "invert_near_identity",
    "weighted_l2_norm",
    "majorant_sup_norm",
    "monomials",
    "graded_lex_key",
]

INF = float("inf")


class VariableMismatch(ValueError):
    """Operands live on different variable lists."""


class NotNearIdentity(ValueError):
    """A map expected to be ``Id + (terms of degree >= 2)`` is not."""


def graded_lex_key(exp):
    """Sort key: total degree first, then lexicographically decreasing exponents."""
    return (sum(exp), tuple(-e for e in exp))


def monomials(nvars, degree):
    """Exponent tuples of total degree ``degree`` in graded-lex order."""
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def _bucket(terms, maxdeg=None):
    """Group terms by total degree: ``{deg: [(exp, coef), ...]}``."""
    b = {}
    for e, c in terms.items():
        d = sum(e)
        if maxdeg is None or d <= maxdeg:
            b.setdefault(d, []).append((e, c))
    return b


_BITS = 12
_MASK = (1 << _BITS) - 1


def _pack(e):
    r = 0
    for x in e:
        r = (r << _BITS) | x
    return r


def _unpack(k, n):
    return tuple((k >> (_BITS * (n - 1 - i))) & _MASK for i in range(n))


def _packed_buckets(terms):
    """``[(degree, [(packed exponent, coef), ...]), ...]`` sorted by degree."""
    b = {}
    for e, c in terms.items():
        b.setdefault(sum(e), []).append((_pack(e), c))
    return sorted(b.items())


def _mul_terms(a, b, maxdeg=None, bb=None):
    """Product of term dicts; exponents are packed into ints for the inner loop.

    ``bb`` may carry the precomputed :func:`_packed_buckets` of ``b``.
    """
    if not a or not b:
        return {}
    if bb is None:
        if len(a) > len(b):
            a, b = b, a
        bb = _packed_buckets(b)
    n = len(next(iter(a)))
    top = max(sum(e) for e in a) + bb[-1][0]
    if maxdeg is not None:
        top = min(top, maxdeg)
    if top > _MASK:
        return _mul_terms_tuples(a, b, maxdeg)
    out = {}
    get = out.get
    for ea, ca in a.items():
        da = sum(ea)
        pa = _pack(ea)
        for db, items in bb:
            if maxdeg is not None and da + db > maxdeg:
                break
            for pb, cb in items:
                e = pa + pb
                s = get(e)
                out[e] = ca * cb if s is None else s + ca * cb
    return {_unpack(k, n): c for k, c in out.items() if c}


def _mul_terms_tuples(a, b, maxdeg=None):
    bb = sorted(_bucket(b).items())
    out = {}
    for ea, ca in a.items():
        da = sum(ea)
        for db, items in bb:
            if maxdeg is not None and da + db > maxdeg:
                break
            for eb, cb in items:
                e = tuple(map(add, ea, eb))
                s = out.get(e)
                out[e] = ca * cb if s is None else s + ca * cb
    return {e: c for e, c in out.items() if c}


class Polynomial:
    """Sparse polynomial over exact scalars.

    Parameters
    ----------
    variables : sequence of str
        Ordered variable names.
    terms : dict, optional
        ``{exponent tuple: coefficient}``; zero coefficients are dropped.
    """

    __slots__ = ("variables", "terms", "_pk")

    def __init__(self, variables, terms=None, _trusted=False):
        self.variables = tuple(variables)
        self._pk = None
        if terms is None:
            self.terms = {}
        elif _trusted:
            self.terms = terms
        else:
            n = len(self.variables)
            clean = {}
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != n or any(x < 0 for x in e):
                    raise ValueError(f"bad exponent {e} for {n} variables")
                if c:
                    clean[e] = c if not isinstance(c, int) else mpq(c)
            self.terms = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, variables):
        return cls(variables)

    @classmethod
    def constant(cls, variables, c):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, variables, i, coef=1):
        variables = tuple(variables)
        e = [0] * len(variables)
        e[i] = 1
        return cls(variables, {tuple(e): coef})

    # -- basic queries -----------------------------------------------------
    @property
    def nvars(self):
        return len(self.variables)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def min_degree(self):
        return min((sum(e) for e in self.terms), default=INF)

    def coefficient(self, exp):
        return self.terms.get(tuple(exp), 0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: graded_lex_key(t[0]))

    def _check(self, other):
        if self.variables is not other.variables and self.variables != other.variables:
            raise VariableMismatch(f"{self.variables} vs {other.variables}")

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return self + Polynomial.constant(self.variables, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Polynomial(self.variables, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, a):
        if not a:
            return Polynomial(self.variables)
        return Polynomial(self.variables, {e: a * c for e, c in self.terms.items()}, _trusted=True)

    def mul(self, other, max_degree=None):
        """Product, optionally dropping terms above ``max_degree``."""
        if not isinstance(other, Polynomial):
            return self.scale(other).truncate(max_degree) if max_degree is not None else self.scale(other)
        self._check(other)
        return Polynomial(self.variables, _mul_terms(self.terms, other.terms, max_degree,
                                                     other._buckets()), _trusted=True)

    def _buckets(self):
        if self._pk is None:
            self._pk = _packed_buckets(self.terms)
        return self._pk

    def __mul__(self, other):
        return self.mul(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = Polynomial.constant(self.variables, mpq(1))
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self.terms == other.terms
        if not other:
            return not self.terms
        return self.terms == {(0,) * self.nvars: other}

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    # -- calculus and gradings --------------------------------------------
    def diff(self, i):
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                f = list(e)
                f[i] = k - 1
                out[tuple(f)] = c * k
        return Polynomial(self.variables, out, _trusted=True)

    def gradient(self):
        return [self.diff(i) for i in range(self.nvars)]

    def truncate(self, D):
        return truncate(self, D)

    def window_part(self, lo, hi):
        return window_part(self, lo, hi)

    def homogeneous_part(self, d):
        return Polynomial(self.variables,
                          {e: c for e, c in self.terms.items() if sum(e) == d}, _trusted=True)

    def evaluate(self, point):
        """Floating-point (complex) value at ``point``."""
        total = 0j
        for e, c in self.terms.items():
            term = to_complex(c)
            for x, k in zip(point, e):
                if k:
                    term *= x ** k
            total += term
        return total

    def map_coefficients(self, f):
        return Polynomial(self.variables, {e: f(c) for e, c in self.terms.items()})

    def rename(self, variables):
        if len(variables) != self.nvars:
            raise VariableMismatch("renaming must keep the variable count")
        return Polynomial(variables, dict(self.terms), _trusted=True)

    def embed(self, variables, positions):
        """Re-express over a larger variable list; ``positions[i]`` is the new index of variable ``i``."""
        n = len(variables)
        out = {}
        for e, c in self.terms.items():
            f = [0] * n
            for i, k in enumerate(e):
                f[positions[i]] = k
            out[tuple(f)] = c
        return Polynomial(variables, out, _trusted=True)

    def __repr__(self):
        return f"Polynomial({self.variables}, {len(self.terms)} terms)"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def truncate(p, D):
    """Drop all terms of total degree greater than ``D``."""
    if D is None:
        return p
    return Polynomial(p.variables, {e: c for e, c in p.terms.items() if sum(e) <= D}, _trusted=True)


def window_part(p, lo, hi):
    """Terms of total degree ``d`` with ``lo < d <= hi``."""
    return Polynomial(p.variables,
                      {e: c for e, c in p.terms.items() if lo < sum(e) <= hi}, _trusted=True)


class PolyMap:
    """Tuple of polynomials over a common source variable list.

    ``role`` is ``"coordinate-change"`` (component ``i`` is the new ``i``-th
    coordinate written in the source coordinates) or ``"vector-field"``
    (component ``j`` is the coefficient of ``d/dz_j``).
    """

    ROLES = ("coordinate-change", "vector-field")

    __slots__ = ("components", "role")

    def __init__(self, components, role="coordinate-change"):
        components = tuple(components)
        if role not in self.ROLES:
            raise ValueError(f"unknown role {role!r}")
        if components:
            v = components[0].variables
            for c in components[1:]:
                c._check(components[0])
            components = tuple(Polynomial(v, c.terms, _trusted=True) for c in components)
        self.components = components
        self.role = role

    @classmethod
    def identity(cls, variables):
        variables = tuple(variables)
        return cls([Polynomial.variable(variables, i) for i in range(len(variables))])

    @property
    def variables(self):
        return self.components[0].variables if self.components else ()

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __eq__(self, other):
        return (isinstance(other, PolyMap) and self.role == other.role
                and self.components == other.components)

    __hash__ = None

    def truncate(self, D):
        return PolyMap([truncate(c, D) for c in self.components], self.role)

    def shift(self):
        """``self - Id`` (the nonlinear part for a near-identity map)."""
        return [c - Polynomial.variable(self.variables, i) for i, c in enumerate(self.components)]

    def is_near_identity(self):
        if len(self.components) != len(self.variables):
            return False
        for c in self.shift():
            if c.min_degree() < 2:
                return False
        return True

    def degree(self):
        return max((c.degree() for c in self.components), default=-1)

    def __repr__(self):
        return f"PolyMap({self.role}, {len(self.components)} components over {self.variables})"


def _divided_derivative(Q, k, r):
    """``(d/dz_k Q) / (r + 1)``."""
    inv = mpq(1, r + 1)
    terms = {}
    for e, c in Q.terms.items():
        a = e[k]
        if a:
            f = list(e)
            f[k] = a - 1
            terms[tuple(f)] = c * (a * inv)
    return Polynomial(Q.variables, terms, _trusted=True)


def _substitute_taylor(polys, chi, D):
    """``p(z + chi(z))`` for every ``p`` in ``polys``, truncated at ``D``.

    Uses ``p(z + chi) = sum_beta (d^beta p / beta!) chi^beta``; the powers
    ``chi^beta`` are built once along a depth-first walk and shared by all
    polynomials.
    """
    V = chi[0].variables
    n = len(V)
    smin = [c.min_degree() for c in chi]
    outs = [dict() for _ in polys]

    def accumulate(Qs, P):
        pm = P.min_degree()
        for idx, Q in Qs:
            if Q.min_degree() + pm > D:
                continue
            out = outs[idx]
            for e, c in _mul_terms(Q.terms, P.terms, D, P._buckets()).items():
                s = out.get(e)
                out[e] = c if s is None else s + c

    def alive(Qs, P):
        pm = P.min_degree()
        return [(idx, Q) for idx, Q in Qs if Q and Q.min_degree() + pm <= D]

    def rec(k, Qs, P):
        if k == n:
            accumulate(Qs, P)
            return
        r = 0
        while True:
            Qs = alive(Qs, P) if P else []
            if not Qs:
                return
            rec(k + 1, Qs, P)
            if smin[k] == INF:
                return
            Qs = [(idx, _divided_derivative(Q, k, r)) for idx, Q in Qs]
            P = P.mul(chi[k], D)
            r += 1

    rec(0, list(enumerate(polys)), Polynomial.constant(V, mpq(1)))
    return [Polynomial(V, {e: c for e, c in out.items() if c}, _trusted=True) for out in outs]


def _substitute_powers(p, phi, D):
    """``p(phi)`` by cached powers; for maps that change the variable list."""
    W = phi.variables
    powers = [[Polynomial.constant(W, mpq(1))] for _ in phi.components]

    def power(k, e):
        lst = powers[k]
        while len(lst) <= e:
            lst.append(lst[-1].mul(phi.components[k], D))
        return lst[e]

    prefix = {(): Polynomial.constant(W, mpq(1))}
    out = Polynomial(W)
    for e, c in sorted(p.terms.items()):
        key = ()
        prod = prefix[()]
        for k, a in enumerate(e):
            key = key + (a,)
            cached = prefix.get(key)
            if cached is None:
                cached = prod.mul(power(k, a), D) if a else prod
                prefix[key] = cached
            prod = cached
        out = out + prod.scale(c)
    return out


def substitute(p, phi, D=None):
    """``p ∘ phi`` truncated at total degree ``D``.

    ``phi`` must have one component per variable of ``p``; the result lives
    on ``phi``'s source variables.  When both variable lists agree and
    ``phi`` has no constant terms, a Taylor expansion around the identity is
    used, which is much cheaper for near-identity maps.
    """
    return substitute_many([p], phi, D)[0]


def substitute_many(polys, phi, D=None):
    """:func:`substitute` for several polynomials sharing the same map."""
    comps = phi.components if isinstance(phi, PolyMap) else tuple(phi)
    polys = list(polys)
    for p in polys:
        if len(comps) != p.nvars:
            raise VariableMismatch(f"map has {len(comps)} components, polynomial has {p.nvars} variables")
    if not comps:
        return [truncate(p, D) if D is not None else p for p in polys]
    W = comps[0].variables
    if D is None:
        D = max((max(1, p.degree()) for p in polys), default=1) * max(1, max(c.degree() for c in comps))
    if W == polys_vars(polys, W) and all(c.coefficient((0,) * len(W)) == 0 for c in comps):
        chi = [c - Polynomial.variable(W, i) for i, c in enumerate(comps)]
        live = [i for i, p in enumerate(polys) if p]
        res = _substitute_taylor([truncate(polys[i], D) for i in live], chi, D)
        out = [Polynomial(W) for _ in polys]
        for i, r in zip(live, res):
            out[i] = r
        return out
    pm = PolyMap(comps)
    return [_substitute_powers(p, pm, D) if p else Polynomial(W) for p in polys]


def polys_vars(polys, default):
    """Common variable list of ``polys`` (``None`` if they differ)."""
    vs = {p.variables for p in polys}
    if not vs:
        return default
    return vs.pop() if len(vs) == 1 else None


def compose(f, g, D=None):
    """Componentwise ``f ∘ g``."""
    return PolyMap(substitute_many(f.components, g, D), f.role)


def _is_identity_to(phi, D):
    V = phi.variables
    for i, c in enumerate(phi.components):
        if truncate(c, D) != Polynomial.variable(V, i):
            return False
    return True


def invert_near_identity(phi, D, check=True):
    """Formal inverse of ``phi = Id + psi`` (``psi`` of degree >= 2) up to degree ``D``.

    Uses the fixed point ``chi = -psi ∘ (Id + chi)``; each pass fixes at least
    one more degree.  With ``check`` both compositions are verified to be the
    identity through degree ``D``.
    """
    if not isinstance(phi, PolyMap):
        phi = PolyMap(phi)
    V = phi.variables
    if len(phi.components) != len(V):
        raise VariableMismatch("inverse needs a square map")
    psi = phi.shift()
    for k, c in enumerate(psi):
        if c.min_degree() < 2:
            raise NotNearIdentity(f"component {k} has constant or non-identity linear part")
    psi = [truncate(c, D) for c in psi]
    ident = PolyMap.identity(V)
    s = min((c.min_degree() for c in psi), default=INF)
    chi = [Polynomial(V) for _ in psi]
    if s <= D:
        # chi is exact through degree d - s + 1 before the pass at degree d,
        # so each pass only has to be computed to the degree it fixes
        d = s
        while True:
            cur = PolyMap([ident[i] + chi[i] for i in range(len(V))])
            chi = [-c for c in substitute_many([truncate(c, d) for c in psi], cur, d)]
            if d == D:
                break
            d = min(D, d + s - 1)
    inv = PolyMap([ident[i] + chi[i] for i in range(len(V))])
    if check:
        if not _is_identity_to(compose(phi, inv, D), D) or not _is_identity_to(compose(inv, phi, D), D):
            raise ArithmeticError("near-identity inversion failed its composition check")
    return inv


def weighted_l2_norm(p, rho, n=None, measure="ball"):
    r"""Normalized :math:`L^2` norm of ``p`` on the complex ball of radius ``rho``.

    Monomials are orthogonal and

    .. math:: \|p\|_\rho^2 = \sum_\alpha w_\alpha |c_\alpha|^2 \rho^{2|\alpha|},
              \qquad w_\alpha = \frac{\alpha!\,n!}{(|\alpha|+n)!}

    for the volume average over the ball.  ``measure="sphere"`` uses the
    average over the bounding sphere instead,
    :math:`w_\alpha = \alpha!\,(n-1)!/(|\alpha|+n-1)!`.  Weights are formed
    from exact integer factorials before conversion.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    if measure not in ("ball", "sphere"):
        raise ValueError(f"unknown measure {measure!r}")
    n = p.nvars if n is None else n
    shift = n if measure == "ball" else n - 1
    total = 0.0
    nf = math.factorial(shift)
    for e, c in p.terms.items():
        d = sum(e)
        num = nf
        for k in e:
            num *= math.factorial(k)
        w = mpq(num, math.factorial(d + shift))
        total += float(w * abs2(c)) * rho ** (2 * d)
    return math.sqrt(total)


def majorant_sup_norm(p, rho):
    """Coefficient majorant ``sum |c_alpha| rho^|alpha|`` (bounds the sup on the ball)."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    return sum(abs(to_complex(c)) * rho ** sum(e) for e, c in p.terms.items())
