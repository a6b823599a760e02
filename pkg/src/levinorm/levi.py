"""Iterative Levi normalization of truncated Poisson structures.

Step ``l`` works on the degree window ``(lo, hi]`` (``(2^l, 2^{l+1}]`` for
the doubling schedule, ``(l+1, l+2]`` for the single-degree one):

1. ``f_ij``, the window part of ``{x_i, x_j} - Σ c_ij^k x_k``, is a 2-cocycle;
   ``w = solve_2cocycle(f)`` and ``x <- x - w``.
2. ``ξ_i ↦ Σ_j (window part of {x_i, y_j} - Σ a_ij^k y_k) ∂/∂y_j`` is a
   1-cocycle; ``v = solve_1cocycle`` and ``y <- y - v``.
3. ``φ = Id - (w, v)``; the table is pushed forward by ``φ`` and the
   accumulated change becomes ``Φ <- φ ∘ Φ``.

After step ``l`` every x-x and x-y defect vanishes through degree ``hi``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations

from .cohom import Cochain, cocycle_defect, solve_1cocycle, solve_2cocycle
from .liealg import build_window, validate_levi_input
from .poisson import PoissonTable, bracket, jacobi_defects, linear_part, pushforward
from .polyalg import (PolyMap, Polynomial, compose, invert_near_identity, majorant_sup_norm,
                      truncate, weighted_l2_norm, window_part)

__all__ = [
    "NormalizationError",
    "ScheduleError",
    "InputNotPoisson",
    "LinearPartMismatch",
    "InvariantViolation",
    "Schedule",
    "StepLog",
    "RunLog",
    "LeviRunState",
    "initial_state",
    "extract_2cocycle",
    "substep_x",
    "substep_y",
    "levi_step",
    "levi_normalize",
    "defects",
    "convergence_report",
]


class NormalizationError(ArithmeticError):
    """A normalization run could not proceed; ``log`` holds completed steps."""

    def __init__(self, message, log=None):
        super().__init__(message)
        self.log = log


class ScheduleError(NormalizationError):
    pass


class InputNotPoisson(NormalizationError):
    pass


class LinearPartMismatch(NormalizationError):
    pass


class InvariantViolation(NormalizationError):
    pass


@dataclass(frozen=True)
class Schedule:
    """Degree windows of a run: ``kind`` is ``"doubling"`` or ``"single"``."""

    kind: str = "doubling"

    def window(self, l):
        if self.kind == "doubling":
            return 2 ** l, 2 ** (l + 1)
        if self.kind == "single":
            return l + 1, l + 2
        raise ScheduleError(f"unknown schedule {self.kind!r}")

    def reach(self, steps):
        """Degree through which defects vanish after ``steps`` steps."""
        return self.window(steps - 1)[1] if steps else 1

    def check(self, steps, D):
        if steps < 0:
            raise ScheduleError("number of steps must be nonnegative")
        if self.reach(steps) > D:
            raise ScheduleError(
                f"{steps} {self.kind} steps reach degree {self.reach(steps)} > truncation D={D}")


@dataclass
class StepLog:
    l: int
    window: tuple
    w: list
    v: list
    psi: list
    table: PoissonTable
    dims: dict = field(default_factory=dict)
    times: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)


@dataclass
class RunLog:
    """Everything a run produced besides the normal form and ``Φ``."""

    schedule: str
    D: int
    steps: list = field(default_factory=list)
    phi_inverse: PolyMap = None
    checks: dict = field(default_factory=dict)
    input_table: PoissonTable = None


class _Windows:
    """Cache of module windows for one run."""

    def __init__(self, data, variables, kinds, fiber):
        self.data = data
        self.variables = variables
        self.kinds = kinds
        self.fiber = fiber
        self._cache = {}

    def get(self, which, lo, hi):
        kind = self.kinds[which]
        key = (kind, lo, hi)
        if key not in self._cache:
            self._cache[key] = build_window(self.data, kind, lo, hi, self.variables, self.fiber)
        return self._cache[key]


@dataclass(frozen=True)
class LeviRunState:
    """Coordinates ``z^l`` after ``l`` steps.

    ``phi`` maps original coordinates to current ones (component ``i`` is
    the current ``i``-th coordinate written in the original ones) and
    ``phi_inverse`` is its inverse, both to degree ``D``.
    """

    l: int
    table: PoissonTable
    data: object
    phi: PolyMap
    phi_inverse: PolyMap
    schedule: Schedule
    windows: _Windows
    log: tuple = ()

    @property
    def D(self):
        return self.table.D

    @property
    def m(self):
        return self.data.m


def initial_state(table, data, schedule="doubling", window_kinds=None, fiber=None):
    kinds = window_kinds or {"function": "function-window", "vector": "vectorfield-window"}
    ident = PolyMap.identity(table.variables)
    sched = schedule if isinstance(schedule, Schedule) else Schedule(schedule)
    return LeviRunState(0, table.with_block(data.m), data, ident, ident, sched,
                        _Windows(data, table.variables, kinds, fiber))


def _coord(V, i):
    return Polynomial.variable(V, i)


def _linear_combo(V, coeffs, offset):
    terms = {}
    for k, c in enumerate(coeffs):
        if c:
            e = [0] * len(V)
            e[offset + k] = 1
            terms[tuple(e)] = c
    return Polynomial(V, terms, _trusted=True)


def defects(table, data):
    """``{x_i,x_j} - Σc x`` and ``{x_i,y_j} - Σa y`` for the whole table.

    Returns ``(xx, xy)`` dictionaries keyed by index pairs (``j`` in the
    radical block for ``xy``).
    """
    V, m = table.variables, data.m
    xx, xy = {}, {}
    for i, j in combinations(range(m), 2):
        xx[(i, j)] = table.entry(i, j) - _linear_combo(V, data.c[i][j], 0)
    for i in range(m):
        for j in range(data.r):
            xy[(i, j)] = table.entry(i, m + j) - _linear_combo(V, data.a[i][j], m)
    return xx, xy


def _low_degree_defects(table, data, through):
    xx, xy = defects(table, data)
    bad = []
    for name, d in (("xx", xx), ("xy", xy)):
        for key, p in d.items():
            if p and p.min_degree() <= through:
                bad.append((name, key, p.min_degree()))
    return bad


def extract_2cocycle(state):
    """The step's 2-cocycle over the function window, verified closed."""
    lo, hi = state.schedule.window(state.l)
    win = state.windows.get("function", lo, hi)
    xx, _ = defects(state.table, state.data)
    vals = {key: window_part(p, lo, hi) for key, p in xx.items()}
    f = Cochain.from_elements(win, 2, vals)
    bad = cocycle_defect(f)
    if bad:
        raise InputNotPoisson(f"input not Poisson to required order: 2-cochain not closed at {min(bad)}")
    return f


def substep_x(state, f):
    """Solve ``δw = f`` and return ``(new x coordinates, w)`` as polynomials."""
    w = solve_2cocycle(f, check=False)
    V = state.table.variables
    wp = w.elements()
    new_x = [_coord(V, i) - wp[i] for i in range(state.m)]
    return new_x, wp


def _one_cochain(state, new_x):
    lo, hi = state.schedule.window(state.l)
    win = state.windows.get("vector", lo, hi)
    V, m, r = state.table.variables, state.m, state.data.r
    vals = []
    for i in range(m):
        comps = []
        for j in range(r):
            p = bracket(state.table, new_x[i], _coord(V, m + j)) - _linear_combo(V, state.data.a[i][j], m)
            comps.append(window_part(p, lo, hi))
        vals.append(comps)
    return Cochain.from_elements(win, 1, vals)


def substep_y(state, new_x):
    """Solve the 1-cocycle of the updated x-coordinates; returns ``(new y, v)``."""
    V, m, r = state.table.variables, state.m, state.data.r
    if r == 0:
        return [], []
    wc = _one_cochain(state, new_x)
    bad = cocycle_defect(wc)
    if bad:
        raise InputNotPoisson(f"input not Poisson to required order: 1-cochain not closed at {min(bad)}")
    g = solve_1cocycle(wc, check=False)
    vp = g.elements()
    new_y = [_coord(V, m + j) - vp[j] for j in range(r)]
    return new_y, vp


def levi_step(state, verify=True):
    """One normalization step; returns the state at ``l + 1``."""
    t0 = time.perf_counter()
    lo, hi = state.schedule.window(state.l)
    D, V = state.D, state.table.variables
    times = {}

    f = extract_2cocycle(state)
    t1 = time.perf_counter()
    times["extract"] = t1 - t0
    new_x, w = substep_x(state, f)
    t2 = time.perf_counter()
    times["solve_x"] = t2 - t1
    new_y, v = substep_y(state, new_x)
    t3 = time.perf_counter()
    times["solve_y"] = t3 - t2

    psi = [-p for p in w] + [-p for p in v]
    fwin = state.windows.get("function", lo, hi)
    dims = {"function_window": fwin.dim, "function_invariants": fwin.casimir_split.dim_w0}
    if state.data.r:
        vwin = state.windows.get("vector", lo, hi)
        dims.update(vector_window=vwin.dim, vector_invariants=vwin.casimir_split.dim_w0)

    if not any(psi):
        table, phi, phi_inv = state.table, state.phi, state.phi_inverse
    else:
        step = PolyMap(new_x + new_y)
        step_inv = invert_near_identity(step, D, check=False)
        table = pushforward(state.table, step, D, inverse=step_inv)
        phi = compose(step, state.phi, D)
        phi_inv = compose(state.phi_inverse, step_inv, D)
    t4 = time.perf_counter()
    times["pushforward"] = t4 - t3

    checks = {}
    if verify:
        checks = _verify_step(state, table, hi)
    times["verify"] = time.perf_counter() - t4
    entry = StepLog(state.l, (lo, hi), w, v, psi, table, dims, times, checks)
    new = LeviRunState(state.l + 1, table, state.data, phi, phi_inv, state.schedule,
                       state.windows, state.log + (entry,))
    failed = [k for k, ok in checks.items() if not ok]
    if failed:
        raise InvariantViolation(f"step {state.l} violates {', '.join(failed)}", new.log)
    return new


def _is_identity(pm, D):
    V = pm.variables
    return all(truncate(c, D) == _coord(V, i) for i, c in enumerate(pm.components))


def _verify_step(state, table, hi):
    return {
        "window_progress": not _low_degree_defects(table, state.data, hi),
        "linear_part": linear_part(table) == state.data.full_constants(),
        "jacobi": not jacobi_defects(table),
    }


def _validate(table, data, steps, schedule):
    rep = validate_levi_input(data)
    if not rep.ok:
        raise LinearPartMismatch("invalid Levi data: " + "; ".join(p["message"] for p in rep.problems))
    if table.n != data.n:
        raise LinearPartMismatch(f"table has {table.n} variables, algebra has dimension {data.n}")
    schedule.check(steps, table.D)
    if linear_part(table) != data.full_constants():
        raise LinearPartMismatch("linear part of the table does not match the Levi data")
    bad = jacobi_defects(table)
    if bad:
        raise InputNotPoisson(f"input not Poisson to order {table.D - 1}: Jacobi fails on {min(bad)}")


def normal_form_shape(table, data):
    """Exact checks of the normal-form relations through the table's degree."""
    xx, xy = defects(table, data)
    V, m = table.variables, data.m
    tails_ok = True
    for i, j in combinations(range(data.r), 2):
        g = table.entry(m + i, m + j) - _linear_combo(V, data.b[i][j], m)
        if g and g.min_degree() < 2:
            tails_ok = False
    return {"xx_linear": not any(xx.values()), "xy_linear": not any(xy.values()),
            "yy_tail_order": tails_ok}


def levi_normalize(table, data, steps, schedule="doubling", verify=True,
                   window_kinds=None, fiber=None, on_step=None):
    """Run ``steps`` normalization steps.

    Returns ``(normal table, Φ, log)``; ``log.phi_inverse`` holds ``Φ^{-1}``
    and ``log.checks`` the final verification results.  Any failure raises a
    :class:`NormalizationError` whose ``log`` holds the completed steps.
    """
    sched = schedule if isinstance(schedule, Schedule) else Schedule(schedule)
    log = RunLog(sched.kind, table.D, input_table=table)
    _validate(table, data, steps, sched)
    state = initial_state(table, data, sched, window_kinds, fiber)
    try:
        for _ in range(steps):
            state = levi_step(state, verify=verify)
            log.steps = list(state.log)
            if on_step is not None:
                on_step(state.log[-1])
    except NormalizationError as exc:
        log.steps = list(exc.log or state.log)
        exc.log = log
        raise
    except ArithmeticError as exc:
        log.steps = list(state.log)
        raise NormalizationError(str(exc), log) from exc
    log.phi_inverse = state.phi_inverse
    out = state.table
    if verify:
        checks = normal_form_shape(out, data)
        if steps:
            checks["consistency"] = pushforward(table, state.phi, table.D,
                                                inverse=state.phi_inverse) == out
        checks["jacobi"] = not jacobi_defects(out)
        checks["phi_inverse"] = _is_identity(compose(state.phi, state.phi_inverse, table.D), table.D)
        log.checks = checks
        failed = [k for k, ok in checks.items() if not ok]
        if failed:
            raise InvariantViolation("final table violates " + ", ".join(failed), log)
    return out, state.phi, log


# --- diagnostics ------------------------------------------------------------

def _table_norm(table, radius):
    return max((majorant_sup_norm(p, radius) for p in table.pi.values()), default=0.0)


def convergence_report(log, rho, epsilon=0.1):
    """Majorant norms along a run, mirroring the analytic convergence conditions.

    For the change ``ψ_l`` made by step ``l - 1`` the majorant is taken at
    radius ``exp(1/(l-1) - ε/(l-1)^2) ρ`` (``ρ`` when ``l = 1``) and compared
    with ``ρ``.  The table after step ``l`` is measured at ``exp(1/l) ρ`` and
    compared with ``exp(-1/√l) ρ``; the implied constant ``C_l`` is the
    ratio.  Nothing here feeds back into the algebra.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    if not 0 < epsilon < 0.25:
        raise ValueError("epsilon must lie in (0, 1/4)")
    rows = []
    for s in log.steps:
        l = s.l + 1
        r_psi = rho if l == 1 else math.exp(1 / (l - 1) - epsilon / (l - 1) ** 2) * rho
        psi_maj = max((majorant_sup_norm(p, r_psi) for p in s.psi), default=0.0)
        psi_l2 = max((weighted_l2_norm(p, rho) for p in s.psi), default=0.0)
        r_pi = math.exp(1 / l) * rho
        pi_maj = _table_norm(s.table, r_pi)
        pi_l2 = max((weighted_l2_norm(p, rho) for p in s.table.pi.values()), default=0.0)
        target = math.exp(-1 / math.sqrt(l)) * rho
        rows.append({
            "l": l,
            "window": list(s.window),
            "psi_radius": r_psi,
            "psi_majorant": psi_maj,
            "psi_weighted_l2": psi_l2,
            "psi_below_rho": psi_maj < rho,
            "pi_radius": r_pi,
            "pi_majorant": pi_maj,
            "pi_weighted_l2": pi_l2,
            "implied_C": pi_maj / target,
            "dims": dict(s.dims),
            "times": dict(s.times),
        })
    pis = [r["pi_majorant"] for r in rows]
    Cs = [r["implied_C"] for r in rows]
    return {
        "rho": rho,
        "epsilon": epsilon,
        "steps": rows,
        "pi_non_increasing": all(a >= b for a, b in zip(pis, pis[1:])),
        "psi_all_below_rho": all(r["psi_below_rho"] for r in rows),
        "implied_C_max": max(Cs, default=0.0),
        "implied_C_non_increasing": all(a >= b for a, b in zip(Cs, Cs[1:])),
    }
