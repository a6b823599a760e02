"""JSON-ready encodings of every data type, with exact round trips.

Scalars are ``"p/q"`` strings (``{"re": "p/q", "im": "p/q"}`` in the
Gaussian field).  Indices are zero-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .algebroid import AlgebroidData, base_names
from .levi import RunLog, StepLog
from .liealg import LeviAlgebraData, default_variables
from .poisson import PoissonTable
from .polyalg import PolyMap, Polynomial, graded_lex_key
from .scalars import FIELDS, format_scalar, parse_scalar

__all__ = [
    "FormatError",
    "Problem",
    "poly_to_json",
    "poly_from_json",
    "polymap_to_json",
    "polymap_from_json",
    "table_to_json",
    "table_from_json",
    "algebra_to_json",
    "algebra_from_json",
    "algebroid_to_json",
    "algebroid_from_json",
    "problem_to_json",
    "problem_from_json",
    "runlog_to_json",
    "runlog_from_json",
]

SCHEDULES = ("doubling", "single")


class FormatError(ValueError):
    """A document does not have the expected structure."""


def _require(obj, key, kind=None, where="document"):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"{where}: missing key {key!r}")
    value = obj[key]
    if kind is not None and (not isinstance(value, kind) or isinstance(value, bool)):
        raise FormatError(f"{where}: {key!r} must be {getattr(kind, '__name__', kind)}")
    return value


def _index(value, bound, where):
    if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value < bound:
        raise FormatError(f"{where}: index {value!r} out of range 0..{bound - 1}")
    return value


# --- polynomials -----------------------------------------------------------

def poly_to_json(p):
    return [{"exp": list(e), "coef": format_scalar(c)} for e, c in
            sorted(p.terms.items(), key=lambda t: graded_lex_key(t[0]))]


def poly_from_json(obj, variables, field="rational"):
    variables = tuple(variables)
    if not isinstance(obj, list):
        raise FormatError("polynomial must be a list of terms")
    terms = {}
    for t in obj:
        exp = _require(t, "exp", list, "term")
        if len(exp) != len(variables) or any(not isinstance(x, int) or isinstance(x, bool) or x < 0
                                               for x in exp):
            raise FormatError(f"term exponent {exp} does not fit {len(variables)} variables")
        e = tuple(exp)
        if e in terms:
            raise FormatError(f"repeated exponent {exp}")
        terms[e] = parse_scalar(_require(t, "coef", where="term"), field)
    return Polynomial(variables, terms)


def polymap_to_json(phi):
    return {"role": phi.role, "variables": list(phi.variables),
            "components": [poly_to_json(c) for c in phi.components]}


def polymap_from_json(obj, field="rational"):
    variables = _require(obj, "variables", list, "map")
    comps = [poly_from_json(c, variables, field) for c in _require(obj, "components", list, "map")]
    return PolyMap(comps, obj.get("role", "coordinate-change"))


# --- tables ----------------------------------------------------------------

def table_to_json(table):
    out = {"n": table.n, "D": table.D, "m": table.m, "variables": list(table.variables),
           "brackets": [{"i": i, "j": j, "poly": poly_to_json(p)}
                        for (i, j), p in sorted(table.pi.items()) if p]}
    return out


def table_from_json(obj, field="rational"):
    n = _require(obj, "n", int, "table")
    D = _require(obj, "D", int, "table")
    m = obj.get("m")
    if m is not None and (not isinstance(m, int) or not 0 <= m <= n):
        raise FormatError(f"table: block size m={m!r} invalid for n={n}")
    variables = obj.get("variables")
    if variables is None:
        variables = default_variables(n, m) if m is not None else [f"z{i + 1}" for i in range(n)]
    if len(variables) != n:
        raise FormatError(f"table: {len(variables)} variable names for n={n}")
    pi = {}
    for b in _require(obj, "brackets", list, "table"):
        i = _index(_require(b, "i", where="bracket"), n, "bracket")
        j = _index(_require(b, "j", where="bracket"), n, "bracket")
        if i >= j:
            raise FormatError(f"bracket ({i},{j}): only i < j is stored")
        if (i, j) in pi:
            raise FormatError(f"bracket ({i},{j}) listed twice")
        pi[(i, j)] = poly_from_json(_require(b, "poly", where="bracket"), variables, field)
    return PoissonTable(variables, pi, D, m)


# --- Lie algebra data ------------------------------------------------------

def algebra_to_json(data):
    def triples(t, antisym):
        return [[i, j, k, format_scalar(v)] for i, p in enumerate(t) for j, q in enumerate(p)
                for k, v in enumerate(q) if v and (not antisym or i < j)]

    return {"n": data.n, "m": data.m, "c": triples(data.c, True), "a": triples(data.a, False),
            "b": triples(data.b, True)}


def algebra_from_json(obj, field="rational"):
    n = _require(obj, "n", int, "algebra")
    m = _require(obj, "m", int, "algebra")
    parts = {}
    for name in ("c", "a", "b"):
        entries = []
        for t in obj.get(name, []):
            if not isinstance(t, list) or len(t) != 4:
                raise FormatError(f"algebra: {name} entries must be [i, j, k, value]")
            i, j, k, v = t
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in (i, j, k)):
                raise FormatError(f"algebra: non-integer index in {t}")
            entries.append((i, j, k, parse_scalar(v, field)))
        parts[name] = entries
    return LeviAlgebraData.from_triples(n, m, **parts)


# --- algebroids ------------------------------------------------------------

def algebroid_to_json(A):
    bracket = [{"i": i, "j": j, "k": k, "poly": poly_to_json(p)}
               for (i, j), coeffs in sorted(A.bracket.items()) for k, p in enumerate(coeffs) if p]
    anchor = [{"i": i, "j": j, "poly": poly_to_json(p)}
              for i, row in enumerate(A.anchor) for j, p in enumerate(row) if p]
    return {"N": A.N, "n": A.n, "D": A.D, "bracket": bracket, "anchor": anchor}


def algebroid_from_json(obj, field="rational"):
    N = _require(obj, "N", int, "algebroid")
    n = _require(obj, "n", int, "algebroid")
    D = _require(obj, "D", int, "algebroid")
    base = base_names(n)
    zero = Polynomial(base)
    bracket = {key: [zero] * N for key in combinations(range(N), 2)}
    for e in _require(obj, "bracket", list, "algebroid"):
        i = _index(_require(e, "i", where="bracket"), N, "bracket")
        j = _index(_require(e, "j", where="bracket"), N, "bracket")
        k = _index(_require(e, "k", where="bracket"), N, "bracket")
        if i >= j:
            raise FormatError(f"bracket ({i},{j}): only i < j is stored")
        bracket[(i, j)] = list(bracket[(i, j)])
        bracket[(i, j)][k] = poly_from_json(_require(e, "poly", where="bracket"), base, field)
    anchor = [[zero] * n for _ in range(N)]
    for e in _require(obj, "anchor", list, "algebroid"):
        i = _index(_require(e, "i", where="anchor"), N, "anchor")
        j = _index(_require(e, "j", where="anchor"), n, "anchor")
        anchor[i][j] = poly_from_json(_require(e, "poly", where="anchor"), base, field)
    return AlgebroidData(N, n, D, bracket, anchor)


# --- problem files ---------------------------------------------------------

@dataclass
class Problem:
    """A self-contained normalization job."""

    mode: str
    algebra: LeviAlgebraData
    structure: object
    steps: int
    D: int
    schedule: str = "doubling"
    field: str = "rational"
    diagnostics: dict = dc_field(default_factory=dict)
    seed: int = None

    def __post_init__(self):
        if self.mode not in ("poisson", "algebroid"):
            raise FormatError(f"unknown mode {self.mode!r}")
        if self.schedule not in SCHEDULES:
            raise FormatError(f"unknown schedule {self.schedule!r}")
        if self.field not in FIELDS:
            raise FormatError(f"unknown field {self.field!r}")
        if self.mode == "poisson":
            dim, D = self.structure.n, self.structure.D
        else:
            dim, D = self.structure.N + self.structure.n, self.structure.D
        if dim != self.algebra.n:
            raise FormatError(f"structure has dimension {dim}, algebra has {self.algebra.n}")
        if D != self.D:
            raise FormatError(f"structure truncated at {D}, run asks for D={self.D}")


def problem_to_json(problem):
    structure = (table_to_json(problem.structure) if problem.mode == "poisson"
                 else algebroid_to_json(problem.structure))
    run = {"steps": problem.steps, "D": problem.D, "schedule": problem.schedule,
           "field": problem.field}
    if problem.diagnostics:
        run["diagnostics"] = dict(problem.diagnostics)
    if problem.seed is not None:
        run["seed"] = problem.seed
    return {"mode": problem.mode, "algebra": algebra_to_json(problem.algebra),
            "structure": structure, "run": run}


def _truncate_structure(structure, D):
    if isinstance(structure, PoissonTable):
        return structure.truncate(D)
    return AlgebroidData(structure.N, structure.n, D, structure.bracket, structure.anchor)


def problem_from_json(obj):
    mode = _require(obj, "mode", str)
    run = _require(obj, "run", dict)
    fld = run.get("field", "rational")
    if fld not in FIELDS:
        raise FormatError(f"unknown field {fld!r}")
    algebra = algebra_from_json(_require(obj, "algebra", dict), fld)
    raw = _require(obj, "structure", dict)
    if mode == "poisson":
        structure = table_from_json(raw, fld)
        if structure.m is None:
            structure = structure.with_block(algebra.m)
    elif mode == "algebroid":
        structure = algebroid_from_json(raw, fld)
    else:
        raise FormatError(f"unknown mode {mode!r}")
    D = run.get("D", structure.D)
    if not isinstance(D, int) or isinstance(D, bool) or D < 1:
        raise FormatError(f"run: truncation degree {D!r} must be a positive integer")
    if D > structure.D:
        raise FormatError(f"run asks for D={D} but the structure is only known to degree {structure.D}")
    if D < structure.D:
        structure = _truncate_structure(structure, D)
    diagnostics = run.get("diagnostics") or {}
    if not isinstance(diagnostics, dict):
        raise FormatError("run.diagnostics must be an object")
    return Problem(mode, algebra, structure, _require(run, "steps", int, "run"), D,
                   run.get("schedule", "doubling"), fld, diagnostics, run.get("seed"))


# --- run logs --------------------------------------------------------------

def step_to_json(s):
    return {"l": s.l, "window": list(s.window),
            "w": [poly_to_json(p) for p in s.w], "v": [poly_to_json(p) for p in s.v],
            "psi": [poly_to_json(p) for p in s.psi], "table": table_to_json(s.table),
            "dims": dict(s.dims), "times": dict(s.times), "checks": dict(s.checks)}


def step_from_json(obj, field="rational"):
    table = table_from_json(_require(obj, "table", dict, "step"), field)
    V = table.variables
    polys = {key: [poly_from_json(p, V, field) for p in obj.get(key, [])] for key in ("w", "v", "psi")}
    return StepLog(_require(obj, "l", int, "step"), tuple(_require(obj, "window", list, "step")),
                   polys["w"], polys["v"], polys["psi"], table,
                   dict(obj.get("dims", {})), dict(obj.get("times", {})), dict(obj.get("checks", {})))


def runlog_to_json(log):
    return {"schedule": log.schedule, "D": log.D,
            "steps": [step_to_json(s) for s in log.steps],
            "phi_inverse": polymap_to_json(log.phi_inverse) if log.phi_inverse is not None else None,
            "checks": dict(log.checks),
            "input_table": table_to_json(log.input_table) if log.input_table is not None else None}


def runlog_from_json(obj, field="rational"):
    if not isinstance(obj, dict):
        raise FormatError("run log must be an object")
    inv = obj.get("phi_inverse")
    inp = obj.get("input_table")
    return RunLog(_require(obj, "schedule", str, "log"), _require(obj, "D", int, "log"),
                  [step_from_json(s, field) for s in _require(obj, "steps", list, "log")],
                  polymap_from_json(inv, field) if inv is not None else None,
                  dict(obj.get("checks", {})),
                  table_from_json(inp, field) if inp is not None else None)

