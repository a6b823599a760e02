"""Command-line front end.

Exit codes: 0 success, 1 domain failure, 2 unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog
from .algebroid import (AlgebroidError, NotALieAlgebroid, algebroid_levi_normalize,
                        dual_poisson, linear_levi_data)
from .cohom import homotopy_profile
from .levi import NormalizationError, Schedule, convergence_report, levi_normalize
from .liealg import (ConstraintError, LeviInputError, NotALieAlgebra, NotSemisimple, build_window,
                     validate_levi_input)
from .poisson import ConstantTermError, jacobi_defects, linear_part
from .polyalg import VariableMismatch
from .scalars import FIELDS, ScalarParseError
from .serialize import (FormatError, Problem, algebra_from_json, algebra_to_json, algebroid_to_json,
                        polymap_to_json, problem_from_json, problem_to_json,
                        runlog_from_json, runlog_to_json, table_to_json)

__all__ = ["main", "cmd_check", "cmd_normalize", "cmd_diagnostics", "cmd_make_example"]

OK, FAILED, BAD_INPUT = 0, 1, 2

_DOMAIN_ERRORS = (ArithmeticError, NotALieAlgebroid, ConstraintError, NotALieAlgebra, NotSemisimple,
                  ConstantTermError)
_INPUT_ERRORS = (FormatError, ScalarParseError, LeviInputError, AlgebroidError,
                 VariableMismatch, json.JSONDecodeError, OSError, IndexError, ValueError)


class InputError(Exception):
    """Raised for anything that should exit with status 2."""


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _apply_overrides(raw, args):
    run = raw.setdefault("run", {}) if isinstance(raw, dict) else None
    if run is None or not isinstance(run, dict):
        raise InputError("problem file must be an object with a 'run' section")
    for name, key in (("steps", "steps"), ("degree", "D"), ("schedule", "schedule"), ("field", "field")):
        value = getattr(args, name, None)
        if value is not None:
            run[key] = value
    diag = dict(run.get("diagnostics") or {})
    for name in ("rho", "epsilon"):
        value = getattr(args, name, None)
        if value is not None:
            diag[name] = value
    if diag:
        run["diagnostics"] = diag
    if getattr(args, "seed", None) is not None:
        run["seed"] = args.seed
    return raw


def load_problem(path, args=None):
    raw = _read_json(path)
    if args is not None:
        raw = _apply_overrides(raw, args)
    try:
        return problem_from_json(raw)
    except _INPUT_ERRORS as exc:
        raise InputError(f"{path}: {exc}") from exc


# --- check -----------------------------------------------------------------

def check_problem(problem):
    """All validations as a list of findings (empty means valid)."""
    findings = []
    rep = validate_levi_input(problem.algebra)
    findings.extend(rep.problems)
    try:
        Schedule(problem.schedule).check(problem.steps, problem.D)
    except NormalizationError as exc:
        findings.append({"code": "schedule", "message": str(exc)})
    if problem.mode == "algebroid":
        try:
            table = dual_poisson(problem.structure, check=False)
        except AlgebroidError as exc:
            findings.append({"code": "algebroid", "message": str(exc)})
            return findings
    else:
        table = problem.structure
    for (i, j, k), p in sorted(jacobi_defects(table).items()):
        findings.append({"code": "jacobi", "triple": [i, j, k],
                         "message": f"Jacobi identity fails on ({i},{j},{k}) at degree {p.min_degree()}"})
    try:
        C = linear_part(table)
    except (ConstantTermError, ArithmeticError, ValueError) as exc:
        findings.append({"code": "linear_part", "message": str(exc)})
    else:
        if C != problem.algebra.full_constants():
            findings.append({"code": "linear_part",
                             "message": "linear part of the structure does not match the algebra"})
    return findings


def cmd_check(path, args=None):
    """Returns ``(exit code, report)``."""
    try:
        problem = load_problem(path, args)
    except InputError as exc:
        return BAD_INPUT, {"ok": False, "error": str(exc), "findings": []}
    try:
        findings = check_problem(problem)
    except _INPUT_ERRORS as exc:
        return BAD_INPUT, {"ok": False, "error": str(exc), "findings": []}
    report = {"ok": not findings, "mode": problem.mode, "n": problem.algebra.n,
              "m": problem.algebra.m, "D": problem.D, "steps": problem.steps, "findings": findings}
    return (OK if not findings else FAILED), report


# --- normalize -------------------------------------------------------------

def _run(problem):
    if problem.mode == "poisson":
        out, phi, log = levi_normalize(problem.structure, problem.algebra, problem.steps,
                                       problem.schedule)
        return table_to_json(out), phi, log
    A, data = problem.structure, problem.algebra
    if linear_levi_data(A, data.m) != data:
        raise NormalizationError("linear part of the algebroid does not match the algebra")
    out, phi, log = algebroid_levi_normalize(A, data, problem.steps, problem.schedule)
    return algebroid_to_json(out), phi, log


def _positive(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and x > 0


def cmd_normalize(path, args=None):
    """Returns ``(exit code, result document)``."""
    try:
        problem = load_problem(path, args)
    except InputError as exc:
        return BAD_INPUT, {"status": "input-error", "error": str(exc)}
    diag = problem.diagnostics
    if "rho" in diag and not (_positive(diag["rho"]) and 0 < diag.get("epsilon", 0.1) < 0.25):
        return BAD_INPUT, {"status": "input-error", "error": "diagnostics need rho > 0 and epsilon in (0, 1/4)"}
    result = {"mode": problem.mode, "algebra": algebra_to_json(problem.algebra),
              "run": problem_to_json(problem)["run"]}
    try:
        normal, phi, log = _run(problem)
    except NormalizationError as exc:
        result.update(status="failed", error=f"{type(exc).__name__}: {exc}")
        if exc.log is not None:
            result["log"] = runlog_to_json(exc.log)
        return FAILED, result
    except _DOMAIN_ERRORS as exc:
        result.update(status="failed", error=f"{type(exc).__name__}: {exc}")
        return FAILED, result
    except _INPUT_ERRORS as exc:
        result.update(status="input-error", error=str(exc))
        return BAD_INPUT, result
    ok = all(log.checks.values())
    result.update(status="ok" if ok else "failed", normal_form=normal,
                  phi=polymap_to_json(phi), phi_inverse=polymap_to_json(log.phi_inverse),
                  checks=dict(log.checks), log=runlog_to_json(log))
    if "rho" in diag:
        result["diagnostics"] = convergence_report(log, diag["rho"], diag.get("epsilon", 0.1))
    return (OK if ok else FAILED), result


# --- diagnostics -----------------------------------------------------------

def cmd_diagnostics(path, rho, epsilon=0.1, homotopy_samples=0, seed=0):
    """Norm tables for a run log (a normalize result or a bare log)."""
    if rho is None or rho <= 0:
        return BAD_INPUT, {"error": "rho must be positive"}
    if not 0 < epsilon < 0.25:
        return BAD_INPUT, {"error": "epsilon must lie in (0, 1/4)"}
    doc = _read_json(path)
    try:
        fld = (doc.get("run") or {}).get("field", "rational")
        raw_log = doc.get("log", doc) if isinstance(doc, dict) else None
        if raw_log is None:
            raise FormatError("no run log in document")
        log = runlog_from_json(raw_log, fld)
    except _INPUT_ERRORS as exc:
        return BAD_INPUT, {"error": f"{path}: {exc}"}
    report = convergence_report(log, rho, epsilon)
    if homotopy_samples:
        if "algebra" not in doc:
            return BAD_INPUT, {"error": "homotopy profile needs the algebra section of a result file"}
        data = algebra_from_json(doc["algebra"], fld)
        windows = [build_window(data, "function-window", *s.window) for s in log.steps]
        report["homotopy"] = homotopy_profile(windows, rho, homotopy_samples, seed)
    return OK, report


# --- make-example ----------------------------------------------------------

def cmd_make_example(algebra, mode="poisson", steps=2, degree=None, seed=0, schedule="doubling"):
    """Seeded perturbed problem for one of the catalog algebras."""
    if algebra not in catalog.ALGEBRAS:
        raise InputError(f"unknown algebra {algebra!r}; choose from {', '.join(catalog.ALGEBRAS)}")
    data = catalog.ALGEBRAS[algebra]()
    D = degree if degree is not None else Schedule(schedule).reach(steps)
    if mode == "poisson":
        structure, _ = catalog.perturbed_table(data, D, seed)
    else:
        if data.r == 0:
            raise InputError("algebroid examples need an algebra acting on a radical block")
        structure, _ = catalog.perturbed_algebroid(data, D, seed)
    problem = Problem(mode, data, structure, steps, D, schedule, "rational", {}, seed)
    return problem_to_json(problem)


# --- output ----------------------------------------------------------------

def _fmt(x):
    return f"{x:.6g}" if isinstance(x, float) else str(x)


def _text_check(report):
    if "error" in report:
        return f"error: {report['error']}"
    lines = [f"{'valid' if report['ok'] else 'invalid'}: mode={report['mode']} n={report['n']} "
             f"m={report['m']} D={report['D']} steps={report['steps']}"]
    lines += [f"  [{f['code']}] {f['message']}" for f in report["findings"]]
    return "\n".join(lines)


def _text_normalize(result):
    lines = [f"status: {result['status']}"]
    if "error" in result:
        lines.append(f"error: {result['error']}")
    for s in result.get("log", {}).get("steps", []):
        checks = ", ".join(f"{k}={v}" for k, v in s["checks"].items())
        lines.append(f"step {s['l']} window {tuple(s['window'])}: {checks}")
    for k, v in result.get("checks", {}).items():
        lines.append(f"  {k}: {'pass' if v else 'FAIL'}")
    return "\n".join(lines)


def _text_diagnostics(report):
    if "error" in report:
        return f"error: {report['error']}"
    cols = ["l", "psi_majorant", "psi_weighted_l2", "pi_majorant", "pi_weighted_l2", "implied_C"]
    lines = [f"rho={report['rho']} epsilon={report['epsilon']}", "  ".join(f"{c:>16}" for c in cols)]
    for row in report["steps"]:
        lines.append("  ".join(f"{_fmt(row[c]):>16}" for c in cols))
    for flag in ("pi_non_increasing", "psi_all_below_rho", "implied_C_non_increasing"):
        lines.append(f"{flag}: {report[flag]}")
    if "homotopy" in report:
        h = report["homotopy"]
        for w in h["windows"]:
            lines.append(f"homotopy window {tuple(w['window'])}: max ratio {_fmt(w['max_ratio'])}")
        lines.append(f"homotopy bound {_fmt(h['bound'])}, non_growing: {h['non_growing']}")
    return "\n".join(lines)


def _emit(doc, args, text):
    payload = json.dumps(doc, indent=2)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    if args.format == "text":
        print(text(doc))
    elif not args.output:
        print(payload)


def build_parser():
    p = argparse.ArgumentParser(prog="levinorm", description="Levi normal forms of truncated Poisson structures")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--output", "-o")
        sp.add_argument("--format", choices=("json", "text"), default="json")

    def run_flags(sp):
        sp.add_argument("--steps", type=int)
        sp.add_argument("--degree", type=int, help="truncation degree D")
        sp.add_argument("--schedule", choices=("doubling", "single"))
        sp.add_argument("--field", choices=FIELDS)
        sp.add_argument("--seed", type=int)

    sp = sub.add_parser("check", help="validate a problem file")
    sp.add_argument("problem")
    run_flags(sp)
    common(sp)

    sp = sub.add_parser("normalize", help="run the normalization")
    sp.add_argument("problem")
    run_flags(sp)
    sp.add_argument("--rho", type=float)
    sp.add_argument("--epsilon", type=float)
    common(sp)

    sp = sub.add_parser("diagnostics", help="norm tables for a run log")
    sp.add_argument("log")
    sp.add_argument("--rho", type=float, default=1.0)
    sp.add_argument("--epsilon", type=float, default=0.1)
    sp.add_argument("--homotopy-samples", type=int, default=0,
                    help="random coboundaries per window for the homotopy ratio profile")
    sp.add_argument("--seed", type=int, default=0)
    common(sp)

    sp = sub.add_parser("make-example", help="write a seeded perturbed problem file")
    sp.add_argument("algebra", choices=sorted(catalog.ALGEBRAS))
    sp.add_argument("--mode", choices=("poisson", "algebroid"), default="poisson")
    sp.add_argument("--steps", type=int, default=2)
    sp.add_argument("--degree", type=int)
    sp.add_argument("--schedule", choices=("doubling", "single"), default="doubling")
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            code, doc = cmd_check(args.problem, args)
            _emit(doc, args, _text_check)
        elif args.command == "normalize":
            code, doc = cmd_normalize(args.problem, args)
            _emit(doc, args, _text_normalize)
        elif args.command == "diagnostics":
            code, doc = cmd_diagnostics(args.log, args.rho, args.epsilon, args.homotopy_samples, args.seed)
            _emit(doc, args, _text_diagnostics)
        else:
            doc = cmd_make_example(args.algebra, args.mode, args.steps, args.degree, args.seed,
                                   args.schedule)
            code = OK
            _emit(doc, args, lambda d: f"{d['mode']} problem: n={d['algebra']['n']} "
                                       f"D={d['run']['D']} steps={d['run']['steps']}")
    except InputError as exc:
        print(f"levinorm: {exc}", file=sys.stderr)
        return BAD_INPUT
    return code


if __name__ == "__main__":
    sys.exit(main())
