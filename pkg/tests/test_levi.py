import random

import pytest
from gmpy2 import mpq

from levinorm.catalog import (perturbed_table, random_near_identity, sl2, sl2_heisenberg, sl2_k2,
                              sl2_plus_k)
from levinorm.levi import (InputNotPoisson, LinearPartMismatch, Schedule, ScheduleError,
                           convergence_report, defects, initial_state, levi_normalize, levi_step,
                           normal_form_shape)
from levinorm.poisson import PoissonTable, jacobi_defects, levi_table, pushforward
from levinorm.polyalg import PolyMap, Polynomial, compose
from levinorm.scalars import GaussianRational


@pytest.mark.parametrize("seed", range(3))
def test_sl2_linearizes(seed):
    d = sl2()
    table, _ = perturbed_table(d, 4, seed)
    out, phi, log = levi_normalize(table, d, 2)
    assert out == levi_table(d, 4)
    assert all(log.checks.values())
    assert pushforward(table, phi, 4, inverse=log.phi_inverse) == out


def test_single_degree_schedule():
    d = sl2()
    table, _ = perturbed_table(d, 4, 11)
    out, _, log = levi_normalize(table, d, 3, schedule="single")
    assert out == levi_table(d, 4)
    assert [s.window for s in log.steps] == [(1, 2), (2, 3), (3, 4)]


@pytest.mark.parametrize("make", [sl2_k2, sl2_heisenberg, sl2_plus_k])
def test_radical_cases_reach_normal_form(make):
    d = make()
    table, _ = perturbed_table(d, 4, 5, density=0.3)
    out, _, log = levi_normalize(table, d, 2)
    shape = normal_form_shape(out, d)
    assert shape == {"xx_linear": True, "xy_linear": True, "yy_tail_order": True}
    xx, xy = defects(out, d)
    assert not any(xx.values()) and not any(xy.values())


def test_step_invariants():
    d = sl2_k2()
    table, _ = perturbed_table(d, 4, 2, density=0.3)
    state = initial_state(table, d)
    for l in range(2):
        state = levi_step(state)
        s = state.log[-1]
        assert all(s.checks.values())
        lo, hi = Schedule().window(l)
        for p in s.psi:
            assert all(lo < sum(e) <= hi for e in p.terms)
        assert not jacobi_defects(s.table)


def test_idempotent_on_normal_form():
    d = sl2()
    table, _ = perturbed_table(d, 4, 3)
    out, _, _ = levi_normalize(table, d, 2)
    again, phi, log = levi_normalize(out, d, 2)
    assert again == out
    assert phi == PolyMap.identity(out.variables)
    assert all(not any(s.psi) for s in log.steps)


def test_schedule_errors():
    d = sl2()
    with pytest.raises(ScheduleError):
        levi_normalize(levi_table(d, 4), d, 3)
    with pytest.raises(ScheduleError):
        Schedule("weird").window(0)
    assert Schedule("doubling").reach(4) == 16
    assert Schedule("single").reach(4) == 5


def test_rejects_non_poisson_input():
    d = sl2()
    lin = levi_table(d, 4)
    V = lin.variables
    pi = dict(lin.pi)
    pi[(0, 1)] = pi[(0, 1)] + Polynomial(V, {(2, 0, 0): mpq(1)})
    with pytest.raises(InputNotPoisson):
        levi_normalize(PoissonTable(V, pi, 4), d, 2)


def test_rejects_linear_part_mismatch():
    d = sl2()
    other = levi_table(sl2_plus_k(), 4)
    with pytest.raises(LinearPartMismatch):
        levi_normalize(other, d, 2)
    V = levi_table(d, 4).variables
    scaled = PoissonTable(V, {k: p.scale(2) for k, p in levi_table(d, 4).pi.items()}, 4)
    with pytest.raises(LinearPartMismatch):
        levi_normalize(scaled, d, 2)


def test_gaussian_coefficients():
    d = sl2()
    lin = levi_table(d, 4)
    V = lin.variables
    i = GaussianRational(0, 1)
    rng = random.Random(4)
    real = random_near_identity(V, rng)
    phi = PolyMap([Polynomial(V, {e: c * i if sum(e) == 2 else c for e, c in p.terms.items()})
                   for p in real])
    table = pushforward(lin, phi, 4)
    assert any(isinstance(c, GaussianRational) and c.im for p in table.pi.values() for c in p.terms.values())
    out, _, log = levi_normalize(table, d, 2)
    assert out == lin
    assert all(log.checks.values())


def test_convergence_report():
    d = sl2()
    _, _, log = levi_normalize(levi_table(d, 4), d, 2)
    rep = convergence_report(log, 0.5)
    assert all(r["psi_majorant"] == 0 and r["psi_weighted_l2"] == 0 for r in rep["steps"])
    assert rep["psi_all_below_rho"]
    table, _ = perturbed_table(d, 4, 0)
    _, _, log = levi_normalize(table, d, 2)
    rep = convergence_report(log, 0.5, 0.2)
    assert [r["l"] for r in rep["steps"]] == [1, 2]
    assert rep["steps"][0]["psi_radius"] == 0.5
    with pytest.raises(ValueError):
        convergence_report(log, 0)
    with pytest.raises(ValueError):
        convergence_report(log, 1.0, 0.3)


def test_accumulated_map_inverse():
    d = sl2_k2()
    table, _ = perturbed_table(d, 4, 9, density=0.3)
    _, phi, log = levi_normalize(table, d, 2)
    assert compose(phi, log.phi_inverse, 4) == PolyMap.identity(table.variables).truncate(4)
