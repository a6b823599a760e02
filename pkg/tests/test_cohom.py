import random

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from levinorm.catalog import e3, sl2, sl2_k2, so3
from levinorm.cohom import (Cochain, NotACocycle, UnsupportedDegree, ce_differential, cochain_norm,
                            cocycle_defect, homotopy_norm_bound, homotopy_profile, random_cochain,
                            solve_1cocycle, solve_2cocycle, solve_direct, solve_direct_many)
from levinorm.liealg import build_window

WINDOWS = {}


def window(name, kind, lo, hi):
    key = (name, kind, lo, hi)
    if key not in WINDOWS:
        make = {"sl2": sl2, "sl2-k2": sl2_k2, "so3": so3, "e3": e3}[name]
        WINDOWS[key] = build_window(make(), kind, lo, hi)
    return WINDOWS[key]


CASES = [("sl2", "function-window", 1, 2), ("sl2", "function-window", 2, 4),
         ("sl2-k2", "function-window", 1, 2), ("sl2-k2", "vectorfield-window", 2, 4),
         ("so3", "function-window", 2, 4), ("e3", "vectorfield-window", 1, 2)]


@pytest.mark.parametrize("case", CASES)
@given(seed=st.integers(0, 10 ** 6))
def test_delta_squared_vanishes(case, seed):
    w = window(*case)
    rng = random.Random(seed)
    assert not cocycle_defect(ce_differential(random_cochain(w, 0, rng)))
    assert not cocycle_defect(ce_differential(random_cochain(w, 1, rng)))


@pytest.mark.parametrize("case", CASES)
@given(seed=st.integers(0, 10 ** 6))
def test_homotopy_inverts_delta_on_coboundaries(case, seed):
    w = window(*case)
    rng = random.Random(seed)
    f = ce_differential(random_cochain(w, 1, rng))
    assert ce_differential(solve_2cocycle(f)) == f
    g = ce_differential(random_cochain(w, 0, rng))
    assert ce_differential(solve_1cocycle(g)) == g


@pytest.mark.parametrize("case", CASES)
def test_direct_solver_agrees_up_to_cocycle(case):
    w = window(*case)
    rng = random.Random(7)
    fs = [ce_differential(random_cochain(w, 1, rng)) for _ in range(5)]
    direct = solve_direct_many(fs)
    for f, d in zip(fs, direct):
        h = solve_2cocycle(f)
        assert ce_differential(d) == f
        assert not cocycle_defect(h - d)
    assert ce_differential(solve_direct(fs[0])) == fs[0]


def test_non_cocycle_rejected():
    w = window("sl2", "function-window", 2, 4)
    rng = random.Random(1)
    while True:
        f = random_cochain(w, 2, rng)
        if cocycle_defect(f):
            break
    with pytest.raises(NotACocycle):
        solve_2cocycle(f)
    g = random_cochain(w, 1, rng)
    if cocycle_defect(g):
        with pytest.raises(NotACocycle):
            solve_1cocycle(g)


def test_zero_and_degree_errors():
    w = window("sl2", "function-window", 1, 2)
    assert solve_2cocycle(Cochain.zero(w, 2)).is_zero()
    with pytest.raises(UnsupportedDegree):
        ce_differential(Cochain.zero(w, 2))
    with pytest.raises(UnsupportedDegree):
        Cochain(3, w, {})


def test_invariant_part_of_2_cocycle():
    # the sl2 Casimir C = h^2 + 4ef is invariant; f(ξ_i, ξ_j) = [ξ_i, ξ_j]-coefficients times C
    w = window("sl2", "function-window", 1, 2)
    from levinorm.polyalg import Polynomial
    V = w.variables
    C = Polynomial(V, {(2, 0, 0): mpq(1), (0, 1, 1): mpq(4)})
    mu = Cochain.from_elements(w, 1, [C, Polynomial(V), Polynomial(V)])
    f = ce_differential(mu)
    assert not f.is_zero()
    assert ce_differential(solve_2cocycle(f)) == f


def test_cochain_algebra():
    w = window("sl2", "function-window", 1, 2)
    rng = random.Random(0)
    a, b = random_cochain(w, 1, rng), random_cochain(w, 1, rng)
    assert (a + b) - b == a
    assert ce_differential(a + b) == ce_differential(a) + ce_differential(b)
    assert Cochain.from_elements(w, 1, a.elements()) == a


def test_norm_bound_report():
    w = window("so3", "function-window", 2, 4)
    bound, rep = homotopy_norm_bound(w, 1.0, samples=10, rng=random.Random(0))
    assert rep["samples"] == 10 and bound == rep["max_ratio"] > 0
    assert cochain_norm(Cochain.zero(w, 1), 1.0) == 0


def test_compact_profile_non_growing():
    ws = [window("so3", "function-window", 2 ** l, 2 ** (l + 1)) for l in range(3)]
    prof = homotopy_profile(ws, 1.0, samples=15, seed=2)
    assert prof["non_growing"] and prof["slope"] <= 0
    assert len(prof["windows"]) == 3
