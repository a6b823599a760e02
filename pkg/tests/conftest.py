import random

import pytest
from gmpy2 import mpq
from hypothesis import HealthCheck, settings, strategies as st

from levinorm.polyalg import Polynomial, monomials

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def rationals(height=6):
    return st.builds(lambda p, q: mpq(p, q), st.integers(-height, height), st.integers(1, height))


def polynomials(nvars=3, max_degree=3, max_terms=6, names=None):
    names = names or tuple(f"z{i + 1}" for i in range(nvars))
    exps = st.sampled_from([e for d in range(max_degree + 1) for e in monomials(nvars, d)])
    return st.dictionaries(exps, rationals(), max_size=max_terms).map(lambda t: Polynomial(names, t))


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE = []


def record(criterion, ok, detail=""):
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
    ACCEPTANCE.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
