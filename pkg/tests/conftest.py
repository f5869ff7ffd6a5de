import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from singfol.catalog import lookup, standard_test_set
from singfol.lattice import CohClass, IntersectionForm


@pytest.fixture(scope="session")
def catalog():
    return standard_test_set()


@pytest.fixture
def cp2():
    return lookup("CP2")


@pytest.fixture
def s2xs2():
    return lookup("S2xS2")


def brute_characteristic(form: IntersectionForm, c) -> bool:
    """c.a == a.a (mod 2) over every a in {0,1}^n."""
    for bits in itertools.product((0, 1), repeat=form.rank):
        a = CohClass(bits)
        if (form.pair(c, a) - form.square(a)) % 2:
            return False
    return True


def elementary_pair(n: int, ops):
    """Unimodular P and its integer inverse from (i, j, k) row operations."""
    P = np.eye(n, dtype=object)
    Pinv = np.eye(n, dtype=object)
    for i, j, k in ops:
        if i == j:
            continue
        E = np.eye(n, dtype=object)
        E[i, j] = k
        Einv = np.eye(n, dtype=object)
        Einv[i, j] = -k
        P = P.dot(E)
        Pinv = Einv.dot(Pinv)
    return [[int(v) for v in r] for r in P], [[int(v) for v in r] for r in Pinv]


def apply(mat, c: CohClass) -> CohClass:
    return CohClass(tuple(sum(r[j] * c.coords[j] for j in range(len(c))) for r in mat))


def classes(rank: int, bound: int = 4):
    return st.lists(st.integers(-bound, bound), min_size=rank, max_size=rank).map(lambda v: CohClass(tuple(v)))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
