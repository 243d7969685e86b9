from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from shiftopt.simplex import InfeasibleLP, UnboundedLP, solve_lp


def test_small_exact_problem():
    # min x + 2y  s.t. x + y = 1, x - y = 1/2
    res = solve_lp([1, 2], [[1, 1], [1, -1]], [1, Fraction(1, 2)], exact=True)
    assert res.value == Fraction(5, 4)
    assert res.x == [Fraction(3, 4), Fraction(1, 4)]


def test_infeasible_and_unbounded():
    with pytest.raises(InfeasibleLP):
        solve_lp([1, 1], [[1, 1]], [-1], exact=True)
    with pytest.raises(UnboundedLP):
        solve_lp([-1, 0], [[0, 1]], [1], exact=True)


def test_redundant_rows_are_tolerated():
    res = solve_lp([1, 0, 0], [[1, 1, 1], [2, 2, 2], [0, 1, 0]], [1, 2, Fraction(1, 3)], exact=True)
    assert res.value == 0


@st.composite
def feasible_lps(draw):
    n = draw(st.integers(2, 6))
    m = draw(st.integers(1, n))
    A = [[draw(st.integers(-3, 3)) for _ in range(n)] for _ in range(m)]
    x0 = [Fraction(draw(st.integers(0, 4)), draw(st.integers(1, 3))) for _ in range(n)]
    b = [sum(a * x for a, x in zip(row, x0)) for row in A]
    c = [draw(st.integers(0, 5)) for _ in range(n)]
    return c, A, b


@given(feasible_lps())
def test_matches_scipy(lp):
    c, A, b = lp
    exact = solve_lp(c, A, b, exact=True)
    flt = solve_lp(c, A, b, exact=False)
    ref = linprog(c, A_eq=np.array(A, float), b_eq=np.array(b, float), bounds=(0, None), method="highs")
    assert ref.status == 0
    assert float(exact.value) == pytest.approx(ref.fun, abs=1e-7)
    assert flt.value == pytest.approx(ref.fun, abs=1e-7)
    # the returned point is feasible and attains the value
    assert all(v >= 0 for v in exact.x)
    assert [sum(a * x for a, x in zip(row, exact.x)) for row in A] == b
    assert sum(ci * xi for ci, xi in zip(c, exact.x)) == exact.value
