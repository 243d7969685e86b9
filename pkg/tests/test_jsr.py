import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from shiftopt.jsr import jsr_lower, jsr_upper
from shiftopt.lyapunov import lyapunov_periodic_exact
from shiftopt.symbolic import Materialized, Periodic, Sturmian
from shiftopt.weights import OrbitInduced, constant, greedy_table, gurvits_weights

from test_cocycle import periodic_weights
from test_weights import tabular_weights


def all_words_upto(n):
    return ["".join(b) for L in range(1, n + 1) for b in itertools.product("01", repeat=L)]


@pytest.mark.parametrize("method", ["exchange", "branch_and_bound", "exhaustive"])
def test_constant_weights(method):
    for n in (1, 3, 7):
        assert jsr_upper(constant(Fraction(5, 4)), n, method=method) == Fraction(5, 4)


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_greedy_word_exists(n):
    phi = OrbitInduced(Periodic("0"), greedy_table())
    assert jsr_upper(phi, n) == 1
    assert jsr_upper(phi, n, method="branch_and_bound") == 1


@given(tabular_weights(span=4), st.integers(1, 7))
def test_methods_agree_with_brute_force(pair, n):
    phi, ref = pair
    want = oracles.table_jsr(ref, n)
    for method in ("exchange", "branch_and_bound", "exhaustive"):
        assert jsr_upper(phi, n, method=method) == want


@given(periodic_weights(), st.integers(1, 8))
def test_methods_agree_on_periodic_weights(data, n):
    phi, f, period = data
    want = max(max(oracles.table_sum(f, x, k) for k in range(period)) for x in oracles.words(n)) / n
    for method in ("exchange", "branch_and_bound", "exhaustive"):
        assert jsr_upper(phi, n, method=method) == want


@given(periodic_weights(), st.integers(1, 4))
def test_upper_nonincreasing_along_divisibility(data, n):
    phi = data[0]
    assert jsr_upper(phi, 2 * n) <= jsr_upper(phi, n)
    assert jsr_upper(phi, 3 * n) <= jsr_upper(phi, n)


@given(tabular_weights(span=4), tabular_weights(span=4), st.integers(1, 8))
def test_upper_is_one_lipschitz(p1, p2, n):
    (f1, r1), (f2, r2) = p1, p2
    assert abs(jsr_upper(f1, n) - jsr_upper(f2, n)) <= r1.sup_distance(r2)


@given(periodic_weights(), st.integers(1, 8))
def test_lower_below_upper(data, n):
    phi = data[0]
    low = jsr_lower(phi, all_words_upto(4))
    assert low <= jsr_upper(phi, n)


def test_lower_examples():
    assert jsr_lower(constant(Fraction(2, 7)), ["0", "011"]) == Fraction(2, 7)
    phi = OrbitInduced(Periodic("01"), greedy_table())
    assert jsr_lower(phi, all_words_upto(4)) == 1
    rep = jsr_lower(phi, all_words_upto(4), report=True)
    assert rep["certified"] and rep["word"] in ("01", "10", "0101", "1010")


def test_greedy_gap_weights_bounds_meet():
    # phi(z_i, i) = 1 + r(i), phi(1 - z_i, i) = r(i) - 1 with a periodic row offset r
    z = Periodic("0010111")
    table = {(0, 0): Fraction(3, 2), (1, 1): Fraction(5, 4), (1, 0): Fraction(-1, 2), (0, 1): Fraction(-3, 4)}
    phi = OrbitInduced(z, table)
    greedy_avg = Fraction(sum(table[(b, b)] for b in map(int, "0010111")), 7)
    low = jsr_lower(phi, all_words_upto(7))
    assert low == greedy_avg
    assert jsr_upper(phi, 14) == greedy_avg


def test_report_and_errors():
    phi = constant(1)
    rep = jsr_upper(phi, 4, report=True)
    assert rep["certified"] and rep["value"] == 1 and rep["n"] == 4
    with pytest.raises(ValueError):
        jsr_upper(phi, 0)
    with pytest.raises(ValueError):
        jsr_upper(phi, 30, method="exhaustive")
    with pytest.raises(ValueError):
        jsr_lower(phi, [])


def test_aperiodic_weights_flagged_heuristic():
    phi = gurvits_weights(Sturmian(), 0.5)
    rep = jsr_upper(phi, 6, k_window=20, report=True)
    assert not rep["certified"]
    assert not jsr_lower(phi, ["01"], m=4, k_window=5, report=True)["certified"]


def test_gurvits_jsr_upper_at_twelve():
    z = Materialized(Sturmian(), -200, 400)
    phi = gurvits_weights(z, 0.5)
    value = jsr_upper(phi, 12, k_window=150)
    assert -0.02 <= value <= 0
    assert jsr_upper(phi, 12, k_window=150, method="branch_and_bound") == pytest.approx(value, abs=1e-12)


def test_lipschitz_on_log_scale_weights():
    z = Materialized(Sturmian(), -100, 200)
    a, b = gurvits_weights(z, 0.5), gurvits_weights(z, 0.6)
    gap = abs(math.log(0.5) - math.log(0.6))
    assert abs(jsr_upper(a, 10, k_window=50) - jsr_upper(b, 10, k_window=50)) <= gap + 1e-12
