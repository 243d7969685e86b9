from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from shiftopt.lyapunov import lyapunov_upper
from shiftopt.measures import Bernoulli, Markov, PeriodicMeasure, cylinder_prob
from shiftopt.perturb import check_growth, check_upper_inequality, growth_slack, psi_window_sum, random_draws
from shiftopt.symbolic import Periodic
from shiftopt.weights import FiniteSet, OrbitInduced, Psi, build_plan, greedy_table


def test_no_occurrence_bound():
    psi = Psi("11", FiniteSet(range(-10, 10)))
    rep = check_upper_inequality(psi, "0101010", 0)
    assert rep["occurrences"] == 0
    assert rep["lhs"] <= 2 * 2 * 1 == rep["rhs"]


def test_aligned_repetition_grows_like_n_per_occurrence():
    psi = Psi("10", FiniteSet(range(0, 40, 2)))
    rep = check_upper_inequality(psi, "10" * 20, 0)
    assert rep["lhs"] == 2 * 20 and rep["occurrences"] == 20
    # every occurrence is matched, leaving exactly the 2N(N-1) edge allowance
    assert rep["holds"] and rep["rhs"] - rep["lhs"] == 2 * 2 * 1


def test_short_word_rejected():
    with pytest.raises(ValueError):
        check_upper_inequality(Psi("10", FiniteSet([0])), "10", 0)


@given(
    st.text("01", min_size=1, max_size=4),
    st.lists(st.integers(-15, 15), max_size=20),
    st.text("01", min_size=5, max_size=30),
    st.integers(-20, 20),
)
def test_inequality_holds_for_arbitrary_sets(omega, members, x, k):
    if len(x) <= len(omega):
        return
    psi = Psi(omega, FiniteSet(members))
    rep = check_upper_inequality(psi, x, k)
    brute = sum(oracles.psi_brute(omega, set(members), int(c), k + i) for i, c in enumerate(x))
    assert rep["lhs"] == brute == psi_window_sum(psi, x, k)
    assert rep["holds"]


def test_random_draws_on_plan():
    z = Periodic("1101001")
    plan = build_plan(OrbitInduced(z, greedy_table()), "10", z, 4, 10)
    reps = random_draws(plan, 300, seed=1)
    assert len(reps) == 300
    assert all(r["holds"] for r in reps)
    assert max(r["lhs"] for r in reps) > 0


def test_growth_slack_values():
    assert growth_slack(2, 305, 3) == Fraction(8, 305) + Fraction(1, 2)
    assert growth_slack(1, 10, 2) == Fraction(1, 4)


def test_growth_lambda_zero_is_equality():
    z = Periodic("0110")
    phi = OrbitInduced(z, greedy_table())
    plan = build_plan(phi, "10", z, 3, 4)
    rep = check_growth(plan, phi, 0, 3)
    assert rep["lhs"] == rep["rhs"] and rep["margin"] == "0" and rep["holds"]


def test_growth_level_three_constants():
    z = Periodic("1101001")
    phi = OrbitInduced(z, greedy_table())
    plan = build_plan(phi, "10", z, 3, 10)
    rep = check_growth(plan, phi, 1, 3, target=Fraction(2, 7))
    assert rep["N"] == 2 and rep["n_j"] == 305
    assert rep["slack_block_term"] == "1/2"
    assert Fraction(rep["margin"]) >= 0 and rep["holds"] and rep["exact"]
    assert rep["target_freq"] == "2/7"
    assert Fraction(rep["count_C_j"], 305) == Fraction(rep["freq_omega"])


def test_growth_margin_trend():
    z = Periodic("1101001")
    phi = OrbitInduced(z, greedy_table())
    plan = build_plan(phi, "10", z, 5, 10)
    reps = [check_growth(plan, phi, Fraction(1, 2), j) for j in range(2, 6)]
    slacks = [Fraction(r["slack"]) for r in reps]
    blocks = [Fraction(r["slack_block_term"]) for r in reps]
    assert all(r["holds"] for r in reps)
    assert slacks == sorted(slacks, reverse=True)
    assert all(b2 * 2 == b1 for b1, b2 in zip(blocks, blocks[1:]))


@pytest.mark.parametrize(
    "nu",
    [Bernoulli(Fraction(1, 2)), Bernoulli(Fraction(1, 5)), PeriodicMeasure("0110"),
     Markov([[Fraction(1, 3), Fraction(2, 3)], [Fraction(1, 2), Fraction(1, 2)]])],
    ids=repr,
)
@pytest.mark.parametrize("n", [3, 6, 9])
def test_psi_only_lyapunov_bound(nu, n):
    z = Periodic("1101001")
    plan = build_plan(OrbitInduced(z, greedy_table()), "10", z, 3, 10)
    psi = plan.psi()
    N = plan.N
    bound = N * cylinder_prob(nu, "10") + Fraction(2 * N * (N - 1), n)
    assert lyapunov_upper(psi, nu, n) <= bound


def test_psi_bounds_over_full_support():
    z = Periodic("1101001")
    plan = build_plan(OrbitInduced(z, greedy_table()), "101", z, 3, 10)
    psi = plan.psi()
    lo, hi = psi.structure().support
    rows = psi.rows(lo, hi - lo + 1)
    N = plan.N
    assert rows.zero.min() >= -N * N and rows.one.min() >= -N * N
    assert rows.zero.max() <= N and rows.one.max() <= N
