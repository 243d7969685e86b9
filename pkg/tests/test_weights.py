from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from shiftopt.symbolic import Periodic, Sturmian
from shiftopt.weights import (
    Combo,
    FiniteSet,
    OrbitInduced,
    PerturbationPlan,
    Psi,
    Tabular,
    build_plan,
    constant,
    plan_lengths,
    eval_weight,
    greedy_table,
    gurvits_weights,
    nomather_weights,
    psi_ell,
    weight_from_json,
)

small_rational = st.fractions(min_value=-3, max_value=3, max_denominator=6)
omegas = st.text(alphabet="01", min_size=1, max_size=4)


@st.composite
def tabular_weights(draw, span=6):
    d0, d1 = draw(small_rational), draw(small_rational)
    keys = draw(st.lists(st.tuples(st.integers(0, 1), st.integers(-span, span)), max_size=6, unique=True))
    over = {key: draw(small_rational) for key in keys}
    return Tabular(d0, d1, over), oracles.TableWeights(d0, d1, over)


def test_tabular_lookup():
    phi = Tabular(0, 0, {(1, 0): 1})
    assert eval_weight(phi, 1, 0) == 1
    assert eval_weight(phi, 1, 5) == 0
    assert phi.sup_norm() == 1


def test_orbit_induced_lookup():
    phi = OrbitInduced(Periodic("0"), greedy_table(1, 0))
    assert all(phi.eval(0, i) == 1 for i in range(-5, 5))
    assert all(phi.eval(1, i) == 0 for i in range(-5, 5))


def test_psi_example_values():
    psi = Psi("10", FiniteSet([0]))
    assert [psi.eval(1, 0), psi.eval(0, 0), psi.eval(0, 1), psi.eval(1, 1)] == [1, -2, 1, -2]
    assert psi.eval(0, 5) == psi.eval(1, 5) == 0


def test_psi_ell_single_symbol():
    phi = psi_ell("1", 3)
    assert phi.overrides == {3: (Fraction(-1), Fraction(1))}


@given(omegas, st.integers(-10, 10))
def test_psi_ell_value_range(omega, ell):
    N = len(omega)
    phi = psi_ell(omega, ell)
    vals = [phi.eval(a, i) for a in (0, 1) for i in range(ell - 2, ell + N + 2)]
    assert min(vals) >= -N and max(vals) <= 1


@pytest.mark.parametrize("omega", ["0", "1", "01", "11", "010", "110", "100"])
def test_psi_ell_window_sums_exhaustive(omega):
    N = len(omega)
    phi = psi_ell(omega, 0)
    for n in range(1, 6):
        for x in oracles.words(n):
            for k in range(-n - 1, N + 2):
                total = sum(phi.eval(int(c), k + i) for i, c in enumerate(x))
                assert -N * N <= total <= N


@given(omegas, st.lists(st.integers(-12, 12), max_size=10))
def test_psi_pointwise_bounds_and_sparsity(omega, members):
    N = len(omega)
    psi = Psi(omega, FiniteSet(members))
    for a in (0, 1):
        for i in range(-16, 17):
            v = psi.eval(a, i)
            assert v == oracles.psi_brute(omega, set(members), a, i)
            assert -N * N <= v <= N
            active = [ell for ell in set(members) if psi_ell(omega, ell).eval(a, i) != 0]
            assert len(active) <= N


@given(omegas, st.lists(st.integers(-12, 12), max_size=10), st.integers(-20, 5), st.integers(1, 30))
def test_psi_rows_match_eval(omega, members, lo, n):
    psi = Psi(omega, FiniteSet(members))
    rows = psi.rows(lo, n)
    assert rows.zero.tolist() == [psi.eval(0, i) for i in range(lo, lo + n)]
    assert rows.one.tolist() == [psi.eval(1, i) for i in range(lo, lo + n)]


@given(tabular_weights(), tabular_weights(), small_rational, small_rational)
def test_combo_is_pointwise_weighted_sum(p1, p2, l1, l2):
    (f1, _), (f2, _) = p1, p2
    combo = Combo([(l1, f1), (l2, f2)])
    for a in (0, 1):
        for i in range(-8, 9):
            assert combo.eval(a, i) == l1 * f1.eval(a, i) + l2 * f2.eval(a, i)
    rows = combo.rows(-8, 17)
    assert [rows.value(v) for v in rows.one.tolist()] == [combo.eval(1, i) for i in range(-8, 9)]


@given(tabular_weights())
def test_tabular_matches_oracle_and_bounds(pair):
    phi, ref = pair
    for a in (0, 1):
        lo, hi = phi.row_bounds(a)
        for i in range(-8, 9):
            assert phi.eval(a, i) == ref(a, i)
            assert lo <= phi.eval(a, i) <= hi
            assert abs(phi.eval(a, i)) <= phi.sup_norm()


def test_combo_sup_norm_is_an_upper_bound():
    f = Tabular(1, -2, {(0, 3): 5})
    g = OrbitInduced(Periodic("01"), {(0, 0): 1, (0, 1): 0, (1, 0): 0, (1, 1): 1})
    combo = f * Fraction(1, 2) + g * 3
    actual = max(abs(combo.eval(a, i)) for a in (0, 1) for i in range(-5, 10))
    assert actual <= combo.sup_norm() == Fraction(5, 2) + 3


def test_gurvits_and_nomather_tables():
    z = Periodic("01")
    g = gurvits_weights(z, 0.5)
    assert g.eval(0, 0) == pytest.approx(np.log(0.5))
    assert g.eval(1, 0) == 0
    h = nomather_weights(z)
    assert [h.eval(1, 1), h.eval(0, 0), h.eval(1, 0), h.eval(0, 1)] == [2, 1, 0, 0]


def test_greedy_gap():
    phi = OrbitInduced(Periodic("011"), greedy_table(Fraction(3, 2), Fraction(1, 2)))
    assert phi.greedy_gap() == 1


@given(tabular_weights())
def test_tabular_json_round_trip_is_exact(pair):
    phi, _ = pair
    back = weight_from_json(phi.to_json())
    assert back.to_json() == phi.to_json()
    assert all(back.eval(a, i) == phi.eval(a, i) for a in (0, 1) for i in range(-8, 9))


def test_weight_json_variants():
    for phi in (
        constant(Fraction(1, 3)),
        OrbitInduced(Periodic("01"), greedy_table()),
        Combo([(Fraction(1, 2), constant(1)), (2, Tabular(0, 1, {(0, 2): 3}))]),
        Psi("10", FiniteSet([0, 4])),
    ):
        back = weight_from_json(phi.to_json())
        assert [back.eval(a, i) for a in (0, 1) for i in range(-4, 8)] == [
            phi.eval(a, i) for a in (0, 1) for i in range(-4, 8)
        ]


def test_tabular_rejects_bad_symbol():
    with pytest.raises(ValueError):
        Tabular(0, 0, {(2, 0): 1})


def test_plan_lengths_example():
    assert plan_lengths(2, 3) == [2, 17, 305]


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_plan_lengths_match_linear_search(N):
    ns = plan_lengths(N, 4)
    assert ns == oracles.plan_lengths_linear(N, 4)
    for j in range(2, 5):
        assert Fraction(sum(ns[: j - 1]), ns[j - 1]) < Fraction(1, 2 ** (j + 1))
        assert not Fraction(sum(ns[: j - 1]), ns[j - 1] - 1) < Fraction(1, 2 ** (j + 1))


def _check_plan_sets(plan):
    assert plan.check_invariants() == []
    seen = set()
    for j in range(1, plan.J + 1):
        B = set(plan.B(j).tolist())
        A = set(plan.A_level(j).tolist())
        C = set(plan.C(j).tolist())
        assert not (B & seen)
        assert A <= B
        assert A == C - seen
        seen |= B
    assert plan.n[0] == plan.N


@st.composite
def plan_inputs(draw):
    omega = draw(st.text("01", min_size=1, max_size=3))
    body = draw(st.text("01", min_size=1, max_size=6))
    # make sure omega occurs in z
    z = Periodic(omega + body)
    table = {(a, b): draw(st.fractions(-2, 2, max_denominator=4)) for a in (0, 1) for b in (0, 1)}
    return omega, z, table, draw(st.integers(0, 8))


@settings(max_examples=100)
@given(plan_inputs())
def test_plan_invariants_random(inputs):
    omega, z, table, k_search = inputs
    phi = OrbitInduced(z, table)
    plan = build_plan(phi, omega, z, 3, k_search)
    _check_plan_sets(plan)
    for j in range(1, plan.J + 1):
        a, b = plan.block_range(j)
        assert -k_search <= a <= k_search
        assert b - a == plan.n[j - 1] - plan.N


def test_plan_with_periodic_omega_hits_every_period():
    plan = build_plan(constant(0), "01", Periodic("01"), 2, 0)
    k = plan.k[0]
    C = plan.C(2).tolist()
    a, b = plan.block_range(2)
    assert C == list(range(a, b + 1, 2))
    assert all((ell - k) % 2 == 0 for ell in C)


def test_plan_membership_matches_sets():
    plan = build_plan(constant(0), "10", Periodic("1101001"), 3, 5)
    A = set()
    for j in range(1, plan.J + 1):
        A |= set(plan.A_level(j).tolist())
    hull = plan.hull()
    for ell in range(hull[0] - 3, hull[1] + 4):
        assert (ell in plan) == (ell in A)
    assert set(plan.members(hull[0], hull[1]).tolist()) == A


def test_plan_json_round_trip():
    plan = build_plan(constant(0), "10", Periodic("1101001"), 3, 5)
    back = PerturbationPlan.from_json(plan.to_json())
    assert back.to_json() == plan.to_json()


def test_build_plan_requires_occurrence():
    with pytest.raises(ValueError):
        build_plan(constant(0), "11", Periodic("0"), 2, 3)


def test_build_plan_records_window_average():
    z = Sturmian()
    phi = gurvits_weights(z, 0.5)
    plan = build_plan(phi, "1", z, 3, 10)
    for lv in plan.levels:
        assert lv.window_average <= 1e-12
