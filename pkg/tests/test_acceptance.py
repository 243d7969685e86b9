"""Acceptance criteria, one test each.  Every test prints a single
``[PASS]``/``[FAIL]`` line with the measured quantities."""
import io
import json
import math
import time
from contextlib import redirect_stdout
from fractions import Fraction

import numpy as np
import pytest

import oracles
from shiftopt.cli import main
from shiftopt.dbar import dbar_lp_lower, dbar_periodic_exact, matching_distance
from shiftopt.experiments import run_gurvits, run_nomather, run_tech_strictly_sweep
from shiftopt.jsr import jsr_upper
from shiftopt.lyapunov import lyapunov_periodic_exact
from shiftopt.measures import PeriodicMeasure
from shiftopt.perturb import check_growth, random_draws
from shiftopt.symbolic import Periodic, PeriodicOrbit, Sturmian, lyndon_words, necklaces
from shiftopt.weights import Combo, OrbitInduced, Tabular, build_plan, greedy_table


@pytest.fixture
def verdict(capsys):
    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        assert ok, detail

    return emit


def test_criterion_1_gurvits_gap(verdict):
    t0 = time.perf_counter()
    rep = run_gurvits(alpha=0.5, n=10_000, max_word_len=10, workers=1)
    elapsed = time.perf_counter() - t0
    half_log = 0.5 * math.log(0.5)
    greedy, best, fib = rep["jsr_lower_estimate"], rep["best_word_rate"], rep["fibonacci_best_rate"]
    ok = greedy >= -0.01 and best <= half_log + 0.05 and fib >= half_log - 0.10 and elapsed <= 120
    verdict(1, ok, f"greedy rate {greedy:.3g} >= -0.01; best periodic rate {best:.4f} <= {half_log + 0.05:.4f}; "
                   f"Fibonacci best {fib:.4f} >= {half_log - 0.10:.4f}; {elapsed:.1f}s <= 120s")


def test_criterion_2_exact_formula(verdict):
    t0 = time.perf_counter()
    rep = run_tech_strictly_sweep(7, 7, workers=1)
    elapsed = time.perf_counter() - t0
    ok = rep["mismatches"] == 0 and rep["pairs"] > 0 and elapsed <= 60
    verdict(2, ok, f"{rep['pairs']} (z, mu) pairs, {rep['mismatches']} mismatches (zero tolerance); "
                   f"{elapsed:.1f}s <= 60s")


def test_criterion_3_dbar_oracles(verdict):
    reps = [w for p in range(1, 6) for w in necklaces(p)]
    bad_exact = sum(
        dbar_periodic_exact(u, v) != oracles.phase_joinings_dbar(str(u), str(v)) for u in reps for v in reps
    )
    prims = [w for p in range(1, 5) for w in lyndon_words(p)]
    bad_mono = bad_lcm = 0
    for u in prims:
        for v in prims:
            L = len(u) * len(v) // math.gcd(len(u), len(v))
            vals = [dbar_lp_lower(PeriodicMeasure(u), PeriodicMeasure(v), ell) for ell in range(1, L + 1)]
            bad_mono += any(b < a for a, b in zip(vals, vals[1:]))
            bad_lcm += vals[-1] != dbar_periodic_exact(u, v)
    ok = bad_exact == 0 and bad_mono == 0 and bad_lcm == 0
    verdict(3, ok, f"{len(reps) ** 2} orbit pairs (periods <= 5) vs phase-joining oracle: {bad_exact} mismatches; "
                   f"{len(prims) ** 2} LP pairs (periods <= 4): {bad_mono} non-monotone, {bad_lcm} differ at L = lcm")


def _random_tabular(rng):
    def q():
        return Fraction(int(rng.integers(-12, 13)), int(rng.integers(1, 5)))

    d0, d1 = q(), q()
    over = {(int(rng.integers(0, 2)), int(rng.integers(-6, 7))): q() for _ in range(int(rng.integers(0, 7)))}
    return Tabular(d0, d1, over), oracles.TableWeights(d0, d1, over)


def _random_periodic(rng):
    z = "".join(map(str, rng.integers(0, 2, int(rng.integers(1, 5)))))
    table = {(a, b): Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 4))) for a in (0, 1) for b in (0, 1)}
    return OrbitInduced(Periodic(z), table)


def test_criterion_4_property_suites(verdict):
    rng = np.random.default_rng(20240)
    lip_bad = checks = oracle_bad = 0
    for trial in range(200):
        (f1, r1), (f2, r2) = _random_tabular(rng), _random_tabular(rng)
        dist = r1.sup_distance(r2)
        for n in range(1, 13):
            checks += 1
            lip_bad += abs(jsr_upper(f1, n) - jsr_upper(f2, n)) > dist
        if trial < 20:
            n = int(rng.integers(1, 7))
            oracle_bad += jsr_upper(f1, n) != oracles.table_jsr(r1, n)
    sub_bad = sub_checks = 0
    words = [w for p in range(1, 7) for w in lyndon_words(p)]
    for _ in range(200):
        g1, g2 = _random_periodic(rng), _random_periodic(rng)
        both = Combo([(1, g1), (1, g2)])
        for w in words[:: 3]:
            sub_checks += 1
            sub_bad += lyapunov_periodic_exact(both, w) > lyapunov_periodic_exact(g1, w) + lyapunov_periodic_exact(g2, w)
    ok = lip_bad == 0 and sub_bad == 0 and oracle_bad == 0
    verdict(4, ok, f"Lipschitz: {lip_bad}/{checks} violations over 200 weight pairs, n <= 12 "
                   f"(brute-force jsr spot checks: {oracle_bad} mismatches); "
                   f"subadditivity: {sub_bad}/{sub_checks} violations")


def _plan_set_violations(plan, max_set_level=4):
    """Interval invariants at every level; explicit set comparisons up to
    ``max_set_level`` (deeper levels hold ~10^8 indices), counts beyond."""
    bad = list(plan.check_invariants())
    seen = set()
    for j in range(max_set_level + 1, plan.J + 1):
        if plan.count_A(j) > plan.count_C(j):
            bad.append(f"|A_{j}| > |C_{j}|")
    for j in range(1, min(plan.J, max_set_level) + 1):
        B, A, C = (set(s(j).tolist()) for s in (plan.B, plan.A_level, plan.C))
        if B & seen:
            bad.append(f"B_{j} not disjoint")
        if not A <= B or A != C - seen:
            bad.append(f"A_{j} malformed")
        seen |= B
    return bad


def test_criterion_5_perturbation(verdict):
    cases = [("1", "10010"), ("10", "1101001"), ("011", "0110100"), ("1001", "10010111")]
    draws, violations, plan_bad = 0, 0, []
    for i, (omega, zword) in enumerate(cases):
        z = Periodic(zword)
        plan = build_plan(OrbitInduced(z, greedy_table()), omega, z, 4, 12)
        plan_bad += _plan_set_violations(plan)
        reps = random_draws(plan, 250, seed=i, max_n=200)
        draws += len(reps)
        violations += sum(not r["holds"] for r in reps)

    z = Periodic("1101001")
    phi = OrbitInduced(z, greedy_table())
    plan = build_plan(phi, "10", z, 6, 20)
    plan_bad += _plan_set_violations(plan)
    growth = [check_growth(plan, phi, 1, j) for j in range(2, 7)]
    margins = [Fraction(g["margin"]) for g in growth]
    slacks = [Fraction(g["slack"]) for g in growth]
    blocks = [Fraction(g["slack_block_term"]) for g in growth]
    halving = all(b == Fraction(plan.N**2, 2**j) for b, j in zip(blocks, range(2, 7)))
    decreasing = all(b < a for a, b in zip(slacks, slacks[1:]))
    ok = violations == 0 and draws == 1000 and not plan_bad and min(margins) >= 0 and halving and decreasing
    verdict(5, ok, f"{violations}/{draws} inequality violations (N = 1..4); plan invariant issues: {plan_bad or 'none'}; "
                   f"growth margins j=2..6 min {float(min(margins)):.4f} >= 0; "
                   f"slack {[round(float(s), 4) for s in slacks]} with block term N^2/2^j")


def test_criterion_6_subordination_failure(verdict):
    rep = run_nomather(j=3)
    target = rep["target_one_plus_f1"]
    est2 = rep["lambda_mu2_estimate"]
    ok = (
        est2["upper"] < target - 0.1
        and abs(rep["greedy_rate"] - target) <= 0.05
        and rep["frequency_gap"] >= 0.5
    )
    verdict(6, ok, f"Lambda(mu2) estimate {est2['mean']:.4f} (+3SE {est2['upper']:.4f}) < 1 + f1 - 0.1 = "
                   f"{target - 0.1:.4f}; greedy {rep['greedy_rate']:.5f} vs 1 + f1 = {target:.5f}; "
                   f"f1 - f2 = {rep['frequency_gap']:.4f} >= 0.5")


def test_criterion_7_sturmian_separation(verdict):
    z = Sturmian()
    orbits = [w for p in range(1, 7) for w in lyndon_words(p)]
    worst = None
    for start in (0, 12345, -987654):
        x = z.array(start, 10_000)
        for w in orbits:
            d = matching_distance(x, PeriodicOrbit(w))
            worst = d if worst is None or d < worst else worst
    ok = worst >= Fraction(45, 100)
    verdict(7, ok, f"min matching distance over {len(orbits)} orbits (period <= 6), 3 windows of 10^4: "
                   f"{float(worst):.4f} >= 0.45")


def _cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def test_criterion_8_determinism(verdict):
    commands = [
        ["selftest"],
        ["experiment", "gurvits"],
        ["experiment", "tech-strictly"],
        ["experiment", "nomather", "--seed", "7"],
    ]
    unstable = []
    for argv in commands:
        outs = set()
        for threads in ("1", "1", "2", "4"):
            code, out = _cli(argv + ["--threads", threads])
            assert code == 0
            json.loads(out)
            outs.add(out)
        if len(outs) != 1:
            unstable.append(" ".join(argv))
    verdict(8, not unstable, f"{len(commands)} commands x 4 runs (threads 1, 1, 2, 4): "
                             f"{'byte-identical' if not unstable else 'differs: ' + ', '.join(unstable)}")
