"""Quick exact-oracle checks covering every module.

Each check is a small computation whose expected result is known in
closed form.  :func:`run_selftest` returns a deterministic report.
"""
from __future__ import annotations

import math
from fractions import Fraction as F

from .cocycle import log_norm, periodic_log_spectral_radius, window_sum
from .dbar import dbar_lp_lower, dbar_periodic_exact, dbar_upper_product, matching_distance
from .experiments import run_tech_strictly_sweep
from .jsr import jsr_lower, jsr_upper
from .lyapunov import lyapunov_periodic_exact, lyapunov_upper
from .measures import Bernoulli, PeriodicMeasure, SturmianMeasure, cylinder_prob
from .perturb import check_growth, check_upper_inequality
from .symbolic import (
    FactorSet,
    Periodic,
    PeriodicOrbit,
    Sturmian,
    block_sequence,
    mismatch_density,
    window,
)
from .weights import (
    FiniteSet,
    OrbitInduced,
    Psi,
    Tabular,
    build_plan,
    constant,
    plan_lengths,
    greedy_table,
    psi_ell,
)

__all__ = ["run_selftest", "CHECKS"]


def _greedy(word):
    return OrbitInduced(Periodic(word), greedy_table(1, 0))


def _checks():
    yield "window periodic", lambda: str(window(Periodic("01"), 0, 3)) == "0101"
    yield "window sturmian", lambda: str(window(Sturmian(), 0, 2)) == "101"
    yield "mismatch density", lambda: mismatch_density("0011", "0101") == F(1, 2)
    yield "block recursion", lambda: str(block_sequence("0", "1", [2, 2], 2).block(2)) == "001001110"
    yield "tabular eval", lambda: Tabular(0, 0, {(1, 0): 1}).eval(1, 0) == 1
    yield "psi eval", lambda: [Psi("10", FiniteSet([0])).eval(a, i) for a, i in ((1, 0), (0, 0), (0, 1), (1, 1))] == [
        1, -2, 1, -2]
    yield "psi_ell", lambda: psi_ell("1", 3).overrides == {3: (F(-1), F(1))}
    yield "plan lengths", lambda: plan_lengths(2, 3) == [2, 17, 305]
    yield "window sum", lambda: window_sum(Tabular(0, 0, {(1, 0): 1}), "11", 0) == 1
    yield "log_norm constant", lambda: log_norm(constant(F(3, 2)), "0110", 2).upper == 6
    yield "log_norm periodic", lambda: log_norm(_greedy("0"), "01", 0).upper == 1
    yield "spectral radius", lambda: periodic_log_spectral_radius(_greedy("01"), "01", 4, 2).lower == 2
    yield "jsr_upper greedy", lambda: jsr_upper(_greedy("0"), 7) == 1
    yield "jsr_upper b&b", lambda: jsr_upper(_greedy("011"), 9, method="branch_and_bound") == 1
    yield "jsr_lower", lambda: jsr_lower(_greedy("01"), ["0", "1", "01", "0011"]) == 1
    yield "lyapunov exact", lambda: lyapunov_periodic_exact(_greedy("0"), "01") == F(1, 2)
    yield "lyapunov upper", lambda: lyapunov_upper(_greedy("0"), Bernoulli(F(1, 2)), 1) == F(1, 2)
    yield "cylinder periodic", lambda: cylinder_prob(PeriodicMeasure("01"), "0") == F(1, 2)
    yield "cylinder sturmian", lambda: abs(cylinder_prob(SturmianMeasure(), "11") - (math.sqrt(5) - 2) / 2) < 1e-12
    yield "dbar periodic", lambda: (dbar_periodic_exact("01", "0"), dbar_periodic_exact("001", "011")) == (
        F(1, 2), F(1, 3))
    yield "dbar lp", lambda: dbar_lp_lower(PeriodicMeasure("01"), PeriodicMeasure("0"), 2) == F(1, 2)
    yield "dbar product", lambda: dbar_upper_product(Bernoulli(F(1, 2)), Bernoulli(F(1, 2))) == F(1, 2)
    yield "matching periodic", lambda: matching_distance("010101", PeriodicOrbit("0")) == F(1, 2)
    yield "matching dp", lambda: matching_distance("0110", FactorSet(2, ["00", "01", "10"])) == F(1, 4)
    yield "upper inequality", lambda: check_upper_inequality(Psi("10", FiniteSet([0, 5])), "1010101", 0)["holds"]
    yield "growth at lambda 0", lambda: _growth_zero()
    yield "exact formula", lambda: run_tech_strictly_sweep(4, 4)["all_equal"]


def _growth_zero() -> bool:
    z = Periodic("0110")
    phi = _greedy("0110")
    plan = build_plan(phi, "10", z, 3, 4)
    rep = check_growth(plan, phi, 0, 3)
    return rep["lhs"] == rep["rhs"] and rep["holds"]


CHECKS = [name for name, _ in _checks()]


def run_selftest() -> dict:
    results = []
    for name, fn in _checks():
        try:
            ok = bool(fn())
            err = None
        except Exception as exc:  # report, do not crash the suite
            ok, err = False, f"{type(exc).__name__}: {exc}"
        row = {"name": name, "passed": ok}
        if err:
            row["error"] = err
        results.append(row)
    return {
        "selftest": True,
        "checks": len(results),
        "failed": sum(not r["passed"] for r in results),
        "passed": all(r["passed"] for r in results),
        "table": results,
    }
