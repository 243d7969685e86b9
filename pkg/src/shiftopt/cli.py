"""Command-line front end: ``shiftopt <subcommand> [options]``.

Every subcommand prints one report (JSON by default).  Exit status is 0 on
success, 2 on invalid input and 3 when an internal invariant fails.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .cocycle import as_symbols, log_norm
from .dbar import CouplingLP, dbar_periodic_exact, dbar_upper_product, matching_distance
from .experiments import run_gurvits, run_nomather, run_tech_strictly, run_tech_strictly_sweep
from .jsr import jsr_lower, jsr_upper
from .lyapunov import lyapunov_envelope_upper, lyapunov_mc, lyapunov_periodic_exact, lyapunov_upper
from .measures import PeriodicMeasure
from .perturb import check_growth, random_draws
from .reporting import dumps, to_csv, to_text
from .selftest import run_selftest
from .simplex import InfeasibleLP
from .symbolic import GOLDEN, Word, lyndon_words, sequence_from_json
from .validation import check_measure, check_subshift, check_weights
from .weights import build_plan

__all__ = ["main", "InvariantViolation"]


class InvariantViolation(RuntimeError):
    """An internal consistency check failed; maps to exit status 3."""


class InputError(ValueError):
    pass


def _json_arg(value):
    """Inline JSON text or a path to a JSON file."""
    if value is None:
        return None
    if not isinstance(value, str):
        return value
    text = value.strip()
    if text[:1] in "{[\"" or text in ("true", "false", "null") or text[:1].isdigit() or text[:1] == "-":
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON argument: {exc}") from None
    if os.path.exists(value):
        with open(value, encoding="utf-8") as fh:
            try:
                return json.load(fh)
            except json.JSONDecodeError as exc:
                raise InputError(f"malformed JSON in {value}: {exc}") from None
    raise InputError(f"argument is neither JSON nor an existing file: {value!r}")


class Params:
    """Flag values with fallback to the ``--input`` document."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.doc = {}
        if getattr(args, "input", None):
            doc = _json_arg(args.input)
            if not isinstance(doc, dict):
                raise InputError("--input must hold a JSON object")
            self.doc = {k.replace("-", "_"): v for k, v in doc.items()}

    def get(self, name: str, default=None):
        value = getattr(self.args, name, None)
        if value is not None:
            return value
        return self.doc.get(name, default)

    def json(self, name: str, required: bool = True):
        value = self.get(name)
        if value is None:
            if required:
                raise InputError(f"missing required parameter --{name.replace('_', '-')}")
            return None
        return _json_arg(value) if isinstance(value, str) else value

    def int(self, name: str, default=None) -> Optional[int]:
        value = self.get(name, default)
        if value is None:
            return None
        try:
            return int(value)
        except (TypeError, ValueError):
            raise InputError(f"--{name.replace('_', '-')} must be an integer") from None


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError("THREADS must be an integer") from None
    return os.cpu_count() or 1


def _precision(args) -> str:
    return args.precision or "auto"


def _word_input(p: Params):
    """A word from ``--word`` or from ``--x`` (sequence JSON) with ``--offset``/``--n``."""
    word = p.get("word")
    if word is not None:
        return as_symbols(str(word))
    seq_doc = p.json("x", required=False)
    if seq_doc is None:
        raise InputError("give --word or --x with --n")
    n = p.int("n")
    if n is None:
        raise InputError("--x requires --n")
    return sequence_from_json(seq_doc).array(p.int("offset", 0), n)


# ---------------------------------------------------------------------------
# subcommands


def cmd_norm(p: Params, args) -> dict:
    phi = check_weights(p.json("weights"), _precision(args))
    x = _word_input(p)
    b = log_norm(phi, x, p.int("k_window", 0), p.int("k_center", 0))
    return {"command": "norm", "n": len(x), "bounds": b, "rate_lower": b.lower / len(x)}


def cmd_jsr(p: Params, args) -> dict:
    phi = check_weights(p.json("weights"), _precision(args))
    n = p.int("n", 12)
    k_window = p.int("k_window")
    up = jsr_upper(phi, n, k_window, p.get("method", "exchange"), report=True)
    cands = p.get("candidates")
    if cands is None:
        max_len = p.int("max_candidate_len", min(n, 8))
        words = [w for L in range(1, max_len + 1) for w in lyndon_words(L)]
    else:
        cands = _json_arg(cands) if isinstance(cands, str) and cands[:1] == "[" else cands
        words = [Word(w) for w in (cands.split(",") if isinstance(cands, str) else cands)]
    low = jsr_lower(phi, words, p.int("m", 1), k_window or 0, report=True)
    if up["certified"] and low["certified"] and low["value"] > up["value"]:
        raise InvariantViolation(f"jsr lower {low['value']} exceeds upper {up['value']}")
    return {
        "command": "jsr",
        "n": n,
        "upper": up["value"],
        "upper_certified": up["certified"],
        "lower": low["value"],
        "lower_certified": low["certified"],
        "lower_word": low["word"],
        "method": up["method"],
    }


def cmd_lyapunov(p: Params, args) -> dict:
    phi = check_weights(p.json("weights"), _precision(args))
    mode = p.get("mode", "upper")
    out = {"command": "lyapunov", "mode": mode}
    if mode == "exact":
        word = p.get("word")
        if word is None:
            mu = check_measure(p.json("measure"), _precision(args))
            if not isinstance(mu, PeriodicMeasure):
                raise InputError("exact mode needs --word or a periodic_orbit measure")
            word = str(mu.word)
        out["value"] = lyapunov_periodic_exact(phi, word)
        out["word"] = str(word)
        return out
    mu = check_measure(p.json("measure"), _precision(args))
    if mode == "upper":
        ns = p.get("n", 8)
        ns = ns if isinstance(ns, list) else [int(ns)]
        rows = [lyapunov_upper(phi, mu, int(n), p.int("k_window"), report=True) for n in ns]
        out["table"] = rows
        out["value"] = min(r["value"] for r in rows)
        out["certified"] = all(r["certified"] for r in rows)
        # last three n values let the caller judge stabilization
        out["last"] = rows[-3:]
        return out
    if mode == "envelope":
        out["value"] = lyapunov_envelope_upper(phi, mu)
        return out
    if mode == "mc":
        b = lyapunov_mc(phi, mu, p.int("n", 1000), p.int("samples", 100), p.int("k_window", 0), args.seed,
                        p.int("k_center", 0), workers=_threads(args))
        out["estimate"] = b
        return out
    raise InputError(f"unknown lyapunov mode {mode!r}")


def cmd_dbar(p: Params, args) -> dict:
    mu = check_measure(p.json("mu"), _precision(args))
    nu = check_measure(p.json("nu"), _precision(args))
    mode = p.get("mode", "all")
    out = {"command": "dbar", "mode": mode}
    if mode in ("all", "periodic"):
        if isinstance(mu, PeriodicMeasure) and isinstance(nu, PeriodicMeasure):
            out["periodic_exact"] = dbar_periodic_exact(mu.word, nu.word)
        elif mode == "periodic":
            raise InputError("periodic mode needs two periodic_orbit measures")
    if mode in ("all", "product"):
        out["product_upper"] = dbar_upper_product(mu, nu)
    if mode in ("all", "lp"):
        L = p.int("L", 2)
        lp = CouplingLP(mu, nu, L)
        try:
            out["lp_lower"] = lp.solve().value
        except InfeasibleLP as exc:
            raise InvariantViolation(str(exc)) from None
        out["L"] = L
        if p.get("show_lp"):
            out["lp_text"] = lp.to_text()
    if "periodic_exact" in out and "lp_lower" in out and out["lp_lower"] > out["periodic_exact"] + (
        0 if lp.exact else 1e-9
    ):
        raise InvariantViolation("LP lower bound exceeds the exact distance")
    return out


def cmd_match(p: Params, args) -> dict:
    x = _word_input(p)
    Z = check_subshift(p.json("subshift"))
    kind = p.get("kind", "dp")
    return {"command": "match", "n": len(x), "kind": kind, "distance": matching_distance(x, Z, kind)}


def cmd_perturb(p: Params, args) -> dict:
    phi = check_weights(p.json("weights"), _precision(args))
    z = sequence_from_json(p.json("z"))
    omega = Word(str(p.get("omega", "10")))
    J = p.int("J", 4)
    plan = build_plan(phi, omega, z, J, p.int("k_search", 16))
    bad = plan.check_invariants()
    draws = random_draws(plan, p.int("draws", 1000), args.seed, p.int("max_n", 200))
    violations = [d for d in draws if not d["holds"]]
    lam = p.get("lambda", "1")
    levels = p.get("levels") or list(range(2, J + 1))
    growth = [check_growth(plan, phi, lam, int(j)) for j in levels]
    report = {
        "command": "perturb",
        "plan": plan.to_json(),
        "plan_invariants": bad,
        "upper_inequality": {"draws": len(draws), "violations": len(violations), "max_lhs": max(d["lhs"] for d in draws)},
        "growth": growth,
        "table": [{k: g[k] for k in ("j", "n_j", "k_j", "count_A_j", "count_C_j", "slack", "margin", "holds")}
                  for g in growth],
    }
    if bad or violations or not all(g["holds"] for g in growth):
        raise InvariantViolation(json.dumps({"plan": bad, "draws": len(violations)}))
    return report


def cmd_experiment(p: Params, args) -> dict:
    name = args.name
    workers = _threads(args)
    if name == "gurvits":
        return run_gurvits(
            p.get("gamma", GOLDEN),
            float(p.get("alpha", 0.5)),
            p.int("n", 10_000),
            p.int("max_word_len", 10),
            p.int("m"),
            p.int("k_window"),
            workers,
        )
    if name == "tech-strictly":
        z = p.get("z")
        if z is not None:
            rep = run_tech_strictly(str(z), p.int("test_periods", 7))
        else:
            rep = run_tech_strictly_sweep(p.int("max_z_period", 7), p.int("test_periods", 7), workers)
        if not rep["all_equal"]:
            raise InvariantViolation(f"exact formula failed on {rep['mismatches']} pairs")
        return rep
    if name == "nomather":
        exps = p.get("exponents")
        if isinstance(exps, str):
            exps = _json_arg(exps) if exps.startswith("[") else [int(e) for e in exps.split(",")]
        return run_nomather(
            exps,
            p.int("j", 3),
            p.int("n", 100_000),
            p.int("mc_length", 2000),
            p.int("samples", 64),
            p.int("k_window", 64),
            args.seed,
            workers,
        )
    raise InputError(f"unknown experiment {name!r}")


def cmd_selftest(p: Params, args) -> dict:
    rep = run_selftest()
    if not rep["passed"]:
        raise InvariantViolation(f"{rep['failed']} selftest checks failed:\n" + to_text(rep))
    return rep


# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON object (inline or file) supplying any parameter")
    common.add_argument("--seed", type=int, default=0, help="seed for every random draw")
    common.add_argument("--precision", choices=("auto", "rational", "float"), default=None)
    common.add_argument("--threads", type=int, default=None, help="worker count (default: THREADS or CPU count)")
    common.add_argument("--format", choices=("json", "text", "csv"), default="json")
    common.add_argument("--csv", action="store_true", help="shorthand for --format csv")

    parser = argparse.ArgumentParser(prog="shiftopt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, fn, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=fn)
        return sp

    sp = add("norm", cmd_norm, "bounds on log ||L_x|| for one word")
    sp.add_argument("--weights")
    sp.add_argument("--word")
    sp.add_argument("--x", help="sequence JSON to read the word from")
    sp.add_argument("--offset", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--k-window", dest="k_window", type=int)
    sp.add_argument("--k-center", dest="k_center", type=int)

    sp = add("jsr", cmd_jsr, "upper and lower bounds on log rho")
    sp.add_argument("--weights")
    sp.add_argument("--n", type=int)
    sp.add_argument("--k-window", dest="k_window", type=int)
    sp.add_argument("--method", choices=("exchange", "branch_and_bound", "exhaustive"))
    sp.add_argument("--candidates", help="comma-separated words or a JSON list")
    sp.add_argument("--max-candidate-len", dest="max_candidate_len", type=int)
    sp.add_argument("--m", type=int)

    sp = add("lyapunov", cmd_lyapunov, "Lyapunov exponent of a measure")
    sp.add_argument("--weights")
    sp.add_argument("--measure")
    sp.add_argument("--mode", choices=("exact", "upper", "mc", "envelope"))
    sp.add_argument("--word")
    sp.add_argument("--n", type=int)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--k-window", dest="k_window", type=int)
    sp.add_argument("--k-center", dest="k_center", type=int)

    sp = add("dbar", cmd_dbar, "d-bar distance bounds between two measures")
    sp.add_argument("--mu")
    sp.add_argument("--nu")
    sp.add_argument("--L", type=int)
    sp.add_argument("--mode", choices=("all", "periodic", "lp", "product"))
    sp.add_argument("--show-lp", dest="show_lp", action="store_true", default=None)

    sp = add("match", cmd_match, "matching distance of a word from a subshift")
    sp.add_argument("--word")
    sp.add_argument("--x")
    sp.add_argument("--offset", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--subshift")
    sp.add_argument("--kind", choices=("dp", "exact"))

    sp = add("perturb", cmd_perturb, "build a perturbation plan and check its guarantees")
    sp.add_argument("--weights")
    sp.add_argument("--z")
    sp.add_argument("--omega")
    sp.add_argument("--J", type=int)
    sp.add_argument("--k-search", dest="k_search", type=int)
    sp.add_argument("--lambda", dest="lambda", help="perturbation size (rational string or float)")
    sp.add_argument("--draws", type=int)
    sp.add_argument("--max-n", dest="max_n", type=int)
    sp.add_argument("--levels", type=int, nargs="+")

    sp = add("experiment", cmd_experiment, "run a named construction")
    sp.add_argument("name", choices=("gurvits", "tech-strictly", "nomather"))
    sp.add_argument("--gamma")
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--n", type=int)
    sp.add_argument("--max-word-len", dest="max_word_len", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--k-window", dest="k_window", type=int)
    sp.add_argument("--z")
    sp.add_argument("--test-periods", dest="test_periods", type=int)
    sp.add_argument("--max-z-period", dest="max_z_period", type=int)
    sp.add_argument("--exponents")
    sp.add_argument("--j", type=int)
    sp.add_argument("--mc-length", dest="mc_length", type=int)
    sp.add_argument("--samples", type=int)

    add("selftest", cmd_selftest, "run the exact-oracle checks")
    return parser


def _render(report: dict, args) -> str:
    fmt = "csv" if args.csv else args.format
    if fmt == "csv":
        return to_csv(report)
    if fmt == "text":
        return to_text(report)
    return dumps(report)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        params = Params(args)
        report = args.func(params, args)
        sys.stdout.write(_render(report, args))
        return 0
    except InvariantViolation as exc:
        print(f"shiftopt: invariant violated: {exc}", file=sys.stderr)
        return 3
    except (InputError, ValueError, TypeError, KeyError, ArithmeticError) as exc:
        print(f"shiftopt: invalid input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
