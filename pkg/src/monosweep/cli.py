"""Command-line front end: single-point evaluation, parameter sweeps,
monodromy inspection, normal-form checks and the verification suites.

Native parameter space is the scaled triple (eps0, eps1, v) = pi*T*(E0, E1,
V0); raw constants are accepted via --E0/--E1/--V0 with --T.  Exit codes:
0 success, 1 usage or parameter error, 2 tolerance breach.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from ._backend import COMPILED
from .errors import MonosweepError
from .models import MultiLevelParams, TwoLevelParams
from .monodromy import (
    extremal_probabilities_scaled,
    global_monodromy,
    hypergeometric_params,
    numeric_monodromy,
    phase_factor,
    transition_probability_scaled,
)
from .okubo import build_okubo, lambda_independence_check, okubo_residual
from .propagator import propagate
from .verify import SUITES, all_passed, run_suites


class _Parser(argparse.ArgumentParser):
    # Usage errors must exit 1, not argparse's default 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _workers() -> int:
    env = os.environ.get("MONODROMY_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise SystemExit(1)
    return os.cpu_count() or 1


def _read_config(path: str) -> dict:
    values: dict[str, float] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {raw.rstrip()}")
            key, val = (part.strip() for part in line.split("=", 1))
            values[key] = float(val)
    return values


def _resolve(args, config, key, default=None):
    val = getattr(args, key, None)
    if val is not None:
        return val
    if key in config:
        return config[key]
    return default


def _scaled_from_args(args, config):
    """(eps0, eps1, v, T) from scaled or raw flags; raw needs T."""
    raw = [_resolve(args, config, k) for k in ("E0", "E1", "V0")]
    if any(r is not None for r in raw):
        T = _resolve(args, config, "T")
        if T is None:
            raise ValueError("raw constants need --T")
        e0, e1, v0 = (r if r is not None else 0.0 for r in raw)
        return math.pi * T * e0, math.pi * T * e1, math.pi * T * v0, T
    eps0 = _resolve(args, config, "eps0", 0.0)
    eps1 = _resolve(args, config, "eps1", 0.0)
    v = _resolve(args, config, "v", 0.0)
    return eps0, eps1, v, _resolve(args, config, "T", 1.0)


def _add_param_flags(p: argparse.ArgumentParser):
    p.add_argument("--eps0", type=float, help="scaled sech pulse area pi*T*E0")
    p.add_argument("--eps1", type=float, help="scaled sweep amplitude pi*T*E1")
    p.add_argument("--v", type=float, help="scaled coupling pi*T*V0")
    p.add_argument("--E0", type=float, help="raw sech amplitude (needs --T)")
    p.add_argument("--E1", type=float, help="raw sweep amplitude (needs --T)")
    p.add_argument("--V0", type=float, help="raw coupling (needs --T)")
    p.add_argument("--T", type=float, help="sweep time scale")
    p.add_argument("--config", help="flat key=value file; flags take precedence")


def _cmd_prob(args) -> int:
    config = _read_config(args.config) if args.config else {}
    eps0, eps1, v, T = _scaled_from_args(args, config)
    p_analytic = transition_probability_scaled(eps0, eps1, v)
    pmin, pmax = extremal_probabilities_scaled(eps1, v)

    out = {
        "eps0": eps0, "eps1": eps1, "v": v,
        "P_analytic": p_analytic, "P_min": pmin, "P_max": pmax,
    }
    code = 0
    if args.oracle:
        res = propagate(TwoLevelParams.from_scaled(eps0, eps1, v, T))
        out["P_numeric"] = res.probability
        out["abs_diff"] = abs(p_analytic - res.probability)
        if out["abs_diff"] > args.tol:
            code = 2

    if args.json:
        print(json.dumps(out))
    else:
        print(f"P_analytic = {_fmt(p_analytic)}")
        if args.oracle:
            print(f"P_numeric  = {_fmt(out['P_numeric'])}")
            print(f"abs_diff   = {_fmt(out['abs_diff'])}  (tol {args.tol:g})")
        print(f"P_min      = {_fmt(pmin)}")
        print(f"P_max      = {_fmt(pmax)}")
    return code


def _sweep_rows(args, config):
    lo, hi, steps = args.lo, args.hi, args.steps
    if steps < 2 or not lo < hi:
        raise ValueError("need steps >= 2 and lo < hi")
    grid = [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]
    v_list = args.v if args.v else [_resolve(args, config, "v", 1.0)]
    if args.vary == "eps0":
        fixed = _resolve(args, config, "eps1", 1.0)
    else:
        fixed = _resolve(args, config, "eps0", 0.0)
    return grid, v_list, fixed


def _cmd_sweep(args) -> int:
    config = _read_config(args.config) if args.config else {}
    grid, v_list, fixed = _sweep_rows(args, config)
    oracle = args.oracle
    tol = args.tol

    def row(task):
        v, x = task
        if args.vary == "eps0":
            eps0, eps1 = x, fixed
        else:
            eps0, eps1 = fixed, x
        p = transition_probability_scaled(eps0, eps1, v)
        pmin, pmax = extremal_probabilities_scaled(eps1, v)
        cells = [x, v, fixed, p]
        if oracle:
            res = propagate(TwoLevelParams.from_scaled(eps0, eps1, v))
            cells += [res.probability, abs(p - res.probability)]
        return cells + [pmin, pmax]

    tasks = [(v, x) for v in v_list for x in grid]
    with ThreadPoolExecutor(max_workers=_workers()) as pool:
        rows = list(pool.map(row, tasks))

    fixed_name = "eps1" if args.vary == "eps0" else "eps0"
    header = [args.vary, "v", fixed_name, "P_analytic"]
    if oracle:
        header += ["P_numeric", "abs_diff"]
    header += ["P_min", "P_max"]

    lines = [",".join(header)]
    lines += [",".join(_fmt(c) for c in cells) for cells in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if oracle and any(cells[5] > tol for cells in rows):
        return 2
    return 0


def _complex_pair(z: complex) -> list[float]:
    return [z.real, z.imag]


def _matrix_pairs(m: np.ndarray) -> list[list[list[float]]]:
    return [[_complex_pair(complex(z)) for z in row] for row in m]


def _print_matrix(label: str, m: np.ndarray):
    print(f"{label}:")
    for row in m:
        print("  [" + ", ".join(f"{complex(z):.12g}" for z in row) + "]")


def _cmd_monodromy(args) -> int:
    config = _read_config(args.config) if args.config else {}
    eps0, eps1, v, _ = _scaled_from_args(args, config)
    p = TwoLevelParams.from_scaled(eps0, eps1, v)
    hp = hypergeometric_params(p)
    data = global_monodromy(hp)
    eigvals = np.linalg.eigvals(data.matrix)

    out = {
        "alpha": _complex_pair(hp.alpha),
        "beta": _complex_pair(hp.beta),
        "gamma": _complex_pair(hp.gamma),
        "connection": _matrix_pairs(data.connection),
        "local": _matrix_pairs(data.local),
        "matrix": _matrix_pairs(data.matrix),
        "element11": _complex_pair(data.element11),
        "element11_primed": _complex_pair(data.element11_primed),
        "eigenvalues": [_complex_pair(complex(z)) for z in eigvals],
    }
    if args.numeric:
        num = numeric_monodromy(hp)
        tr_expected = 1.0 + phase_factor(hp.gamma - hp.alpha - hp.beta)
        out["numeric_element11"] = _complex_pair(num[0, 0])
        out["numeric_element_diff"] = abs(num[0, 0] - data.element11)
        out["numeric_trace_diff"] = abs(np.trace(num) - tr_expected)

    if args.json:
        print(json.dumps(out))
        return 0
    print(f"alpha = {hp.alpha:.12g}, beta = {hp.beta:.12g}, gamma = {hp.gamma:.12g}")
    _print_matrix("connection matrix", data.connection)
    _print_matrix("local monodromy at z=1", data.local)
    _print_matrix("monodromy matrix (basis at infinity)", data.matrix)
    print(f"element11        = {data.element11:.12g}")
    print(f"element11_primed = {data.element11_primed:.12g}")
    print("eigenvalues      = "
          + ", ".join(f"{complex(z):.12g}" for z in eigvals))
    if args.numeric:
        print(f"numeric element11 = {complex(out['numeric_element11'][0], out['numeric_element11'][1]):.12g}"
              f"  (|diff| = {out['numeric_element_diff']:.3e})")
        print(f"numeric trace diff = {out['numeric_trace_diff']:.3e}")
    return 0


def _cmd_okubo(args) -> int:
    couplings = tuple(float(x) for x in args.couplings.split(","))
    p = MultiLevelParams(E1=args.e1, T=args.T, couplings=couplings)
    n = p.n_levels
    if args.weights:
        weights = tuple(float(x) for x in args.weights.split(","))
    else:
        weights = tuple([1.0 / (n - 1)] * (n - 1))
    system = build_okubo(p, weights)

    res = okubo_residual(p, weights)
    out = {
        "n_levels": n,
        "weights": list(weights),
        "A": _matrix_pairs(system.A),
        "C": _matrix_pairs(system.C),
        "residual": res.max_residual,
        "residual_tolerance": res.tolerance,
    }
    code = 0 if res.passed else 2
    if n > 2:
        basis = tuple([1.0] + [0.0] * (n - 2))
        rep = lambda_independence_check(p, weights, basis)
        out["weight_independence_diff"] = rep.max_diff
        out["weight_independence_tolerance"] = rep.tolerance
        if not rep.passed:
            code = 2

    if args.json:
        print(json.dumps(out))
        return code
    _print_matrix("A", system.A)
    _print_matrix("C", system.C)
    print(f"normal-form residual      = {res.max_residual:.3e}  "
          f"(tol {res.tolerance:g})")
    if n > 2:
        print(f"weight-independence diff  = {out['weight_independence_diff']:.3e}  "
              f"(tol {out['weight_independence_tolerance']:g})")
    return code


def _cmd_verify(args) -> int:
    report = run_suites(args.suite or None, seed=args.seed)
    print(json.dumps(report, indent=2))
    return 0 if all_passed(report) else 2


def main(argv=None) -> int:
    parser = _Parser(prog="monosweep", description=__doc__)
    parser.add_argument("--version", action="version",
                        version=f"monosweep {__version__} "
                                f"({'compiled' if COMPILED else 'pure-python'} kernels)")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p_prob = sub.add_parser("prob", help="single-point transition probability")
    _add_param_flags(p_prob)
    p_prob.add_argument("--oracle", action="store_true",
                        help="also run the time-domain oracle and report the diff")
    p_prob.add_argument("--tol", type=float, default=1e-6)
    p_prob.add_argument("--json", action="store_true")
    p_prob.set_defaults(fn=_cmd_prob)

    p_sweep = sub.add_parser("sweep", help="CSV sweep over eps0 or eps1")
    p_sweep.add_argument("--vary", choices=("eps0", "eps1"), required=True)
    p_sweep.add_argument("--lo", type=float, required=True)
    p_sweep.add_argument("--hi", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--v", type=float, action="append",
                         help="scaled coupling; repeat for curve families")
    p_sweep.add_argument("--eps0", type=float, help="fixed eps0 (vary eps1)")
    p_sweep.add_argument("--eps1", type=float, help="fixed eps1 (vary eps0)")
    p_sweep.add_argument("--config", help="flat key=value file")
    p_sweep.add_argument("--oracle", action="store_true")
    p_sweep.add_argument("--tol", type=float, default=1e-6)
    p_sweep.add_argument("--out", help="output CSV path (default: stdout)")
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_mono = sub.add_parser("monodromy",
                            help="connection matrix, loop monodromy and elements")
    _add_param_flags(p_mono)
    p_mono.add_argument("--numeric", action=argparse.BooleanOptionalAction,
                        default=True,
                        help="compare against the ODE continuation oracle")
    p_mono.add_argument("--json", action="store_true")
    p_mono.set_defaults(fn=_cmd_monodromy)

    p_ok = sub.add_parser("okubo", help="normal-form residual and weight checks")
    p_ok.add_argument("--e1", type=float, required=True)
    p_ok.add_argument("--T", type=float, default=1.0)
    p_ok.add_argument("--couplings", required=True,
                      help="comma-separated couplings V_2..V_N")
    p_ok.add_argument("--weights", help="comma-separated reduction weights")
    p_ok.add_argument("--json", action="store_true")
    p_ok.set_defaults(fn=_cmd_okubo)

    p_ver = sub.add_parser("verify", help="run the verification suites")
    p_ver.add_argument("--suite", action="append", choices=sorted(SUITES),
                       help="restrict to one suite; repeatable")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.set_defaults(fn=_cmd_verify)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (MonosweepError, ValueError, OSError) as exc:
        print(f"monosweep: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
