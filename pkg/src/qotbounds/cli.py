"""Command-line front end.

Commands::

    qotbounds list
    qotbounds bound NAME [--param value ...]
    qotbounds verify SUITE [--n N] [--depth L] [--seed S]
    qotbounds figure qaoa-entropy [--P 17] [--q 0.45 ...] [--contraction-grid a:b:h] [--D 50]
    qotbounds run --config job.json

Exit codes: 0 success, 1 a verification suite found a violation,
2 invalid input, 3 precondition not met, 4 numerical convergence failure.
"""

import argparse
import inspect
import json
import math
import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import jsonschema
import numpy as np

from . import bounds, entropy, suites
from .errors import ConvergenceError, PreconditionError, QotError, ValidationError
from .quantum import InteractionGraphParams
from .reports import BoundReport, report_to_csv, rows_to_csv

EXIT_OK, EXIT_FAIL, EXIT_SCHEMA, EXIT_PRECONDITION, EXIT_CONVERGENCE = 0, 1, 2, 3, 4

# optimized QAOA angles for P = 17 used in the entropy-density figure
BETA_P17 = (0.6375, 0.5197, 0.4697, 0.4499, 0.4255, 0.4054, 0.3832, 0.3603, 0.3358, 0.3092,
            0.2807, 0.2501, 0.2171, 0.1816, 0.1426, 0.1001, 0.0536)


@dataclass(frozen=True)
class Command:
    kind: str
    name: str
    equation: str
    formula: str
    args: Tuple[Tuple[str, dict], ...]
    handler: Callable


def _params(a) -> InteractionGraphParams:
    return InteractionGraphParams(a.D, a.delta, a.M, a.b)


def _graph_args(D=2):
    return (("--D", dict(type=int, default=D)), ("--delta", dict(type=int, default=1)),
            ("--M", dict(type=float, default=1.0)), ("--b", dict(type=float, default=1.0)))


def _b_maxcut_noisy(a):
    v = bounds.maxcut_noisy_max_n(a.p)
    return {"n_max": v}, "n/a", False


def _b_qaoa_depth(a):
    out = {}
    if a.n is not None:
        out["P_lower"] = bounds.maxcut_depth_bounds(a.n, a.D, "P")
    if a.P is not None:
        out["min_n"] = bounds.min_n_for_depth(a.P, a.D, "P")
    if not out:
        raise ValidationError("give --n and/or --P")
    return out, "e", out.get("P_lower", 1.0) <= 0


def _b_circuit_depth(a):
    out = {}
    if a.n is not None:
        out["L_lower"] = bounds.maxcut_depth_bounds(a.n, kind="L")
    if a.L is not None:
        out["min_n"] = bounds.min_n_for_depth(a.L, kind="L")
    if not out:
        raise ValidationError("give --n and/or --L")
    return out, "2", out.get("L_lower", 1.0) <= 0


def _b_approx(a):
    v, below = bounds.approx_threshold(a.D)
    return {"ratio": v, "below_gw": below, "gw": bounds.GW_RATIO}, "n/a", False


def _b_chebyshev(a):
    pr = bounds.chebyshev_tail(a.C, a.n, a.lip, a.r)
    return {"probability": pr.value}, "n/a", pr.vacuous


def _b_transfer(a):
    prof = bounds.GaussianProfile(a.K, a.c, a.l0)
    pr = bounds.transfer_concentration(a.D_alpha, a.alpha, prof, a.a, a.n, a.ell)
    return {"probability": pr.value}, "e", pr.vacuous


def _b_depol(a):
    dev, pr = bounds.depol_tail(a.p, a.L, a.eps, a.n, a.lip)
    return {"deviation": dev, "probability": pr.value}, "e", pr.vacuous


def _b_advantage(a):
    r = bounds.advantage_depth(a.a_c, a.p)
    return {"L_star": r.L_star, "L_int": r.L_int, "squared_ok": r.squared_ok,
            "L_squared": r.L_squared}, "e", False


def _b_anneal(a):
    r = bounds.anneal_time_lower(a.n, _params(a))
    return {"T_lower": r.value, "log_argument": r.argument}, "e", r.vacuous


def _b_ghz(a):
    r = bounds.ghz_time_lower(a.n, _params(a))
    return {"t_lower": r.value, "log_argument": r.argument}, "e", r.vacuous


def _b_regular(a):
    r = bounds.regular_graph_threshold(a.q, a.D, a.n, a.eps)
    return {"threshold": r.threshold, "mean": r.mean, "classical_energy": r.classical_energy,
            "tail": r.tail}, "e", False


def _b_mitigation(a):
    d2 = [float(x) for x in a.d2.split(",")] if a.d2 else [0.0] * a.m
    K = a.K if a.K is not None else bounds.min_of_m_K
    r = bounds.mitigation_concentration(a.m, K, a.L_f, a.l0, a.c, a.r, a.eps, a.n, d2)
    return {"probability": r.value, "deviation": r.deviation, "transferred": r.transferred,
            "budget": r.budget, "total_d2": r.total_d2}, "e", r.value >= 1


def _b_noisy_annealer(a):
    level, pr = bounds.noisy_annealer_tail(a.q, a.T, a.eps, a.n, a.lip, a.mean)
    return {"level": level, "probability": pr.value, "h": entropy.h_of_T(a.q, a.T)}, "e", pr.vacuous


def _b_lr(a):
    return {"bound": bounds.lr_bound(_params(a), a.k0, a.t), "v": _params(a).v}, "e", False


def _b_qaoa_entropy(a):
    beta = [float(x) for x in a.beta.split(",")] if a.beta else list(BETA_P17)
    led = entropy.qaoa_entropy_bound(beta, a.q, a.p_alpha, a.n)
    return {"bound": led.bound, "density": led.bound / a.n, "initial": led.initial}, "e", False


def _b_annealer_entropy(a):
    return {"h": entropy.h_of_T(a.q, a.T), "h_literal": entropy.h_of_T(a.q, a.T, literal=True),
            "bound": a.n * entropy.h_of_T(a.q, a.T)}, "e", False


BOUNDS = (
    Command("bound", "maxcut-noisy", "noisy-maxcut-size", "n <= 3 * 2^(2/p + 8)",
            (("--p", dict(type=float, required=True)),), _b_maxcut_noisy),
    Command("bound", "qaoa-depth", "qaoa-depth-lower", "P >= log(n/576) / (2 log(D+1))",
            (("--n", dict(type=float)), ("--D", dict(type=int, required=True)),
             ("--P", dict(type=int))), _b_qaoa_depth),
    Command("bound", "circuit-depth", "circuit-depth-lower", "L >= 1/2 log2(n/576)",
            (("--n", dict(type=float)), ("--L", dict(type=int))), _b_circuit_depth),
    Command("bound", "approx-threshold", "approx-ratio", "5/6 + sqrt(D-1)/(3D)",
            (("--D", dict(type=int, required=True)),), _b_approx),
    Command("bound", "chebyshev", "chebyshev-tail", "min(1, C n |O|_L^2 / r^2)",
            (("--C", dict(type=float, required=True)), ("--n", dict(type=int, required=True)),
             ("--lip", dict(type=float, required=True)), ("--r", dict(type=float, required=True))),
            _b_chebyshev),
    Command("bound", "transfer", "renyi-transfer",
            "exp((a-1)/a (D_a - c a^2 n / l^2 + log K))",
            (("--D-alpha", dict(type=float, required=True)), ("--alpha", dict(type=float, default=2.0)),
             ("--K", dict(type=float, default=1.0)), ("--c", dict(type=float, default=1.0)),
             ("--l0", dict(type=float, default=1.0)), ("--a", dict(type=float, required=True)),
             ("--n", dict(type=int, required=True)), ("--ell", dict(type=float))), _b_transfer),
    Command("bound", "depol-tail", "depolarizing-tail",
            "P(|H| >= ((1-p)^(2L) + eps)^(1/2) |H|_L n) <= exp(-eps n / 2)",
            (("--p", dict(type=float, required=True)), ("--L", dict(type=int, required=True)),
             ("--eps", dict(type=float, required=True)), ("--n", dict(type=int, required=True)),
             ("--lip", dict(type=float, default=1.0))), _b_depol),
    Command("bound", "advantage-depth", "advantage-depth", "L* = log(1/a_c) / (2p)",
            (("--a-c", dict(type=float, required=True)), ("--p", dict(type=float, required=True))),
            _b_advantage),
    Command("bound", "anneal-time", "anneal-time-lower",
            "T >= (1/v) ln(sqrt(n)/(12 c1) - c0/c1)",
            (("--n", dict(type=float, required=True)),) + _graph_args(), _b_anneal),
    Command("bound", "ghz-time", "ghz-time-lower", "t >= (1/v) ln(n/(8 c1) - c0/c1)",
            (("--n", dict(type=float, required=True)),) + _graph_args(), _b_ghz),
    Command("bound", "regular-threshold", "regular-graph-threshold",
            "(((1-2q)^2 D/2 + (2/pi) sqrt(D))^2 - eps D^2) / (2 D^2) n",
            (("--q", dict(type=float, required=True)), ("--D", dict(type=int, required=True)),
             ("--n", dict(type=int, default=1)), ("--eps", dict(type=float, default=0.0))),
            _b_regular),
    Command("bound", "mitigation", "mitigation-concentration", "exp(-c eps n / l0^2) at deviation r L_f n",
            (("--m", dict(type=int, required=True)), ("--K", dict(type=float)),
             ("--L-f", dict(type=float, default=1.0)), ("--l0", dict(type=float, required=True)),
             ("--c", dict(type=float, default=1.0)), ("--r", dict(type=float, required=True)),
             ("--eps", dict(type=float, required=True)), ("--n", dict(type=int, required=True)),
             ("--d2", dict(type=str, help="comma-separated per-copy D2 values (nats)"))),
            _b_mitigation),
    Command("bound", "noisy-annealer", "noisy-annealer-tail",
            "level = mean - 2^(-1/2) (h(T) + eps)^(1/2) |H|_L n, prob exp(-eps n / 2)",
            (("--q", dict(type=float, required=True)), ("--T", dict(type=float, required=True)),
             ("--eps", dict(type=float, required=True)), ("--n", dict(type=int, required=True)),
             ("--lip", dict(type=float, required=True)), ("--mean", dict(type=float, default=0.0))),
            _b_noisy_annealer),
    Command("bound", "lieb-robinson", "lieb-robinson",
            "2M/(2D-1) k0^(delta-1) exp(v t - k0)",
            (("--k0", dict(type=int, required=True)), ("--t", dict(type=float, required=True)))
            + _graph_args(), _b_lr),
    Command("bound", "qaoa-entropy", "qaoa-entropy-ledger",
            "(1-q_a)^(2P) D_2(+|tau_q) + sum_k (1-q_a)^(2(P-k)) D_inf(mixer_k)",
            (("--q", dict(type=float, required=True)), ("--p-alpha", dict(type=float, required=True)),
             ("--n", dict(type=int, default=1)),
             ("--beta", dict(type=str, help="comma-separated mixer angles; default P=17 set"))),
            _b_qaoa_entropy),
    Command("bound", "annealer-entropy", "annealer-entropy",
            "h(T) = e^(-rT) D_1 + 2|1-2q|/sqrt(q(1-q)) (1 - rT e^(-rT) - e^(-rT)) / (r^2 T)",
            (("--q", dict(type=float, required=True)), ("--T", dict(type=float, required=True)),
             ("--n", dict(type=int, default=1))), _b_annealer_entropy),
)

VERIFY = {
    "depolarizing": "depolarizing-entropy-decay",
    "mixer": "mixer-dinf-closed-form",
    "plus-state": "plus-state-d2-closed-form",
    "transfer": "transfer-inequality",
    "transfer-concentration": "renyi-transfer",
    "poincare": "poincare-noiseless",
    "chebyshev": "chebyshev-tail",
    "symmetric-concentration": "symmetric-concentration",
    "w1": "w1-primal-dual",
    "annealer": "annealer-entropy",
    "noisy-annealer": "noisy-annealer-tail",
    "purity": "purity-decay",
    "depol-tail": "depolarizing-tail",
    "mitigation": "mitigation-concentration",
    "lieb-robinson": "lieb-robinson",
    "symmetry": "bipartite-symmetry",
}

FIGURES = {"qaoa-entropy": "qaoa-entropy-ledger"}


def catalog() -> List[dict]:
    """Every command with its equation anchor."""
    out = [{"kind": "bound", "name": c.name, "equation": c.equation, "formula": c.formula}
           for c in BOUNDS]
    out += [{"kind": "verify", "name": k, "equation": "verify:" + v, "formula": ""}
            for k, v in VERIFY.items()]
    out += [{"kind": "figure", "name": k, "equation": "figure:" + v, "formula": ""}
            for k, v in FIGURES.items()]
    return out


def _grid(spec: str) -> np.ndarray:
    try:
        a, b, h = (float(x) for x in spec.split(":"))
    except ValueError:
        raise ValidationError(f"grid must look like start:stop:step, got {spec!r}")
    if h <= 0 or b < a:
        raise ValidationError("grid needs step > 0 and stop >= start")
    k = int(math.floor((b - a) / h + 1e-9))
    return a + h * np.arange(k + 1)


def figure_qaoa_entropy(P: int = 17, qs=(0.35, 0.4, 0.45, 0.5), grid="0:0.5:0.01", D: int = 50,
                        beta=None) -> List[dict]:
    """Relative-entropy density bound after ``P`` noisy QAOA rounds versus contraction.

    One row per ``(q, p_α)`` with the graph threshold density for degree ``D``.
    """
    beta = tuple(BETA_P17 if beta is None else beta)
    if len(beta) != P:
        raise ValidationError(f"need {P} mixer angles, got {len(beta)}")
    pts = _grid(grid) if isinstance(grid, str) else np.asarray(grid, float)
    rows = []
    for q in qs:
        thr = bounds.regular_graph_threshold(q, D, 1).threshold
        for pa in pts:
            led = entropy.qaoa_entropy_bound(beta, q, float(pa), 1)
            rows.append({"q": float(q), "contraction": float(pa), "density": led.bound,
                         "threshold": thr, "log_base": "e"})
    return rows


# --------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", type=str, default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = argparse.ArgumentParser(prog="qotbounds", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("list", parents=[common], help="print the command catalog")

    pb = sub.add_parser("bound", help="evaluate a closed-form bound")
    bsub = pb.add_subparsers(dest="name", required=True)
    for c in BOUNDS:
        sp = bsub.add_parser(c.name, parents=[common], help=c.formula)
        for flag, kw in c.args:
            sp.add_argument(flag, **kw)

    pv = sub.add_parser("verify", parents=[common], help="run a brute-force verification suite")
    pv.add_argument("suite", choices=sorted(VERIFY))
    pv.add_argument("--n", type=int)
    pv.add_argument("--depth", type=int)
    pv.add_argument("--circuits", type=int)
    pv.add_argument("--P", type=int)

    pf = sub.add_parser("figure", help="emit figure data as CSV/JSON")
    fsub = pf.add_subparsers(dest="name", required=True)
    fq = fsub.add_parser("qaoa-entropy", parents=[common])
    fq.add_argument("--P", type=int, default=17)
    fq.add_argument("--q", type=float, action="append")
    fq.add_argument("--contraction-grid", default="0:0.5:0.01")
    fq.add_argument("--D", type=int, default=50)
    fq.add_argument("--beta", type=str, help="comma-separated mixer angles")

    pr = sub.add_parser("run", help="run a JSON job file")
    pr.add_argument("--config", required=True)
    return p


JOB_SCHEMA = {
    "type": "object",
    "required": ["command", "name"],
    "additionalProperties": False,
    "properties": {
        "command": {"enum": ["bound", "verify", "figure", "list"]},
        "name": {"type": "string"},
        "parameters": {"type": "object",
                       "additionalProperties": {"type": ["number", "string", "boolean", "array"]}},
        "seed": {"type": "integer"},
        "output": {"type": "string"},
        "format": {"enum": ["json", "csv"]},
    },
}


def _job_argv(job: dict) -> List[str]:
    jsonschema.validate(job, JOB_SCHEMA)
    argv = [job["command"]]
    if job["command"] != "list":
        argv.append(job["name"])
    for k, v in job.get("parameters", {}).items():
        flag = "--" + k.replace("_", "-")
        if isinstance(v, list):
            if job["command"] == "figure" and k == "q":
                for x in v:
                    argv += [flag, str(x)]
                continue
            v = ",".join(str(x) for x in v)
        argv += [flag, str(v)]
    if "seed" in job:
        argv += ["--seed", str(job["seed"])]
    if "output" in job:
        argv += ["--out", job["output"]]
    if "format" in job:
        argv += ["--format", job["format"]]
    return argv


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _inputs(a, skip=("command", "name", "out", "format", "suite")) -> dict:
    return {k: v for k, v in vars(a).items() if k not in skip and v is not None}


def _dispatch(a) -> int:
    if a.command == "list":
        cat = catalog()
        if a.format == "csv":
            _emit(rows_to_csv(cat), a.out)
        else:
            _emit(json.dumps(cat, indent=2), a.out)
        return EXIT_OK

    if a.command == "bound":
        c = next(c for c in BOUNDS if c.name == a.name)
        values, base, vac = c.handler(a)
        rep = BoundReport(c.name, c.equation, _inputs(a), values, base, vacuous=bool(vac),
                          notes=[c.formula])
        _emit(report_to_csv(rep) if a.format == "csv" else rep.to_json(), a.out)
        return EXIT_OK

    if a.command == "verify":
        fn = suites.SUITES[a.suite]
        sig = inspect.signature(fn).parameters
        kw = {"seed": a.seed} if "seed" in sig else {}
        for src, dst in (("n", "n"), ("depth", "max_depth"), ("depth", "depths"),
                         ("circuits", "circuits"), ("P", "P")):
            val = getattr(a, src)
            if val is not None and dst in sig:
                kw[dst] = tuple(range(1, val + 1)) if dst == "depths" else val
        res = fn(**kw)
        rep = BoundReport("verify:" + a.suite, VERIFY[a.suite], kw,
                          {"checks": res.checks, "violations": res.violations,
                           "worst_slack": res.worst_slack, "details": res.details},
                          "e", passed=res.passed)
        _emit(report_to_csv(rep) if a.format == "csv" else rep.to_json(), a.out)
        return EXIT_OK if res.passed else EXIT_FAIL

    if a.command == "figure":
        beta = [float(x) for x in a.beta.split(",")] if a.beta else None
        qs = tuple(a.q) if a.q else (0.35, 0.4, 0.45, 0.5)
        rows = figure_qaoa_entropy(a.P, qs, a.contraction_grid, a.D, beta)
        if a.format == "csv":
            _emit(rows_to_csv(rows), a.out)
        else:
            rep = BoundReport("figure:qaoa-entropy", FIGURES["qaoa-entropy"], _inputs(a),
                              {"rows": rows}, "e")
            _emit(rep.to_json(), a.out)
        return EXIT_OK
    raise ValidationError(f"unknown command {a.command!r}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_SCHEMA
    try:
        if args.command == "run":
            try:
                with open(args.config) as fh:
                    job = json.load(fh)
                argv2 = _job_argv(job)
            except jsonschema.ValidationError as exc:
                path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
                print(f"schema error at {path}: {exc.message}", file=sys.stderr)
                return EXIT_SCHEMA
            except (OSError, json.JSONDecodeError) as exc:
                print(f"cannot read job: {exc}", file=sys.stderr)
                return EXIT_SCHEMA
            try:
                args = parser.parse_args(argv2)
            except SystemExit as exc:
                return int(exc.code or 0) and EXIT_SCHEMA
        return _dispatch(args)
    except PreconditionError as exc:
        print(f"not applicable: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (ValidationError, QotError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
