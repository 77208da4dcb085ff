"""Command-line front end: ``tistri {generate,brute,estimate,bench,sweep}``."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from importlib import resources

from .graph import (EdgeListParseError, GeneratorSpec, Graph, GraphError, count_triangles_brute,
                    generate, load_edge_list, save_edge_list, triangular_lattice)
from .oracle import ContractError, TisOracle
from .pipeline import (PRESETS, EstimatorConfig, RunFailure, budget_curve, estimate_triangles)

SCHEMA_VERSION = 1
FAMILIES = ("gnp", "book", "cliques", "unit-distance", "progression")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; that code is reserved for run failures
    def error(self, message):
        raise UsageError(message)


def load_schema() -> dict:
    text = resources.files("tistri").joinpath("report-schema.json").read_text()
    return json.loads(text)


def _default_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("RNG_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"RNG_SEED must be an integer, got {env!r}") from None


def _graph_meta(g: Graph) -> dict:
    st = count_triangles_brute(g)
    return {"n": g.n, "edges": g.num_edges, "t_brute": st.t, "delta_E": st.delta_E}


def _config(args, seed: int) -> EstimatorConfig:
    make = EstimatorConfig.theoretical if args.preset == "theoretical" else EstimatorConfig.practical
    kw = {}
    for name in ("gamma_override", "n_cap_override", "tau_override", "rounds_override", "max_iterations"):
        v = getattr(args, name, None)
        if v is not None:
            kw[name] = v
    return make(args.eps, args.d, seed=seed, **kw)


def _config_echo(cfg: EstimatorConfig, n: int) -> dict:
    return {
        "eps": cfg.eps, "d": cfg.d, "preset": cfg.preset,
        "kappa1": cfg.kappa1, "kappa2": cfg.kappa2, "kappa3": cfg.kappa3,
        "tau": cfg.tau(n), "n_cap": cfg.n_cap(n), "gamma": cfg.gamma(n),
        "threshold_rounds": cfg.rounds(n), "max_iterations": cfg.iterations(n),
    }


def run_report(g: Graph, cfg: EstimatorConfig, meta: dict | None = None, timing: bool = False) -> dict:
    """One estimation run as a report dict (kind ``estimate``)."""
    meta = meta or _graph_meta(g)
    o = TisOracle(g)
    t0 = time.perf_counter()
    status, est, fail = "ok", None, None
    try:
        rep = estimate_triangles(o, cfg)
        est = {"t_hat": rep.t_hat, "mode": rep.mode, "iterations": rep.iterations}
        steps = rep.steps
    except RunFailure as exc:
        status, fail, steps = "run-failure", str(exc), {}
    wall = time.perf_counter() - t0
    t = meta["t_brute"]
    return {
        "kind": "estimate",
        "schema_version": SCHEMA_VERSION,
        "status": status,
        "failure": fail,
        "seed": cfg.seed,
        "graph": meta,
        "config": _config_echo(cfg, g.n),
        "estimate": est,
        "relative_error": None if est is None else abs(est["t_hat"] - t) / max(t, 1),
        "queries": o.ledger.as_dict(),
        "steps": steps,
        "wall_time_s": wall if timing else None,
    }


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _spec_from_args(args) -> GeneratorSpec:
    points = ()
    if args.family == "unit-distance":
        points = tuple(triangular_lattice(args.rows, args.cols))
    d = getattr(args, "family_d", None) or args.d
    gadgets = args.gadgets
    if gadgets is None:
        gadgets = args.n // (d + 2) if d >= 0 else 0
    return GeneratorSpec(args.family, n=args.n, p=args.p, d=d, gadgets=gadgets,
                         copies=args.copies, m=args.m, size=args.size, points=points)


def cmd_generate(args) -> int:
    g = generate(_spec_from_args(args), seed=_default_seed(args.seed))
    if args.out:
        save_edge_list(g, args.out)
    else:
        lines = [str(g.n)] + [f"{u} {v}" for u, v in sorted(g.edges)]
        sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_brute(args) -> int:
    g = load_edge_list(args.graph)
    st = count_triangles_brute(g)
    _emit({"kind": "brute", "schema_version": SCHEMA_VERSION, "n": g.n, "edges": g.num_edges,
           "t": st.t, "delta_E": st.delta_E,
           "max_vertex_triangles": max(st.delta_per_vertex, default=0)}, args.out)
    return 0


def cmd_estimate(args) -> int:
    g = load_edge_list(args.graph)
    doc = run_report(g, _config(args, _default_seed(args.seed)), timing=args.timing)
    _emit(doc, args.out)
    return 2 if doc["status"] != "ok" else 0


def cmd_sweep(args) -> int:
    g = load_edge_list(args.graph)
    meta = _graph_meta(g)
    base = _default_seed(args.seed)
    runs = [run_report(g, _config(args, base + r), meta) for r in range(args.runs)]
    good = [r for r in runs if r["status"] == "ok"]
    hits = sum(r["relative_error"] <= args.eps for r in good)
    queries = [r["queries"]["total"] for r in runs]
    _emit({"kind": "sweep", "schema_version": SCHEMA_VERSION, "graph": meta,
           "config": _config_echo(_config(args, base), g.n), "runs": args.runs, "base_seed": base,
           "failures": len(runs) - len(good), "success_fraction": hits / args.runs,
           "relative_errors": [r["relative_error"] for r in good],
           "mean_queries": sum(queries) / len(queries)}, args.out)
    return 2 if len(good) < len(runs) else 0


def cmd_bench(args) -> int:
    base = _default_seed(args.seed)
    rows = []
    failed = False
    for n in args.sizes:
        args.n = n
        if args.family == "progression":
            args.m = n // 3 if (n // 3) % 2 else n // 3 - 1
        g = generate(_spec_from_args(args), seed=base)
        cfg = _config(args, base)
        rep = run_report(g, cfg)
        failed |= rep["status"] != "ok"
        curve = budget_curve(cfg, g.n)
        rows.append({"n": g.n, "t_brute": rep["graph"]["t_brute"], "queries": rep["queries"]["total"],
                     "estimate": None if rep["estimate"] is None else rep["estimate"]["t_hat"],
                     "curve": float(curve), "ratio": rep["queries"]["total"] / float(curve),
                     "exhaustive": math.comb(g.n, 3)})
    _emit({"kind": "bench", "schema_version": SCHEMA_VERSION, "family": args.family,
           "eps": args.eps, "d": args.d, "preset": args.preset, "seed": base, "rows": rows}, args.out)
    return 2 if failed else 0


def _add_family_flags(p):
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--p", type=float, default=0.1, help="edge probability (gnp)")
    p.add_argument("--gadgets", type=int, default=None, help="number of books (book), default as many as fit")
    p.add_argument("--copies", type=int, default=None, help="number of cliques (cliques)")
    p.add_argument("--m", type=int, default=0, help="modulus, odd (progression)")
    p.add_argument("--size", type=int, default=None, help="cap on the difference set (progression)")
    p.add_argument("--rows", type=int, default=4, help="lattice rows (unit-distance)")
    p.add_argument("--cols", type=int, default=4, help="lattice columns (unit-distance)")


def _add_estimator_flags(p):
    p.add_argument("--eps", type=float, default=0.2)
    p.add_argument("--d", type=int, default=1, help="asserted bound on triangles per edge")
    p.add_argument("--preset", choices=PRESETS, default="practical")
    p.add_argument("--gamma-override", type=int, default=None)
    p.add_argument("--n-cap-override", type=int, default=None)
    p.add_argument("--tau-override", type=int, default=None)
    p.add_argument("--rounds-override", type=int, default=None)
    p.add_argument("--max-iterations", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tistri", description="Triangle estimation with tripartite independent set queries.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write a generated graph as an edge list")
    _add_family_flags(p)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--d", type=int, default=0, help="family degree parameter")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("brute", help="exact triangle statistics")
    p.add_argument("graph")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("estimate", help="one estimation run")
    p.add_argument("graph")
    _add_estimator_flags(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--timing", action="store_true", help="record wall time (makes output non-reproducible)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("sweep", help="repeat estimation over consecutive seeds")
    p.add_argument("graph")
    _add_estimator_flags(p)
    p.add_argument("-R", "--runs", type=int, default=10)
    p.add_argument("--seed", type=int, default=None, help="first seed")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="query counts over a range of n for one family")
    _add_family_flags(p)
    _add_estimator_flags(p)
    p.add_argument("--sizes", type=int, nargs="+", required=True)
    p.add_argument("--family-d", type=int, default=None, help="family degree parameter, default --d")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "runs", 1) < 1:
            raise UsageError("--runs must be >= 1")
        return args.func(args)
    except (UsageError, EdgeListParseError, GraphError, ContractError, OSError) as exc:
        print(f"tistri: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
