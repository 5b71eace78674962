"""Command-line front end.

Subcommands: run (config-file driven), completeness / soundness
(shorthand presets), sweep (parameter grids with fitted log-log slopes),
thrdeg (threshold degree of a truth table), codes (random code search /
export), mixcheck (exact rapid-mixing check).  Config files are
line-oriented `key = value`; any key can be overridden with `--key value`.
Output is CSV on stdout or --out.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .experiments import build
from .harness import (ExperimentConfig, estimate, fit_loglog_slope,
                      rows_to_csv, rng_stream)


def _split_overrides(extra):
    if len(extra) % 2 != 0:
        raise SystemExit(f"dangling override: {extra[-1]}")
    out = {}
    for flag, value in zip(extra[::2], extra[1::2]):
        if not flag.startswith("--"):
            raise SystemExit(f"override flags look like --key value, got {flag}")
        out[flag[2:].replace("-", "_")] = value
    return out


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_config(config, experiment_id):
    verifier, info = build(config)
    row = estimate(verifier, config, experiment_id)
    return row, info


def cmd_run(args, overrides):
    overrides.setdefault("seed", str(args.seed))
    config = ExperimentConfig.from_file(args.config, overrides)
    if args.seed is None:
        raise SystemExit("--seed is mandatory for run")
    config.seed = args.seed
    row, _ = _run_config(config, f"run-{config.protocol}")
    _emit(rows_to_csv([row]), args.out)


def _preset(args, overrides, input_kind, policy, adversary):
    values = {"protocol": args.protocol, "n": str(args.n),
              "eps": str(args.eps), "trials": str(args.trials),
              "input": input_kind, "proof_policy": policy,
              "adversary": adversary, "seed": str(args.seed)}
    if args.k:
        values["k"] = str(args.k)
    values.update(overrides)
    return ExperimentConfig.from_mapping(values)


def cmd_completeness(args, overrides):
    config = _preset(args, overrides, "member", "honest", "honest-only")
    row, _ = _run_config(config, f"completeness-{config.protocol}")
    _emit(rows_to_csv([row]), args.out)


def cmd_soundness(args, overrides):
    config = _preset(args, overrides, args.far_input, "adversarial", args.adversary)
    row, info = _run_config(config, f"soundness-{config.protocol}")
    text = rows_to_csv([row])
    if info.get("distance") is not None:
        text += f"# certified_distance = {info['distance']:.10g}\n"
    if config.adversary == "hillclimb":
        text += "# hillclimb acceptance is a lower bound on the adversary's best\n"
    _emit(text, args.out)


def cmd_sweep(args, overrides):
    values = [v for v in args.values.split(",") if v]
    rows = []
    metric = []
    for v in values:
        over = dict(overrides)
        over[args.param] = v
        config = _preset(args, over, args.input, args.policy,
                         overrides.get("adversary", "exhaustive"))
        row, _ = _run_config(config, f"sweep-{config.protocol}-{args.param}-{v}")
        rows.append(row)
        metric.append(getattr(row, args.metric))
    text = rows_to_csv(rows)
    xs = [float(v) for v in values]
    if args.param == "eps":
        xs = [1.0 / x for x in xs]  # slope against 1/eps
    slope = fit_loglog_slope(xs, metric)
    text += f"# slope {args.param} {args.metric} {slope:.6f}\n"
    _emit(text, args.out)


def cmd_thrdeg(args, overrides):
    from .lowerbound import load_truth_table, threshold_degree, upp_sampler
    f = load_truth_table(args.table, args.mask)
    degree, poly = threshold_degree(f)
    sampler = upp_sampler(poly, f)
    lines = ["degree,monomials,max_queries",
             f"{degree},{len(poly.coeffs)},{sampler.max_queries}"]
    for s, a in sorted(poly.coeffs.items()):
        lines.append(f"# alpha_{'.'.join(map(str, s)) or 'const'} = {a:.10g}")
    _emit("\n".join(lines) + "\n", args.out)


def cmd_codes(args, overrides):
    from .codes import (LinearCode, dual_distance, is_far_from_set,
                        random_linear_code)
    rng_seed = args.seed
    far_set = None
    if args.far_from:
        far_set = np.loadtxt(args.far_from, dtype=np.int64, ndmin=2)
    for attempt in range(args.seeds):
        code = random_linear_code(args.n, args.dim, rng_stream(rng_seed, attempt))
        dd = dual_distance(code)
        if dd < args.min_dual_distance:
            continue
        if far_set is not None and not is_far_from_set(code, far_set, args.eps):
            continue
        text = (f"found,attempt={attempt},dual_distance={dd}\n")
        if args.export:
            code.save(args.export)
        _emit(text, args.out)
        return
    raise SystemExit(f"no code found within {args.seeds} seeds")


def cmd_mixcheck(args, overrides):
    from .graphs import (default_walk_length, gen_bipartite_expander,
                         gen_far_nonbipartite, load_graph, rapid_mixing_check)
    if args.graph:
        g = load_graph(args.graph)
    elif args.gen == "bipartite":
        g = gen_bipartite_expander(args.n, args.degree, rng_stream(args.seed, 0))
    elif args.gen == "far":
        g, dist = gen_far_nonbipartite(args.n, args.degree, args.eps,
                                       rng_stream(args.seed, 0))
    else:
        raise SystemExit("give a graph file or --gen bipartite|far")
    steps = args.steps or default_walk_length(g.n)
    ok = rapid_mixing_check(g, steps)
    _emit(f"n,steps,rapidly_mixing\n{g.n},{steps},{ok}\n", args.out)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="proxlab")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a config file")
    p_run.add_argument("config")
    p_run.add_argument("--seed", type=int, required=True)
    p_run.add_argument("--out", default="")

    for name in ("completeness", "soundness"):
        p = sub.add_parser(name)
        p.add_argument("--protocol", required=True)
        p.add_argument("--n", type=int, default=64)
        p.add_argument("--k", type=int, default=0)
        p.add_argument("--eps", type=float, default=0.125)
        p.add_argument("--trials", type=int, default=1000)
        p.add_argument("--seed", type=int, required=True)
        p.add_argument("--out", default="")
        if name == "soundness":
            p.add_argument("--adversary", default="exhaustive",
                           choices=["exhaustive", "hillclimb"])
            p.add_argument("--far-input", dest="far_input", default="far")

    p_sweep = sub.add_parser("sweep")
    p_sweep.add_argument("--protocol", required=True)
    p_sweep.add_argument("--param", required=True)
    p_sweep.add_argument("--values", required=True, help="comma separated")
    p_sweep.add_argument("--metric", default="max_classical_queries")
    p_sweep.add_argument("--input", default="member")
    p_sweep.add_argument("--policy", default="honest")
    p_sweep.add_argument("--n", type=int, default=64)
    p_sweep.add_argument("--k", type=int, default=0)
    p_sweep.add_argument("--eps", type=float, default=0.125)
    p_sweep.add_argument("--trials", type=int, default=200)
    p_sweep.add_argument("--seed", type=int, required=True)
    p_sweep.add_argument("--out", default="")

    p_thr = sub.add_parser("thrdeg")
    p_thr.add_argument("table")
    p_thr.add_argument("--mask", default=None)
    p_thr.add_argument("--out", default="")

    p_codes = sub.add_parser("codes")
    p_codes.add_argument("--n", type=int, required=True)
    p_codes.add_argument("--dim", type=int, required=True)
    p_codes.add_argument("--eps", type=float, default=0.05)
    p_codes.add_argument("--far-from", dest="far_from", default=None)
    p_codes.add_argument("--min-dual-distance", dest="min_dual_distance",
                         type=int, default=3)
    p_codes.add_argument("--seeds", type=int, default=100)
    p_codes.add_argument("--seed", type=int, default=0)
    p_codes.add_argument("--export", default="")
    p_codes.add_argument("--out", default="")

    p_mix = sub.add_parser("mixcheck")
    p_mix.add_argument("graph", nargs="?", default=None)
    p_mix.add_argument("--gen", choices=["bipartite", "far"], default=None)
    p_mix.add_argument("--n", type=int, default=64)
    p_mix.add_argument("--degree", type=int, default=3)
    p_mix.add_argument("--eps", type=float, default=0.05)
    p_mix.add_argument("--steps", type=int, default=0)
    p_mix.add_argument("--seed", type=int, default=0)
    p_mix.add_argument("--out", default="")

    args, extra = parser.parse_known_args(argv)
    overrides = _split_overrides(extra)
    handler = {
        "run": cmd_run,
        "completeness": cmd_completeness,
        "soundness": cmd_soundness,
        "sweep": cmd_sweep,
        "thrdeg": cmd_thrdeg,
        "codes": cmd_codes,
        "mixcheck": cmd_mixcheck,
    }[args.command]
    handler(args, overrides)


if __name__ == "__main__":
    main()
