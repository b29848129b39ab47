"""Command-line front end.

Subcommands:
  predict         closed-form link probability, scaling deviation, and
                  k-connectivity / min-degree predictions for one instance
  threshold       smallest ring size K* whose exact link probability clears
                  the design threshold, with the bracketing values
  simulate        seeded Monte Carlo over a model / sweep, records + summary
  degree-dist     degree-census experiment against the limiting Poisson means
  coupling-check  empirical validation of the binomial-in-uniform ring nesting
  dominance-check statistical dominance of the binomial-ring graph over the
                  matched Erdos-Renyi graph

Data goes to files (CSV or JSON lines) or stdout; advisory warnings go to
stderr so machine-readable output is never polluted. Exit codes: 0 success,
2 validation error, 3 unsupported parameter regime, 4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import yaml

from . import experiments, plots, theory
from .experiments import ConfigError, ExperimentConfig
from .models import ModelParams

_MODEL_ALIASES = {
    "composed": "composed",
    "uniform": "uniform_q_intersection",
    "uniform_q_intersection": "uniform_q_intersection",
    "binomial": "binomial_q_intersection",
    "binomial_q_intersection": "binomial_q_intersection",
    "er": "erdos_renyi",
    "erdos_renyi": "erdos_renyi",
    "coupled": "coupled_pair",
    "coupled_pair": "coupled_pair",
}

_INT_SWEEP_FIELDS = {"n", "K", "P", "q"}


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def _advise(msg: str) -> None:
    print(f"advisory: {msg}", file=sys.stderr)


def _asymptotic_advisories(n: int, K: int, P: int) -> None:
    """The limit laws assume a large pool relative to the rings; flag
    parameter choices where the approximations look strained."""
    if K * K / P > 0.25:
        _advise(f"K^2/P = {K * K / P:.3g} is not small; the scaling law may be inaccurate")
    if K / P > 0.1:
        _advise(f"K/P = {K / P:.3g} is not small; ring and pool sizes are too close")
    if n < 100:
        _advise(f"n = {n} is small for limit-law predictions")


def _parse_sweep(text: str) -> tuple[str, tuple]:
    """Parse 'field=start:end[:step]' into (field, values), end inclusive."""
    if "=" not in text:
        raise ValueError(f"sweep must look like field=start:end[:step], got {text!r}")
    field, _, rhs = text.partition("=")
    field = field.strip()
    parts = rhs.split(":")
    if len(parts) not in (2, 3):
        raise ValueError(f"sweep range must be start:end or start:end:step, got {rhs!r}")
    if field in _INT_SWEEP_FIELDS:
        start, end = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
        if step < 1:
            raise ValueError(f"sweep step must be positive, got {step}")
        values = tuple(range(start, end + 1, step))
    else:
        start, end = float(parts[0]), float(parts[1])
        step = float(parts[2]) if len(parts) == 3 else 1.0
        if step <= 0:
            raise ValueError(f"sweep step must be positive, got {step}")
        count = int(math.floor((end - start) / step + 1e-9)) + 1
        values = tuple(start + i * step for i in range(max(count, 0)))
    if not values:
        raise ValueError(f"sweep {text!r} produces no values")
    return field, values


def _parse_int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise ValueError(f"{flag} expects a comma-separated integer list, got {text!r}") from exc


def _add_model_flags(sub, *, ring=True, p_on=True, x=False):
    sub.add_argument("--n", type=int, required=True, help="number of sensors n")
    if ring:
        sub.add_argument("--ring", type=int, dest="K", metavar="K", required=True,
                         help="key-ring size K (keys held per sensor)")
    sub.add_argument("--pool", type=int, dest="P", metavar="P", required=True,
                     help="key-pool size P (distinct keys overall)")
    sub.add_argument("--q", type=int, required=True,
                     help="required key overlap q for a secure link")
    if p_on:
        sub.add_argument("--p-on", type=float, dest="p", metavar="P_ON", default=1.0,
                         help="channel-on probability p (default 1)")
    if x:
        sub.add_argument("--x", type=float, default=None,
                         help="per-key inclusion probability x")


def _add_run_flags(sub):
    sub.add_argument("--trials", type=int, default=500, help="Monte Carlo trials (default 500)")
    sub.add_argument("--seed", type=int, default=None, metavar="MASTER_SEED",
                     help="master seed (required; runs are reproducible by default)")
    sub.add_argument("--out", required=True, help="output path prefix")
    sub.add_argument("--format", choices=("csv", "json-lines"), default="csv",
                     help="output file format (default csv)")
    sub.add_argument("--workers", type=int, default=1,
                     help="worker processes; output is identical for any value")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="keynetsim",
        description="Random-graph models, predictions, and Monte Carlo experiments "
                    "for secure sensor networks built on shared-key links.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("predict", help="closed-form predictions for one instance")
    _add_model_flags(sp)
    sp.add_argument("--k", type=int, default=1, help="connectivity order k (default 1)")

    st = subs.add_parser("threshold", help="design ring size K*")
    _add_model_flags(st, ring=False)
    st.add_argument("--k", type=int, default=1,
                    help="margin rule order k (default 1 = plain connectivity)")

    ss = subs.add_parser("simulate", help="Monte Carlo experiment")
    ss.add_argument("--config", default=None, help="YAML experiment config file")
    ss.add_argument("--model", default="composed", choices=sorted(_MODEL_ALIASES),
                    help="model to sample (default composed)")
    ss.add_argument("--n", type=int, default=None)
    ss.add_argument("--ring", type=int, dest="K", metavar="K", default=None)
    ss.add_argument("--pool", type=int, dest="P", metavar="P", default=None)
    ss.add_argument("--q", type=int, default=None)
    ss.add_argument("--p-on", type=float, dest="p", metavar="P_ON", default=None)
    ss.add_argument("--x", type=float, default=None)
    ss.add_argument("--k", default=None, metavar="K_LIST",
                    help="comma-separated connectivity orders, e.g. 1,2")
    ss.add_argument("--measurements", default=None,
                    help="comma-separated subset of " + ",".join(experiments.MEASUREMENTS))
    ss.add_argument("--sweep", default=None, metavar="FIELD=START:END[:STEP]")
    ss.add_argument("--h-max", type=int, dest="h_max", default=10,
                    help="largest degree tracked by the census (default 10)")
    ss.add_argument("--trials", type=int, default=None,
                    help="Monte Carlo trials (default 500)")
    ss.add_argument("--seed", type=int, default=None, metavar="MASTER_SEED")
    ss.add_argument("--out", required=True)
    ss.add_argument("--format", choices=("csv", "json-lines"), default="csv")
    ss.add_argument("--workers", type=int, default=1)
    ss.add_argument("--plot", action="store_true",
                    help="also render figures next to the data files")

    sd = subs.add_parser("degree-dist", help="degree census vs limiting Poisson means")
    _add_model_flags(sd)
    sd.add_argument("--h-max", type=int, dest="h_max", default=10)
    _add_run_flags(sd)
    sd.add_argument("--plot", action="store_true")

    sc = subs.add_parser("coupling-check", help="binomial-in-uniform ring nesting check")
    _add_model_flags(sc, p_on=False, x=True)
    _add_run_flags(sc)

    sv = subs.add_parser("dominance-check",
                         help="binomial-ring graph vs matched Erdos-Renyi graph")
    _add_model_flags(sv, ring=False, p_on=False, x=True)
    sv.add_argument("--y", type=float, default=None,
                    help="Erdos-Renyi edge rate (default: derived from x)")
    sv.add_argument("--k", default="1", metavar="K_LIST",
                    help="comma-separated connectivity orders (default 1)")
    _add_run_flags(sv)

    return parser


def _echo_lines(args, skip=("workers", "plot", "command", "func")) -> list[str]:
    """Reconstruct the logical invocation as a header comment; worker count
    and figure rendering never affect the data, so they are omitted."""
    parts = [f"keynetsim {args.command}"]
    for name, value in sorted(vars(args).items()):
        if name in skip or value is None or value is False:
            continue
        flag = name.replace("_", "-")
        flag = {"K": "ring", "P": "pool", "p": "p-on"}.get(name, flag)
        parts.append(f"--{flag} {value}" if value is not True else f"--{flag}")
    return ["# invocation: " + " ".join(parts)]


def _require_seed(args) -> int:
    if args.seed is None:
        raise ValueError("--seed is required: runs must be reproducible from their invocation")
    return args.seed


def _check_out_dir(out_prefix: str) -> None:
    directory = os.path.dirname(os.path.abspath(out_prefix))
    if not os.path.isdir(directory):
        raise OSError(f"output directory does not exist: {directory}")


def _write_outputs(args, config, records, summary) -> list[str]:
    echo = _echo_lines(args)
    if args.format == "csv":
        rec_path = args.out + ".records.csv"
        sum_path = args.out + ".summary.csv"
        experiments.write_records_csv(rec_path, config, records, extra_header=echo)
        experiments.write_summary_csv(sum_path, config, summary, extra_header=echo)
    else:
        rec_path = args.out + ".records.jsonl"
        sum_path = args.out + ".summary.jsonl"
        experiments.write_records_jsonl(rec_path, config, records, extra_header=echo)
        experiments.write_summary_jsonl(sum_path, config, summary, extra_header=echo)
    return [rec_path, sum_path]


def _cmd_predict(args) -> int:
    params = ModelParams(n=args.n, K=args.K, P=args.P, q=args.q, p=args.p)
    if not isinstance(args.k, int) or args.k < 1:
        raise ValueError(f"k must be a positive integer, got {args.k!r}")
    _asymptotic_advisories(args.n, args.K, args.P)
    s = theory.exact_s_probability(args.K, args.P, args.q)
    t = params.p * s
    point = theory.scaling_alpha(args.n, args.k, t)
    lines = [
        f"n = {args.n}",
        f"K = {args.K}",
        f"P = {args.P}",
        f"q = {args.q}",
        f"p = {_fmt(args.p)}",
        f"k = {args.k}",
        f"exact_s = {_fmt(s)}",
        f"exact_t = {_fmt(t)}",
        f"alpha = {_fmt(point.alpha)}",
        f"predicted_k_connectivity = {_fmt(theory.predicted_k_connectivity(point.alpha, args.k))}",
        f"predicted_min_degree_ge_k = {_fmt(theory.predicted_min_degree_at_least_k(point.alpha, args.k))}",
    ]
    for h in range(args.k):
        lines.append(f"lambda_{h} = {_fmt(theory.poisson_degree_mean(args.n, t, h))}")
    print("\n".join(lines))
    return 0


def _cmd_threshold(args) -> int:
    if not isinstance(args.k, int) or args.k < 1:
        raise ValueError(f"k must be a positive integer, got {args.k!r}")
    if args.k > 1:
        _advise("margin rule for k > 1 extends the plain connectivity design rule")
    k_star = theory.k_star(args.n, args.P, args.q, args.p, k=args.k)
    t_at = args.p * theory.exact_s_probability(k_star, args.P, args.q)
    t_below = (
        args.p * theory.exact_s_probability(k_star - 1, args.P, args.q)
        if k_star - 1 >= args.q
        else 0.0
    )
    margin = (math.log(args.n) + (args.k - 1) * math.log(math.log(args.n))) / args.n
    print(
        "\n".join(
            [
                f"n = {args.n}",
                f"P = {args.P}",
                f"q = {args.q}",
                f"p = {_fmt(args.p)}",
                f"k = {args.k}",
                f"threshold = {_fmt(margin)}",
                f"K_star = {k_star}",
                f"t_below = {_fmt(t_below)}",
                f"t_at = {_fmt(t_at)}",
            ]
        )
    )
    return 0


def _config_from_yaml(path: str) -> ExperimentConfig:
    with open(path) as f:
        raw = yaml.safe_load(f)
    if not isinstance(raw, dict):
        raise ValueError(f"config file {path} must contain a mapping")
    known = {
        "model", "params", "measurements", "master_seed", "trials",
        "k_values", "sweep_field", "sweep_values", "h_max",
    }
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    missing = {"model", "params", "measurements", "master_seed"} - set(raw)
    if missing:
        raise ValueError(f"config file lacks required keys: {sorted(missing)}")
    kwargs = dict(raw)
    kwargs["measurements"] = tuple(kwargs["measurements"])
    if "k_values" in kwargs:
        kwargs["k_values"] = tuple(kwargs["k_values"])
    if kwargs.get("sweep_values") is not None:
        kwargs["sweep_values"] = tuple(kwargs["sweep_values"])
    return ExperimentConfig(**kwargs)


def _cmd_simulate(args) -> int:
    _check_out_dir(args.out)
    if args.config is not None:
        flag_overrides = [
            name for name in ("n", "K", "P", "q", "p", "x", "k", "measurements", "sweep", "trials", "seed")
            if getattr(args, name) is not None
        ]
        if flag_overrides or args.model != "composed":
            conflicting = flag_overrides + ([] if args.model == "composed" else ["model"])
            raise ValueError(
                f"--config is exclusive with model flags; drop {sorted(set(conflicting))}"
            )
        config = _config_from_yaml(args.config)
    else:
        model = _MODEL_ALIASES[args.model]
        params = {
            name: getattr(args, name)
            for name in ("n", "K", "P", "q", "p", "x")
            if getattr(args, name) is not None
        }
        if model in ("composed", "erdos_renyi"):
            params.setdefault("p", 1.0)
        sweep_field, sweep_values = (None, None)
        if args.sweep is not None:
            sweep_field, sweep_values = _parse_sweep(args.sweep)
        if args.measurements is not None:
            measurements = tuple(m.strip() for m in args.measurements.split(","))
        elif model == "coupled_pair":
            measurements = ("coupling_ok", "subgraph_holds")
        else:
            measurements = ("connected",)
        k_values = _parse_int_list(args.k, "--k") if args.k is not None else (1,)
        config = ExperimentConfig(
            model=model,
            params=params,
            measurements=measurements,
            master_seed=_require_seed(args),
            trials=args.trials if args.trials is not None else 500,
            k_values=k_values,
            sweep_field=sweep_field,
            sweep_values=sweep_values,
            h_max=args.h_max,
        )
    if {"n", "K", "P"} <= set(config.params):
        _asymptotic_advisories(config.params["n"], config.params["K"], config.params["P"])
    records, summary = experiments.run(config, workers=args.workers)
    written = _write_outputs(args, config, records, summary)
    if args.plot:
        if config.sweep_values is not None:
            for col in config.columns():
                rows = [r for r in summary if r.measurement == col]
                if rows and all(isinstance(v, float) for v in (r.estimate for r in rows)):
                    png = f"{args.out}.{col}.png"
                    plots.plot_measurement_curve(summary, col, png, title=config.model)
                    written.append(png)
        if "degree_census" in config.measurements:
            png = f"{args.out}.census.png"
            plots.plot_degree_census(summary, png, title=config.model)
            written.append(png)
    for path in written:
        print(path)
    return 0


def _cmd_degree_dist(args) -> int:
    _check_out_dir(args.out)
    ModelParams(n=args.n, K=args.K, P=args.P, q=args.q, p=args.p)  # fail fast
    config = ExperimentConfig(
        model="composed",
        params={"n": args.n, "K": args.K, "P": args.P, "q": args.q, "p": args.p},
        measurements=("degree_census",),
        master_seed=_require_seed(args),
        trials=args.trials,
        h_max=args.h_max,
    )
    records, summary = experiments.run(config, workers=args.workers)
    summary = summary + experiments.census_variance_rows(config, records, summary)
    written = _write_outputs(args, config, records, summary)
    if args.plot:
        png = args.out + ".census.png"
        plots.plot_degree_census(summary, png, title="composed")
        written.append(png)
    for path in written:
        print(path)
    return 0


def _cmd_coupling_check(args) -> int:
    _check_out_dir(args.out)
    ModelParams(n=args.n, K=args.K, P=args.P, q=args.q, p=1.0)  # fail fast
    x = args.x if args.x is not None else theory.coupling_x(args.n, args.K, args.P)
    config = ExperimentConfig(
        model="coupled_pair",
        params={"n": args.n, "K": args.K, "P": args.P, "q": args.q, "x": x},
        measurements=("coupling_ok", "subgraph_holds"),
        master_seed=_require_seed(args),
        trials=args.trials,
    )
    records, summary = experiments.run(config, workers=args.workers)
    written = _write_outputs(args, config, records, summary)
    for path in written:
        print(path)
    return 0


def _cmd_dominance_check(args) -> int:
    _check_out_dir(args.out)
    k_values = _parse_int_list(args.k, "--k")
    summary = experiments.dominance_experiment(
        n=args.n,
        x=args.x,
        P=args.P,
        q=args.q,
        trials=args.trials,
        master_seed=_require_seed(args),
        y=args.y,
        k_values=k_values,
        workers=args.workers,
    )
    echo = _echo_lines(args)
    if args.format == "csv":
        sum_path = args.out + ".summary.csv"
        experiments.write_summary_csv(sum_path, None, summary, extra_header=echo)
    else:
        sum_path = args.out + ".summary.jsonl"
        experiments.write_summary_jsonl(sum_path, None, summary, extra_header=echo)
    print(sum_path)
    return 0


def _dispatch(args) -> int:
    if args.command == "predict":
        return _cmd_predict(args)
    if args.command == "threshold":
        return _cmd_threshold(args)
    if args.command == "simulate":
        return _cmd_simulate(args)
    if args.command == "degree-dist":
        return _cmd_degree_dist(args)
    if args.command == "coupling-check":
        return _cmd_coupling_check(args)
    if args.command == "dominance-check":
        return _cmd_dominance_check(args)
    raise ValueError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except theory.UnsupportedRegimeError as exc:
        print(f"error (unsupported regime): {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error (i/o): {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
