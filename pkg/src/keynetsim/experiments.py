"""Declarative, seeded, parallel Monte Carlo experiments.

An ExperimentConfig names a model, its parameters, an optional one-field
sweep, and a set of measurements. `run` executes trials(s) per sweep point —
serially or across worker processes — and aggregates per-point statistics
with 95% Wilson score intervals, pairing each estimate with the matching
closed-form prediction where one exists.

Reproducibility contract: every trial's randomness is a pure function of
(master_seed, sweep_index, trial_index), so results are byte-identical for
any worker count, and adding sweep points never perturbs existing ones.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict

import numpy as np

from . import theory
from .connectivity import degree_census, is_k_connected
from .graph import Graph, is_connected, min_degree
from .models import (
    ModelParams,
    Seed,
    intersection_graph,
    sample_binomial_rings,
    sample_composed,
    sample_coupled_pair,
    sample_er,
    sample_uniform_rings,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "TrialRecord",
    "SummaryRow",
    "run",
    "coupling_experiment",
    "dominance_experiment",
    "degree_census_experiment",
    "wilson_interval",
    "write_records_csv",
    "write_summary_csv",
    "write_records_jsonl",
    "write_summary_jsonl",
]

MODELS = (
    "composed",
    "uniform_q_intersection",
    "binomial_q_intersection",
    "erdos_renyi",
    "coupled_pair",
)

MEASUREMENTS = (
    "connected",
    "k_connected",
    "min_degree_ge_k",
    "degree_census",
    "edge_count",
    "coupling_ok",
    "subgraph_holds",
)

# params each model needs; x is a first-class param of the binomial model
_REQUIRED_PARAMS = {
    "composed": ("n", "K", "P", "q", "p"),
    "uniform_q_intersection": ("n", "K", "P", "q"),
    "binomial_q_intersection": ("n", "x", "P", "q"),
    "erdos_renyi": ("n", "p"),
    "coupled_pair": ("n", "K", "P", "q"),
}
_OPTIONAL_PARAMS = {"coupled_pair": ("x",)}
_INT_PARAMS = frozenset({"n", "K", "P", "q"})
_GRAPH_MEASUREMENTS = frozenset(
    {"connected", "k_connected", "min_degree_ge_k", "degree_census", "edge_count"}
)

WILSON_Z = 1.959963984540054  # two-sided 95%


class ConfigError(ValueError):
    """Invalid experiment configuration; .fields lists the offenders."""

    def __init__(self, problems: dict[str, str]):
        self.fields = sorted(problems)
        super().__init__(
            "; ".join(f"{name}: {msg}" for name, msg in sorted(problems.items()))
        )


@dataclass(frozen=True)
class ExperimentConfig:
    model: str
    params: dict
    measurements: tuple[str, ...]
    master_seed: int
    trials: int = 500
    k_values: tuple[int, ...] = (1,)
    sweep_field: str | None = None
    sweep_values: tuple | None = None
    h_max: int = 10

    def __post_init__(self):
        object.__setattr__(self, "params", dict(self.params))
        object.__setattr__(self, "measurements", tuple(self.measurements))
        ks = tuple(self.k_values)
        if all(isinstance(k, int) for k in ks):
            ks = tuple(sorted(set(ks)))
        object.__setattr__(self, "k_values", ks)
        if self.sweep_values is not None:
            object.__setattr__(self, "sweep_values", tuple(self.sweep_values))
        self.validate()

    def validate(self) -> None:
        problems: dict[str, str] = {}
        if self.model not in MODELS:
            problems["model"] = f"unknown model {self.model!r}; choose from {MODELS}"
            raise ConfigError(problems)
        required = _REQUIRED_PARAMS[self.model]
        allowed = set(required) | set(_OPTIONAL_PARAMS.get(self.model, ()))
        for name in required:
            if name not in self.params:
                problems[f"params.{name}"] = "required for model " + self.model
        for name in self.params:
            if name not in allowed:
                problems[f"params.{name}"] = f"not a parameter of model {self.model}"
        if not self.measurements:
            problems["measurements"] = "at least one measurement required"
        bad = [m for m in self.measurements if m not in MEASUREMENTS]
        if bad:
            problems["measurements"] = f"unknown: {bad}; choose from {MEASUREMENTS}"
        coupling_only = {"coupling_ok", "subgraph_holds"}
        if self.model == "coupled_pair":
            extra = set(self.measurements) - coupling_only
            if extra:
                problems["measurements"] = (
                    f"coupled_pair supports only {sorted(coupling_only)}, got {sorted(extra)} too"
                )
        else:
            extra = set(self.measurements) & coupling_only
            if extra:
                problems["measurements"] = (
                    f"{sorted(extra)} only apply to the coupled_pair model"
                )
        if not isinstance(self.trials, int) or self.trials < 1:
            problems["trials"] = f"must be a positive integer, got {self.trials!r}"
        if not isinstance(self.master_seed, int) or not 0 <= self.master_seed < 2**64:
            problems["master_seed"] = f"must be a 64-bit unsigned integer, got {self.master_seed!r}"
        if not self.k_values or any(
            not isinstance(k, int) or k < 1 for k in self.k_values
        ):
            problems["k_values"] = f"must be positive integers, got {self.k_values!r}"
        if not isinstance(self.h_max, int) or self.h_max < 0:
            problems["h_max"] = f"must be a non-negative integer, got {self.h_max!r}"
        if (self.sweep_field is None) != (self.sweep_values is None):
            problems["sweep_field"] = "sweep_field and sweep_values must be given together"
        if self.sweep_field is not None and self.sweep_values is not None:
            if self.sweep_field not in _REQUIRED_PARAMS[self.model]:
                problems["sweep_field"] = (
                    f"{self.sweep_field!r} is not a sweepable parameter of {self.model}"
                )
            elif not self.sweep_values:
                problems["sweep_values"] = "must be non-empty"
        if problems:
            raise ConfigError(problems)
        # every effective parameter set must validate before any work starts
        for idx in range(len(self.sweep_values) if self.sweep_values else 1):
            try:
                self.effective_params(idx)
            except (ValueError, TypeError) as exc:
                problems[f"sweep_values[{idx}]"] = str(exc)
        if problems:
            raise ConfigError(problems)

    def effective_params(self, sweep_index: int) -> dict:
        params = dict(self.params)
        if self.sweep_values is not None:
            params[self.sweep_field] = self.sweep_values[sweep_index]
        for name, value in params.items():
            if name in _INT_PARAMS:
                if float(value) != int(value):
                    raise ValueError(f"{name} must be an integer, got {value!r}")
                params[name] = int(value)
            else:
                params[name] = float(value)
        _check_params(self.model, params)
        return params

    def sweep_value_of(self, sweep_index: int):
        return None if self.sweep_values is None else self.sweep_values[sweep_index]

    def columns(self) -> list[str]:
        """Canonical flat measurement columns, stable across runs."""
        cols: list[str] = []
        for m in MEASUREMENTS:
            if m not in self.measurements:
                continue
            if m == "k_connected":
                cols.extend(f"k_connected_{k}" for k in self.k_values)
            elif m == "min_degree_ge_k":
                cols.extend(f"min_degree_ge_{k}" for k in self.k_values)
            elif m == "degree_census":
                cols.extend(f"deg_count_{h}" for h in range(self.h_max + 1))
                cols.append("deg_count_tail")
            else:
                cols.append(m)
        return cols


def _check_params(model: str, params: dict) -> None:
    """Model-specific parameter validation, reusing the samplers' own rules."""
    if model in ("composed", "uniform_q_intersection", "coupled_pair"):
        ModelParams(
            n=params["n"],
            K=params["K"],
            P=params["P"],
            q=params["q"],
            p=params.get("p", 1.0),
        )
        if model == "coupled_pair" and "x" in params:
            if not 0.0 <= params["x"] <= 1.0:
                raise ValueError(f"x must lie in [0, 1], got {params['x']!r}")
    elif model == "binomial_q_intersection":
        if not isinstance(params["n"], int) or params["n"] < 2:
            raise ValueError(f"n must be an integer >= 2, got {params['n']!r}")
        if not isinstance(params["P"], int) or params["P"] < 1:
            raise ValueError(f"P must be a positive integer, got {params['P']!r}")
        if not isinstance(params["q"], int) or params["q"] < 1:
            raise ValueError(f"q must be a positive integer, got {params['q']!r}")
        if not 0.0 <= params["x"] <= 1.0:
            raise ValueError(f"x must lie in [0, 1], got {params['x']!r}")
    elif model == "erdos_renyi":
        if not isinstance(params["n"], int) or params["n"] < 2:
            raise ValueError(f"n must be an integer >= 2, got {params['n']!r}")
        if not 0.0 <= params["p"] <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {params['p']!r}")


@dataclass(frozen=True)
class TrialRecord:
    sweep_value: object
    trial_index: int
    values: tuple


@dataclass(frozen=True)
class SummaryRow:
    sweep_value: object
    measurement: str
    estimate: float
    ci_low: float | None
    ci_high: float | None
    trials: int
    theory_prediction: float | None


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion.

    Chosen over the Wald interval for sane behavior at estimates near 0 or 1,
    which dominate threshold sweeps."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials)) / denom
    # the exact endpoints at the boundary would otherwise pick up rounding dust
    low = 0.0 if successes == 0 else max(0.0, center - half)
    high = 1.0 if successes == trials else min(1.0, center + half)
    return (low, high)


def _sweep_master(master_seed: int, sweep_index: int) -> int:
    """Per-sweep-point 64-bit master seed: sweep points are independent
    streams, so extending a sweep never changes existing points."""
    ss = np.random.SeedSequence([master_seed, sweep_index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _sample_graph(model: str, params: dict, seed: Seed) -> Graph:
    if model == "composed":
        return sample_composed(
            ModelParams(params["n"], params["K"], params["P"], params["q"], params["p"]), seed
        )
    if model == "uniform_q_intersection":
        mp = ModelParams(params["n"], params["K"], params["P"], params["q"], 1.0)
        return intersection_graph(sample_uniform_rings(mp, seed), params["q"])
    if model == "binomial_q_intersection":
        assignment = sample_binomial_rings(params["P"], params["x"], params["n"], seed)
        return intersection_graph(assignment, params["q"])
    if model == "erdos_renyi":
        return sample_er(params["n"], params["p"], seed)
    raise ValueError(f"model {model!r} does not produce a single graph")


def _measure_graph(g: Graph, config: ExperimentConfig) -> dict:
    out: dict[str, object] = {}
    wanted = set(config.measurements)
    mindeg = min_degree(g)
    if "connected" in wanted:
        out["connected"] = is_connected(g)
    if "k_connected" in wanted:
        previous = True
        for k in sorted(config.k_values):
            kc = is_k_connected(g, k)
            # necessary conditions, asserted on every sampled graph
            assert not kc or mindeg >= k, "k-connected graph with min degree < k"
            assert previous or not kc, "k-connectivity must be monotone in k"
            previous = kc
            out[f"k_connected_{k}"] = kc
    if "min_degree_ge_k" in wanted:
        for k in config.k_values:
            out[f"min_degree_ge_{k}"] = mindeg >= k
    if "degree_census" in wanted:
        counts = degree_census(g).counts
        h_max = config.h_max
        for h in range(h_max + 1):
            out[f"deg_count_{h}"] = counts[h] if h < len(counts) else 0
        out["deg_count_tail"] = int(sum(counts[h_max + 1 :]))
    if "edge_count" in wanted:
        out["edge_count"] = g.edge_count()
    return out


def _trial_task(args) -> tuple:
    config, sweep_index, trial_index = args
    params = config.effective_params(sweep_index)
    seed = Seed(_sweep_master(config.master_seed, sweep_index), trial_index)
    if config.model == "coupled_pair":
        x = params.get("x")
        if x is None:
            x = theory.coupling_x(params["n"], params["K"], params["P"])
        mp = ModelParams(params["n"], params["K"], params["P"], params["q"], 1.0)
        uniform, binomial, ok = sample_coupled_pair(mp, x, seed)
        g_uniform = intersection_graph(uniform, params["q"])
        g_binomial = intersection_graph(binomial, params["q"])
        holds = all(g_uniform.has_edge(i, j) for i, j in g_binomial.edges())
        # the subset construction makes containment certain on ok trials
        assert holds or not ok, "coupling_ok trial without edge containment"
        out = {"coupling_ok": ok, "subgraph_holds": holds}
    else:
        g = _sample_graph(config.model, params, seed)
        out = _measure_graph(g, config)
    return tuple(out[c] for c in config.columns())


def run(config: ExperimentConfig, workers: int = 1) -> tuple[list[TrialRecord], list[SummaryRow]]:
    """Execute the experiment; returns (records, summary).

    Trials are the unit of parallelism; aggregation is a deterministic fold
    in (sweep_index, trial_index) order, so any worker count gives identical
    output."""
    if not isinstance(workers, int) or workers < 1:
        raise ValueError(f"workers must be a positive integer, got {workers!r}")
    n_points = len(config.sweep_values) if config.sweep_values is not None else 1
    tasks = [
        (config, si, ti) for si in range(n_points) for ti in range(config.trials)
    ]
    if workers == 1:
        results = [_trial_task(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_trial_task, tasks, chunksize=chunk))
    records = [
        TrialRecord(config.sweep_value_of(si), ti, values)
        for (_, si, ti), values in zip(tasks, results)
    ]
    summary = _summarize(config, records)
    return records, summary


def _summarize(config: ExperimentConfig, records: list[TrialRecord]) -> list[SummaryRow]:
    cols = config.columns()
    n_points = len(config.sweep_values) if config.sweep_values is not None else 1
    rows: list[SummaryRow] = []
    for si in range(n_points):
        sweep_value = config.sweep_value_of(si)
        params = config.effective_params(si)
        # records are laid out sweep-point-major in trial order
        point_records = records[si * config.trials : (si + 1) * config.trials]
        trials = len(point_records)
        for ci, col in enumerate(cols):
            values = [r.values[ci] for r in point_records]
            if all(isinstance(v, (bool, np.bool_)) for v in values):
                successes = sum(bool(v) for v in values)
                estimate = successes / trials
                lo, hi = wilson_interval(successes, trials)
            else:
                data = [float(v) for v in values]
                estimate = math.fsum(data) / trials
                if trials > 1:
                    sd = math.sqrt(
                        math.fsum((v - estimate) ** 2 for v in data) / (trials - 1)
                    )
                    half = WILSON_Z * sd / math.sqrt(trials)
                else:
                    half = 0.0
                lo, hi = estimate - half, estimate + half
            rows.append(
                SummaryRow(
                    sweep_value=sweep_value,
                    measurement=col,
                    estimate=estimate,
                    ci_low=lo,
                    ci_high=hi,
                    trials=trials,
                    theory_prediction=_theory_prediction(config.model, params, col),
                )
            )
    return rows


def _edge_probability(model: str, params: dict) -> float | None:
    """Closed-form link probability t for models where one is defined."""
    try:
        if model == "composed":
            return params["p"] * theory.exact_s_probability(
                params["K"], params["P"], params["q"]
            )
        if model == "uniform_q_intersection":
            return theory.exact_s_probability(params["K"], params["P"], params["q"])
        if model == "erdos_renyi":
            return params["p"]
    except theory.UnsupportedRegimeError:
        return None
    return None


def _theory_prediction(model: str, params: dict, column: str) -> float | None:
    t = _edge_probability(model, params)
    if t is None:
        return None
    n = params["n"]
    if column == "edge_count":
        return n * (n - 1) / 2 * t
    if column.startswith("deg_count_"):
        suffix = column.rsplit("_", 1)[1]
        if suffix == "tail":
            return None
        return theory.poisson_degree_mean(n, t, int(suffix))
    if n < 3:
        return None  # the scaling law needs ln ln n > 0
    if column == "connected":
        return theory.predicted_k_connectivity(theory.scaling_alpha(n, 1, t).alpha, 1)
    if column.startswith("k_connected_"):
        k = int(column.rsplit("_", 1)[1])
        return theory.predicted_k_connectivity(theory.scaling_alpha(n, k, t).alpha, k)
    if column.startswith("min_degree_ge_"):
        k = int(column.rsplit("_", 1)[1])
        return theory.predicted_min_degree_at_least_k(
            theory.scaling_alpha(n, k, t).alpha, k
        )
    return None


# ---------------------------------------------------------------------------
# named experiments


def coupling_experiment(
    params: ModelParams, trials: int, master_seed: int, x: float | None = None, workers: int = 1
) -> list[SummaryRow]:
    """Empirical check that binomial rings nest inside uniform rings.

    Per trial: coupled draw at rate x (default: the closed-form coupling
    rate); records whether every binomial ring fit (coupling_ok) and whether
    the binomial-ring graph's edges all exist in the uniform-ring graph.
    Reports both frequencies; containment is additionally asserted on every
    ok trial."""
    if x is None:
        x = theory.coupling_x(params.n, params.K, params.P)  # may raise regime error
    config = ExperimentConfig(
        model="coupled_pair",
        params={"n": params.n, "K": params.K, "P": params.P, "q": params.q, "x": x},
        measurements=("coupling_ok", "subgraph_holds"),
        master_seed=master_seed,
        trials=trials,
    )
    _, summary = run(config, workers=workers)
    return summary


def dominance_experiment(
    n: int,
    x: float,
    P: int,
    q: int,
    trials: int,
    master_seed: int,
    y: float | None = None,
    k_values: tuple[int, ...] = (1,),
    workers: int = 1,
) -> list[SummaryRow]:
    """Statistical dominance check: monotone properties should be at least
    as probable under the binomial-ring graph as under an Erdos-Renyi graph
    with the matched edge rate y.

    There is no constructive joint sampling for this direction, so the two
    models are sampled independently and the paired difference of each
    property frequency is reported with a combined-normal interval."""
    if y is None:
        y = theory.coupling_y(P, x, q)
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"derived edge rate y={y!r} outside [0, 1]")
    measurements = ("connected", "min_degree_ge_k")
    cfg_h = ExperimentConfig(
        model="binomial_q_intersection",
        params={"n": n, "x": x, "P": P, "q": q},
        measurements=measurements,
        master_seed=master_seed,
        trials=trials,
        k_values=k_values,
    )
    cfg_e = ExperimentConfig(
        model="erdos_renyi",
        params={"n": n, "p": y},
        measurements=measurements,
        master_seed=master_seed,
        trials=trials,
        k_values=k_values,
    )
    _, sum_h = run(cfg_h, workers=workers)
    _, sum_e = run(cfg_e, workers=workers)
    rows: list[SummaryRow] = []
    for row_h, row_e in zip(sum_h, sum_e):
        assert row_h.measurement == row_e.measurement
        rows.append(
            SummaryRow(None, f"{row_h.measurement}_hq", row_h.estimate,
                       row_h.ci_low, row_h.ci_high, row_h.trials, None)
        )
        rows.append(
            SummaryRow(None, f"{row_e.measurement}_er", row_e.estimate,
                       row_e.ci_low, row_e.ci_high, row_e.trials, row_e.theory_prediction)
        )
        diff = row_h.estimate - row_e.estimate
        se = math.sqrt(
            row_h.estimate * (1 - row_h.estimate) / row_h.trials
            + row_e.estimate * (1 - row_e.estimate) / row_e.trials
        )
        rows.append(
            SummaryRow(None, f"{row_h.measurement}_diff", diff,
                       diff - WILSON_Z * se, diff + WILSON_Z * se, row_h.trials, None)
        )
    return rows


def census_variance_rows(
    config: ExperimentConfig, records: list[TrialRecord], summary: list[SummaryRow]
) -> list[SummaryRow]:
    """Sample variance of each deg_count_h column across trials. In the
    Poisson limit the variance matches the mean, so the theory column repeats
    the predicted mean for direct comparison."""
    cols = config.columns()
    rows: list[SummaryRow] = []
    for ci, col in enumerate(cols):
        if not col.startswith("deg_count_") or col == "deg_count_tail":
            continue
        data = [float(r.values[ci]) for r in records]
        mean = math.fsum(data) / len(data)
        var = (
            math.fsum((v - mean) ** 2 for v in data) / (len(data) - 1)
            if len(data) > 1
            else 0.0
        )
        h = int(col.rsplit("_", 1)[1])
        rows.append(
            SummaryRow(
                sweep_value=None,
                measurement=f"deg_var_{h}",
                estimate=var,
                ci_low=None,
                ci_high=None,
                trials=len(data),
                theory_prediction=summary[ci].theory_prediction,
            )
        )
    return rows


def degree_census_experiment(
    params: ModelParams, h_max: int, trials: int, master_seed: int, workers: int = 1
) -> list[SummaryRow]:
    """Mean (and variance) of the count of degree-h nodes, h <= h_max, next
    to the limiting Poisson mean — for which variance ≈ mean as well."""
    config = ExperimentConfig(
        model="composed",
        params={"n": params.n, "K": params.K, "P": params.P, "q": params.q, "p": params.p},
        measurements=("degree_census",),
        master_seed=master_seed,
        trials=trials,
        h_max=h_max,
    )
    records, summary = run(config, workers=workers)
    return summary + census_variance_rows(config, records, summary)


# ---------------------------------------------------------------------------
# serialization

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.9g}"


def _config_header_lines(config: ExperimentConfig) -> list[str]:
    lines = [f"# model={config.model}"]
    for name in ("n", "K", "P", "q", "p", "x"):
        if name in config.params:
            lines.append(f"# params.{name}={_fmt(config.params[name])}")
    if config.sweep_field is not None:
        lines.append(f"# sweep_field={config.sweep_field}")
        lines.append(
            "# sweep_values=" + ",".join(_fmt(v) for v in config.sweep_values)
        )
    lines.append("# k_values=" + ",".join(str(k) for k in config.k_values))
    lines.append(f"# trials={config.trials}")
    lines.append(f"# master_seed={config.master_seed}")
    lines.append("# measurements=" + ",".join(config.measurements))
    if "degree_census" in config.measurements:
        lines.append(f"# h_max={config.h_max}")
    return lines


def write_records_csv(path, config: ExperimentConfig, records, extra_header=()) -> None:
    cols = config.columns()
    lines = _config_header_lines(config)
    lines.extend(extra_header)
    lines.append("sweep_value,trial_index," + ",".join(cols))
    for r in records:
        lines.append(
            ",".join([_fmt(r.sweep_value), str(r.trial_index)] + [_fmt(v) for v in r.values])
        )
    _write_atomic(path, "\n".join(lines) + "\n")


def write_summary_csv(path, config: ExperimentConfig | None, summary, extra_header=()) -> None:
    lines = _config_header_lines(config) if config is not None else []
    lines.extend(extra_header)
    lines.append("sweep_value,measurement,estimate,ci_low,ci_high,trials,theory_prediction")
    for row in summary:
        lines.append(
            ",".join(
                [
                    _fmt(row.sweep_value),
                    row.measurement,
                    _fmt(row.estimate),
                    _fmt(row.ci_low),
                    _fmt(row.ci_high),
                    str(row.trials),
                    _fmt(row.theory_prediction),
                ]
            )
        )
    _write_atomic(path, "\n".join(lines) + "\n")


def _jsonable(v):
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    return float(v)


def write_records_jsonl(path, config: ExperimentConfig, records, extra_header=()) -> None:
    cols = config.columns()
    meta = {"config": {k: _jsonable_tree(v) for k, v in asdict(config).items()}}
    if extra_header:
        meta["invocation"] = list(extra_header)
    lines = [json.dumps(meta, sort_keys=True)]
    for r in records:
        obj = {"sweep_value": _jsonable(r.sweep_value), "trial_index": r.trial_index}
        obj.update({c: _jsonable(v) for c, v in zip(cols, r.values)})
        lines.append(json.dumps(obj, sort_keys=True))
    _write_atomic(path, "\n".join(lines) + "\n")


def write_summary_jsonl(path, config, summary, extra_header=()) -> None:
    lines = []
    meta = {}
    if config is not None:
        meta["config"] = {k: _jsonable_tree(v) for k, v in asdict(config).items()}
    if extra_header:
        meta["invocation"] = list(extra_header)
    if meta:
        lines.append(json.dumps(meta, sort_keys=True))
    for row in summary:
        lines.append(
            json.dumps(
                {
                    "sweep_value": _jsonable(row.sweep_value),
                    "measurement": row.measurement,
                    "estimate": _jsonable(row.estimate),
                    "ci_low": _jsonable(row.ci_low),
                    "ci_high": _jsonable(row.ci_high),
                    "trials": row.trials,
                    "theory_prediction": _jsonable(row.theory_prediction),
                },
                sort_keys=True,
            )
        )
    _write_atomic(path, "\n".join(lines) + "\n")


def _jsonable_tree(v):
    if isinstance(v, dict):
        return {k: _jsonable_tree(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable_tree(x) for x in v]
    return _jsonable(v)


def _write_atomic(path, text: str) -> None:
    """Write whole file or nothing: no partial output on failure."""
    path = os.fspath(path)
    tmp = path + ".tmp"
    with open(tmp, "w") as f:
        f.write(text)
    os.replace(tmp, path)
