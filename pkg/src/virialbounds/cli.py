"""Command-line frontend.

Subcommands: radii (radius table over a beta grid), verify (combinatorial
and identity checks), mayer (Monte Carlo coefficient vs. its bounds),
stability (constant estimates plus inequality checks), gfun (gain and
tree-function tables).  Options come from a JSON config file and/or flags;
flags win.  Reports are CSV or JSON with floats printed to 17 significant
digits, and are byte-identical for a fixed config and seed regardless of
the worker count.  Exit codes: 0 success, 1 validation error, 2 a
verification check found a counterexample, 3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis, cluster, graphs
from .errors import CapacityError, TemperednessError, UnsupportedPotentialError
from .potentials import (
    PairPotential,
    hard_sphere,
    lennard_jones,
    potential_from_config,
    square_well,
)
from .stability import check_stability_inequalities, estimate_stability
from .util import ordered_map, spawned_rng

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_COUNTEREXAMPLE = 2
EXIT_CAPACITY = 3

COLUMNS = {
    "radii": [
        "beta", "stability_b", "basuev_bbar", "bbar_is_upper_bound",
        "c_integral", "c_error", "ctilde_integral", "ctilde_error",
        "gain_unit", "gain_lp", "mayer_radius", "lp_radius",
        "virial_radius", "ratio_virial_to_lp",
    ],
    "verify": ["check", "n", "trials", "status", "metric", "value", "threshold", "detail"],
    "mayer": [
        "beta", "n", "box_side", "dimension", "samples", "seed",
        "estimate", "std_error", "abs_estimate",
        "bound_tree_basuev", "bound_tree_stability", "bound_penrose_ruelle",
        "status",
    ],
    "stability": [
        "kind", "n", "dimension", "b_n", "bbar_n", "best_energy",
        "metric", "value", "threshold", "status",
    ],
    "gfun": ["kind", "input", "value"],
}


# -- formatting and IO ---------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    if value is None:
        return ""
    return str(value)


def _write_report(command: str, rows: list[dict], out: str | None, fmt: str) -> None:
    columns = COLUMNS[command]
    if fmt == "csv":
        lines = [",".join(columns)]
        lines.extend(",".join(_fmt(row.get(c)) for c in columns) for row in rows)
        text = "\n".join(lines) + "\n"
    else:
        payload = {"command": command, "columns": columns, "rows": rows}
        text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=True) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _render_plot(command: str, rows: list[dict], out: str | None) -> None:
    if out is None:
        raise ValueError("--plot needs --out to place the figure next to the report")
    from . import figures

    path = str(Path(out).with_suffix(".png"))
    render = {
        "radii": figures.render_radii,
        "mayer": figures.render_mayer,
        "stability": figures.render_stability,
        "gfun": figures.render_gfun,
    }.get(command)
    if render is None:
        print(f"note: no figure defined for {command!r}", file=sys.stderr)
        return
    render(rows, path)


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config file must hold a JSON object")
    return cfg


def _opt(args, cfg: dict, key: str, default=None):
    value = getattr(args, key, None)
    if value is not None:
        return value
    return cfg.get(key, default)


def _parse_floats(text) -> list[float]:
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    return [float(tok) for tok in str(text).split(",") if tok.strip()]


def _parse_ints(text) -> list[int]:
    if isinstance(text, int):
        return [text]
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    return [int(tok) for tok in str(text).split(",") if tok.strip()]


def _potential(args, cfg: dict) -> PairPotential:
    if getattr(args, "potential", None) is not None:
        return potential_from_config({"kind": args.potential})
    if "potential" in cfg:
        return potential_from_config(cfg["potential"])
    raise ValueError("no potential given (use --potential or a config file)")


def _betas(args, cfg: dict, default=(1.0,)) -> list[float]:
    betas = _parse_floats(_opt(args, cfg, "beta", list(default)))
    if not betas:
        raise ValueError("empty beta list")
    for b in betas:
        if not b > 0.0:
            raise ValueError(f"inverse temperature must be positive, got {b}")
    return betas


def _random_config(rng, n: int, d: int, scale: float) -> cluster.Configuration:
    return cluster.Configuration(rng.normal(0.0, scale, size=(n, d)))


# -- commands -------------------------------------------------------------------

def cmd_radii(args) -> int:
    cfg = _load_config(args.config)
    pot = _potential(args, cfg)
    betas = _betas(args, cfg)
    workers = int(_opt(args, cfg, "workers", 1))
    rows = [
        r.as_dict()
        for r in ordered_map(lambda b: analysis.build_radii_report(pot, b), betas, workers)
    ]
    fmt = _opt(args, cfg, "format", "csv")
    out = _opt(args, cfg, "out")
    _write_report("radii", rows, out, fmt)
    if args.plot:
        _render_plot("radii", rows, out)
    return EXIT_OK


_VERIFY_FIXTURES = (
    (lennard_jones, 0.5),
    (square_well, 1.0),
    (hard_sphere, 1.0),
)


def _weight_vectors(n: int, trials: int, seed: int):
    """Deterministic weight-vector schedule: ties and +inf first, then noise."""
    m = graphs.num_edges(n)
    specials = [
        [1.0] * m,
        [math.inf if k % 3 == 0 else float(k % 4) for k in range(m)],
    ]
    for t in range(trials):
        if t < len(specials):
            yield specials[t]
            continue
        rng = spawned_rng(seed, (n, t))
        w = rng.uniform(-1.0, 1.0, size=m)
        if t % 3 == 2:
            w = np.round(w, 1)  # heavy ties
        yield list(w)


def cmd_verify(args) -> int:
    cfg = _load_config(args.config)
    n_max = int(_opt(args, cfg, "n_max", 5))
    trials = int(_opt(args, cfg, "trials", 100))
    seed = int(_opt(args, cfg, "seed", 0))
    workers = int(_opt(args, cfg, "workers", 1))
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    rows: list[dict] = []

    # partition-scheme checks (exhaustive per weight vector)
    for n in range(2, n_max + 1):
        if n > graphs.MAX_GRAPH_VERTICES:
            rows.append({
                "check": "partition_scheme", "n": n, "trials": 0, "status": "skipped",
                "metric": "exhaustive_cap", "value": float(graphs.MAX_GRAPH_VERTICES),
                "threshold": float(graphs.MAX_GRAPH_VERTICES),
                "detail": f"exhaustive scans stop at n={graphs.MAX_GRAPH_VERTICES}",
            })
            continue
        budget = trials if n <= 5 else min(trials, 5)
        failures = []
        count = 0
        interval_sum = None
        for w in _weight_vectors(n, budget, seed):
            order = graphs.build_edge_order(n, w)
            report = graphs.verify_partition(n, order)
            count += 1
            interval_sum = report.interval_count_sum
            if not report.passed:
                failures.append(report.first_counterexample)
                break
        expected = float(len(graphs.connected_graph_masks(n)))
        rows.append({
            "check": "partition_scheme", "n": n, "trials": count,
            "status": "fail" if failures else "pass",
            "metric": "interval_count",
            "value": float(interval_sum) if interval_sum is not None else math.nan,
            "threshold": expected,
            "detail": failures[0] if failures else "",
        })

    # tree counts
    for n in range(2, min(n_max, graphs.MAX_TREE_VERTICES) + 1):
        count = len(graphs.tree_edge_sets(n))
        expected = n ** (n - 2)
        rows.append({
            "check": "tree_count", "n": n, "trials": 1,
            "status": "pass" if count == expected else "fail",
            "metric": "count", "value": float(count), "threshold": float(expected),
            "detail": "",
        })

    # tree-sum identity trials
    for fid, (factory, beta) in enumerate(_VERIFY_FIXTURES):
        pot = factory()
        for n in range(2, min(n_max, graphs.MAX_GRAPH_VERTICES) + 1):

            def one_dev(t: int, n=n, pot=pot, beta=beta, fid=fid) -> float:
                rng = spawned_rng(seed, (fid, n, t))
                config = _random_config(rng, n, pot.dimension, 1.2)
                direct = cluster.ursell_direct(pot, beta, config)
                tree = cluster.penrose_tree_sum(pot, beta, config)
                return abs(direct - tree) / max(1.0, abs(direct))

            devs = ordered_map(one_dev, range(trials), workers)
            worst = max(devs, default=0.0)
            rows.append({
                "check": "tree_sum_identity", "n": n, "trials": trials,
                "status": "pass" if worst <= 1e-9 else "fail",
                "metric": "max_rel_deviation", "value": worst, "threshold": 1e-9,
                "detail": f"{pot.name} beta={beta}",
            })
        if n_max > graphs.MAX_GRAPH_VERTICES:
            rows.append({
                "check": "tree_sum_identity", "n": n_max, "trials": 0,
                "status": "skipped", "metric": "exhaustive_cap",
                "value": float(graphs.MAX_GRAPH_VERTICES),
                "threshold": float(graphs.MAX_GRAPH_VERTICES),
                "detail": f"{pot.name}: direct graph sum stops at n={graphs.MAX_GRAPH_VERTICES}",
            })

    # per-tree stability gap trials
    for fid, (factory, _) in enumerate(_VERIFY_FIXTURES):
        pot = factory()
        for n in range(2, min(n_max, graphs.MAX_GRAPH_VERTICES) + 1):
            budget = trials if n <= 5 else max(0, trials // 10)

            def one_gap(t: int, n=n, pot=pot, fid=fid) -> float:
                rng = spawned_rng(seed, (100 + fid, n, t))
                config = _random_config(rng, n, pot.dimension, 1.2)
                return cluster.scheme_stability_gap_min(pot, config)

            gaps = ordered_map(one_gap, range(budget), workers)
            worst = min(gaps, default=math.inf)
            threshold = -1e-12 * (n - 1) * (pot.known_bbar or 0.0)
            rows.append({
                "check": "scheme_stability_gap", "n": n, "trials": budget,
                "status": "pass" if worst >= threshold else "fail",
                "metric": "min_gap", "value": worst, "threshold": threshold,
                "detail": pot.name,
            })

    fmt = _opt(args, cfg, "format", "csv")
    out = _opt(args, cfg, "out")
    _write_report("verify", rows, out, fmt)
    failed = any(r["status"] == "fail" for r in rows)
    return EXIT_COUNTEREXAMPLE if failed else EXIT_OK


def cmd_mayer(args) -> int:
    cfg = _load_config(args.config)
    pot = _potential(args, cfg)
    betas = _betas(args, cfg)
    n = int(_opt(args, cfg, "n", 2))
    box_side = float(_opt(args, cfg, "box_side", 20.0))
    samples = int(_opt(args, cfg, "samples", 100000))
    seed = int(_opt(args, cfg, "seed", 0))
    workers = int(_opt(args, cfg, "workers", 1))
    if pot.known_b is None:
        raise UnsupportedPotentialError(f"potential {pot.name!r} is missing known_b")
    if pot.known_bbar is None:
        raise UnsupportedPotentialError(f"potential {pot.name!r} is missing known_bbar")
    if n > graphs.MAX_GRAPH_VERTICES:
        raise CapacityError(
            f"coefficient estimation supports n <= {graphs.MAX_GRAPH_VERTICES}, got {n}"
        )
    box = cluster.Box(side=box_side, dimension=pot.dimension)
    rows = []
    for beta in betas:
        est = cluster.mayer_coefficient_mc(pot, beta, n, box, samples, seed, workers)
        ct = analysis.integral_Ctilde(pot, beta).value
        cc = analysis.integral_C(pot, beta).value
        bounds = {
            "bound_tree_basuev": cluster.bound_tree_basuev(n, beta, pot.known_bbar, ct),
            "bound_tree_stability": cluster.bound_tree_stability(n, beta, pot.known_b, ct),
            "bound_penrose_ruelle": cluster.bound_penrose_ruelle(n, beta, pot.known_b, cc),
        }
        floor = abs(est.estimate) - 3.0 * est.std_error
        ok = all(floor <= b for b in bounds.values())
        rows.append({
            "beta": beta, "n": n, "box_side": box_side, "dimension": pot.dimension,
            "samples": est.samples, "seed": seed,
            "estimate": est.estimate, "std_error": est.std_error,
            "abs_estimate": abs(est.estimate),
            **bounds,
            "status": "pass" if ok else "fail",
        })
    fmt = _opt(args, cfg, "format", "csv")
    out = _opt(args, cfg, "out")
    _write_report("mayer", rows, out, fmt)
    if args.plot:
        _render_plot("mayer", rows, out)
    failed = any(r["status"] == "fail" for r in rows)
    return EXIT_COUNTEREXAMPLE if failed else EXIT_OK


def cmd_stability(args) -> int:
    cfg = _load_config(args.config)
    pot = _potential(args, cfg)
    n_list = _parse_ints(_opt(args, cfg, "n_list", [2, 3, 4]))
    dimension = _opt(args, cfg, "dimension")
    dimension = int(dimension) if dimension is not None else pot.dimension
    starts = int(_opt(args, cfg, "starts", 8))
    seed = int(_opt(args, cfg, "seed", 0))
    trials = int(_opt(args, cfg, "trials", 2000))
    workers = int(_opt(args, cfg, "workers", 1))
    estimates = tuple(
        estimate_stability(pot, n, dimension, starts=starts, seed=seed, workers=workers)
        for n in n_list
    )
    rows = [
        {
            "kind": "estimate", "n": e.n, "dimension": e.dimension,
            "b_n": e.b_n, "bbar_n": e.bbar_n, "best_energy": e.best_energy,
            "metric": "", "value": None, "threshold": None, "status": "",
        }
        for e in estimates
    ]
    check_failed = False
    if pot.known_b is not None and pot.known_bbar is not None:
        report = check_stability_inequalities(pot, estimates, trials=trials, seed=seed)
        check_failed = not report.passed
        for metric, value, threshold in [
            ("violations_b", float(report.violations_b), 0.0),
            ("violations_bbar", float(report.violations_bbar), 0.0),
            ("min_slack_b", report.min_slack_b, 0.0),
            ("min_slack_bbar", report.min_slack_bbar, 0.0),
        ]:
            rows.append({
                "kind": "check", "n": None, "dimension": dimension,
                "b_n": None, "bbar_n": None, "best_energy": None,
                "metric": metric, "value": value, "threshold": threshold,
                "status": "pass" if not check_failed else "fail",
            })
        for metric, flag in [
            ("cap_general", report.cap_general_ok),
            ("cap_well_form", report.cap_well_form_ok),
        ]:
            rows.append({
                "kind": "check", "n": None, "dimension": dimension,
                "b_n": None, "bbar_n": None, "best_energy": None,
                "metric": metric, "value": None, "threshold": None,
                "status": "skipped" if flag is None else ("pass" if flag else "fail"),
            })
    else:
        rows.append({
            "kind": "check", "n": None, "dimension": dimension,
            "b_n": None, "bbar_n": None, "best_energy": None,
            "metric": "inequalities", "value": None, "threshold": None,
            "status": "skipped",
        })
    fmt = _opt(args, cfg, "format", "csv")
    out = _opt(args, cfg, "out")
    _write_report("stability", rows, out, fmt)
    if args.plot:
        _render_plot("stability", rows, out)
    return EXIT_COUNTEREXAMPLE if check_failed else EXIT_OK


_DEFAULT_U_GRID = "1,10,100,1000,10000,100000,1000000,10000000,100000000"
_DEFAULT_X_GRID = "0,0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.36787944117144233"


def cmd_gfun(args) -> int:
    cfg = _load_config(args.config)
    us = _parse_floats(_opt(args, cfg, "u_grid", _DEFAULT_U_GRID))
    xs = _parse_floats(_opt(args, cfg, "x_grid", _DEFAULT_X_GRID))
    rows = [{"kind": "gain", "input": u, "value": analysis.lp_gain(u)} for u in us]
    rows.extend(
        {"kind": "tree_function", "input": x, "value": analysis.tree_function(x)}
        for x in xs
    )
    fmt = _opt(args, cfg, "format", "csv")
    out = _opt(args, cfg, "out")
    _write_report("gfun", rows, out, fmt)
    if args.plot:
        _render_plot("gfun", rows, out)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------

def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON config file")
    sub.add_argument("--out", help="output path (stdout when omitted)")
    sub.add_argument("--format", choices=("csv", "json"), dest="format")
    sub.add_argument("--workers", type=int, help="worker threads (default 1)")
    sub.add_argument("--plot", action="store_true", help="render a figure next to --out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="virialbounds",
        description="Convergence-radius bounds for Mayer and virial series",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("radii", help="radius table over a beta grid")
    _add_common(p)
    p.add_argument("--potential", help="catalog potential kind with default parameters")
    p.add_argument("--beta", help="comma-separated inverse temperatures")
    p.set_defaults(func=cmd_radii)

    p = subs.add_parser("verify", help="partition-scheme and identity checks")
    _add_common(p)
    p.add_argument("--n-max", dest="n_max", type=int, help="largest vertex count (default 5)")
    p.add_argument("--trials", type=int, help="random trials per check (default 100)")
    p.add_argument("--seed", type=int, help="base seed (default 0)")
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("mayer", help="Monte Carlo coefficient and its bounds")
    _add_common(p)
    p.add_argument("--potential")
    p.add_argument("--beta")
    p.add_argument("--n", type=int, help="coefficient order (default 2)")
    p.add_argument("--box-side", dest="box_side", type=float, help="box side (default 20)")
    p.add_argument("--samples", type=int, help="Monte Carlo samples (default 1e5)")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_mayer)

    p = subs.add_parser("stability", help="stability-constant estimates and checks")
    _add_common(p)
    p.add_argument("--potential")
    p.add_argument("--n-list", dest="n_list", help="comma-separated n values")
    p.add_argument("--dimension", type=int)
    p.add_argument("--starts", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.set_defaults(func=cmd_stability)

    p = subs.add_parser("gfun", help="tabulate the gain and tree functions")
    _add_common(p)
    p.add_argument("--u-grid", dest="u_grid", help="comma-separated gain arguments")
    p.add_argument("--x-grid", dest="x_grid", help="comma-separated tree-function arguments")
    p.set_defaults(func=cmd_gfun)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (
        UnsupportedPotentialError,
        TemperednessError,
        ValueError,
        OSError,
        json.JSONDecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
