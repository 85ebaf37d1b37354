"""Command-line surface.

Subcommands::

    miles       mile requirements per method, single point or scenario grid
    confidence  posterior confidence for given evidence and claim
    compensate  extra-miles-after-one-failure curve with reference lines
    oracle      brute-force check of the worst-case bound
    ingest      expand a monthly report CSV into inter-failure miles
    srgm        fit growth models, roll predictions, score and recalibrate
    evaluate    u-plots / recalibration / PLR from saved prediction records

Global flags ``--seed``, ``--out``, ``--format``, ``--config`` precede the
subcommand.  ``RELIAB_LOG`` in the environment sets the log level.  CSV is
the canonical output; SVG charts are deterministic functions of the CSVs.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import baselines, cbi, evaluation, oracle, render
from .config import DEFAULT_MIN_FIT, DEFAULT_ROLLING_START, DEFAULT_SEED, DEFAULT_WARMUP
from .disengagements import (
    expand_to_interfailure,
    parse_monthly_csv,
    read_interfailure_csv,
    waymo_fixture_path,
    write_interfailure_csv,
)
from .errors import ReliabilityError
from .srgm import SrgmKind, rolling_predictions

logger = logging.getLogger("avreliability")

SRGM_CAVEAT = (
    "note: growth-model forecasts extrapolate past disengagement trends; "
    "they are not evidence that a safety requirement is met, and say "
    "nothing about behaviour after the latest software change."
)


def _scenario_config(name: str) -> dict:
    path = resources.files("avreliability").joinpath(f"data/scenarios/{name}.json")
    with path.open("r", encoding="utf-8") as handle:
        return json.load(handle)


def _constraints_from(args, config: dict | None, theta: float | None = None):
    if config is not None:
        c = config["constraints"]
        return cbi.PriorConstraints(
            epsilon=c["epsilon"], theta=theta if theta is not None else c["theta"], p_l=c["p_l"]
        )
    return cbi.PriorConstraints(
        epsilon=args.epsilon,
        theta=theta if theta is not None else args.theta,
        p_l=args.p_l,
    )


def _write_csv(path: Path, header: list, rows: list) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)
    logger.info("wrote %s", path)


def _required_for(method: str, constraints, k: int, claim, column: dict | None = None):
    if method == "cbi":
        return cbi.required_miles(constraints, k, claim)
    if method == "beta-uniform":
        return baselines.beta_required_miles(baselines.uniform_prior(), k, claim)
    if method == "beta-jeffreys":
        return baselines.beta_required_miles(baselines.jeffreys_prior(), k, claim)
    if method == "rand-power":
        if column is None or "rand_true_rate" not in column:
            raise ReliabilityError("rand-power needs true-rate and bound parameters")
        return baselines.rand_power_miles(
            column["rand_true_rate"], column["rand_bound"], claim.c
        )
    if method == "classical":
        if k == 0:
            return baselines.classical_failure_free_miles(claim)
        if column is not None and "rand_true_rate" in column:
            return baselines.rand_power_miles(
                column["rand_true_rate"], column["rand_bound"], claim.c
            )
        return None  # no classical method is pinned for k > 0 without power parameters
    raise ReliabilityError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_miles(args, out: Path) -> int:
    if args.scenario or args.config:
        if args.config:
            with open(args.config, "r", encoding="utf-8") as handle:
                config = json.load(handle)
        else:
            config = _scenario_config(args.scenario)
        if config["kind"] == "table":
            return _miles_table(args, out, config)
        if config["kind"] == "compensation":
            raise ReliabilityError("use the compensate subcommand for compensation scenarios")
        return _miles_curve(args, out, config)
    # single-point query
    constraints = None
    if args.method in ("cbi",):
        constraints = _constraints_from(args, None)
    claim = cbi.ReliabilityClaim(args.p, args.c)
    value = _required_for(args.method, constraints, args.k, claim, None)
    if value is None:
        print("not reproduced (no classical method pinned for k > 0)")
        return 1
    print(f"{value:.6g}")
    rows = [[args.method, args.p, args.k, repr(float(value)), ""]]
    if args.format in ("csv", "both"):
        _write_csv(out / "miles.csv", ["method", "p", "k", "miles", "note"], rows)
    return 0


def _miles_table(args, out: Path, config: dict) -> int:
    c = config["confidence"]
    rows = []
    for method in config["methods"]:
        for col in config["columns"]:
            constraints = _constraints_from(args, config)
            claim = cbi.ReliabilityClaim(col["p"], c)
            value = _required_for(method, constraints, col["k"], claim, col)
            note = ""
            if value is None:
                note = "not reproduced (method unstated for failure counts)"
            rows.append(
                [method, col["p"], col["k"], "" if value is None else repr(float(value)), note]
            )
    header = ["method", "p", "k", "miles", "note"]
    for row in rows:
        print(",".join(str(v) for v in row))
    if args.format in ("csv", "both"):
        _write_csv(out / "miles.csv", header, rows)
    return 0


def _miles_curve(args, out: Path, config: dict) -> int:
    c = config["confidence"]
    k = config.get("k", 0)
    grid_spec = config["p_grid"]
    grid = np.geomspace(grid_spec["lo"], grid_spec["hi"], grid_spec["points"])
    header = ["p"] + [s["label"] for s in config["series"]]
    rows = []
    for p in grid:
        row = [repr(float(p))]
        for series in config["series"]:
            constraints = _constraints_from(args, config, theta=series.get("theta"))
            claim = cbi.ReliabilityClaim(float(p), c)
            try:
                value = _required_for(series["method"], constraints, k, claim, None)
            except ReliabilityError:
                value = None
            row.append("" if value is None else repr(float(value)))
        rows.append(row)
    csv_path = out / "miles.csv"
    _write_csv(csv_path, header, rows)
    if args.format in ("svg", "both"):
        render.render_csv_chart(
            csv_path,
            out / "miles.svg",
            title=config.get("title", ""),
            x_label="claimed bound p (per mile)",
            y_label="miles required",
            logx=True,
            logy=True,
        )
    return 0


def cmd_confidence(args, out: Path) -> int:
    obs = cbi.Observation(args.k, args.n)
    if args.method == "cbi":
        constraints = _constraints_from(args, None)
        value = cbi.worst_case_posterior_confidence(constraints, obs, args.p)
    elif args.method == "beta-uniform":
        value = baselines.beta_posterior_confidence(baselines.uniform_prior(), obs, args.p)
    elif args.method == "beta-jeffreys":
        value = baselines.beta_posterior_confidence(baselines.jeffreys_prior(), obs, args.p)
    else:
        raise ReliabilityError(f"unknown method {args.method!r}")
    print(f"{value:.12g}")
    if args.format in ("csv", "both"):
        _write_csv(
            out / "confidence.csv",
            ["method", "p", "k", "n", "confidence"],
            [[args.method, args.p, args.k, args.n, repr(float(value))]],
        )
    return 0


def cmd_compensate(args, out: Path) -> int:
    config = _scenario_config(args.scenario) if args.scenario else None
    constraints = _constraints_from(args, config)
    c = config["confidence"] if config else args.c
    if config:
        spec = config["n1_grid"]
        grid = np.geomspace(spec["lo"], spec["hi"], spec["points"])
    else:
        grid = np.geomspace(args.n1_lo, args.n1_hi, args.points)
    rows = []
    for n1 in grid:
        try:
            r = cbi.compensation_miles(constraints, float(n1), c)
            rows.append([repr(float(n1)), repr(r.p_supported), repr(r.n_tilde), repr(r.n2)])
        except ReliabilityError:
            rows.append([repr(float(n1)), "", "", ""])
    csv_path = out / "compensate.csv"
    _write_csv(csv_path, ["n1", "p_supported", "n_tilde", "n2"], rows)
    balance = cbi.n_star(constraints)
    crossover = cbi.p_star(constraints, c)
    asymptote = 1.0 / constraints.epsilon
    print(f"balance miles n*: {balance:.6g}")
    print(f"crossover claim p*: {crossover:.6g}")
    print(f"large-n1 ceiling 1/epsilon: {asymptote:.6g}")
    if args.format in ("svg", "both"):
        header, data = render.read_table(csv_path)
        svg = render.line_chart(
            header[:1] + ["n2"],
            data[:, [0, 3]],
            title="Extra fatality-free miles after one failure",
            x_label="fatality-free miles before the failure (n1)",
            y_label="extra miles needed (n2)",
            logx=True,
            logy=True,
            vlines=((balance, f"n* = {balance:.3g} (p* = {crossover:.3g})"),),
            hlines=((asymptote, f"1/epsilon = {asymptote:.3g}"),),
        )
        with open(out / "compensate.svg", "w", encoding="utf-8", newline="\n") as handle:
            handle.write(svg)
    return 0


def cmd_oracle(args, out: Path) -> int:
    constraints = _constraints_from(args, None)
    obs = cbi.Observation(args.k, args.n)
    bound = cbi.worst_case_posterior_confidence(constraints, obs, args.p)
    minimum, prior = oracle.minimize_over_feasible_priors(
        constraints, obs, args.p, grid_size=args.grid_size, n_random=args.samples, seed=args.seed
    )
    print(f"analytic worst-case bound: {bound:.12g}")
    print(f"grid-search minimum:       {minimum:.12g}")
    print(f"difference (grid - bound): {minimum - bound:.3g}")
    if args.format in ("csv", "both"):
        rows = [[repr(x), repr(m)] for x, m in zip(prior.support, prior.masses)]
        _write_csv(out / "oracle_minimizer.csv", ["support", "mass"], rows)
    return 0


def cmd_ingest(args, out: Path) -> int:
    records = parse_monthly_csv(args.data)
    history = expand_to_interfailure(records, seed=args.seed)
    path = out / "interfailure.csv"
    write_interfailure_csv(history, path)
    print(
        f"{len(records)} months, {len(history)} events over {history.total_miles:.0f} miles "
        f"(censored tail {history.censored_tail:.0f} miles), seed {args.seed}"
    )
    logger.info("wrote %s", path)
    return 0


def _load_history(path: str, seed: int):
    with open(path, "r", encoding="utf-8", newline="") as handle:
        first = handle.readline().strip().lower()
    if first.startswith("month"):
        return expand_to_interfailure(parse_monthly_csv(path), seed=seed)
    return read_interfailure_csv(path)


def consensus_mmtd(finals: dict, totals: dict) -> float | None:
    """Median of the final medians after dropping the prequentially worst model.

    'Worst' means the smallest accumulated log predictive density, the
    running quantity the pairwise likelihood-ratio plots compare; the
    trimmed median is what the mutually agreeing models settle on.
    """
    usable = {k: v for k, v in finals.items() if v is not None}
    if not usable:
        return None
    if len(usable) > 2:
        worst = min(totals, key=totals.get)
        usable.pop(worst, None)
    return float(np.median(list(usable.values())))


def cmd_srgm(args, out: Path) -> int:
    print(SRGM_CAVEAT)
    history = _load_history(args.data, args.seed)
    kinds = [SrgmKind(k.strip().upper()) for k in args.kinds.split(",")]
    hard_failure = False
    streams = {}
    for kind in kinds:
        try:
            rr = rolling_predictions(
                kind, history, start_index=args.start_index, min_events=args.min_events
            )
            if not rr.records:
                raise ReliabilityError("no successful fits")
            streams[kind.value] = rr
        except ReliabilityError as exc:
            logger.error("%s failed: %s", kind.value, exc)
            hard_failure = True
    if not streams:
        print("all model families failed", file=sys.stderr)
        return 1

    recal = {}
    if args.recalibrate:
        for name, rr in streams.items():
            recs, preds = evaluation.recalibrated_stream(
                rr.records, rr.predictives, warmup=args.warmup
            )
            recal[name] = recs

    # Median-miles-to-next-event series (wide CSV over the step index).
    indices = sorted({r.index for rr in streams.values() for r in rr.records})
    by_model = {
        name: {r.index: r.median for r in rr.records} for name, rr in streams.items()
    }
    recal_by_model = {
        name + "#": {r.index: r.median for r in recs} for name, recs in recal.items()
    }
    all_series = {**by_model, **recal_by_model}
    header = ["index"] + list(all_series)
    rows = []
    for i in indices:
        row = [i]
        for name in all_series:
            v = all_series[name].get(i)
            row.append("" if v is None else repr(float(v)))
        rows.append(row)
    mmtd_path = out / "mmtd.csv"
    _write_csv(mmtd_path, header, rows)

    # Per-model records: the interchange the evaluate subcommand consumes.
    for name, rr in streams.items():
        evaluation.write_records_csv(rr.records, out / f"records_{name}.csv")
    for name, recs in recal.items():
        evaluation.write_records_csv(recs, out / f"records_{name}_recal.csv")

    # u-plots, raw and recalibrated.
    for name, rr in streams.items():
        up = evaluation.u_plot(rr.records)
        n = len(up.sorted_u)
        _write_csv(
            out / f"uplot_{name}.csv",
            ["u", "ecdf"],
            [[repr(u), repr((i + 1) / n)] for i, u in enumerate(up.sorted_u)],
        )
    for name, recs in recal.items():
        up = evaluation.u_plot(recs)
        n = len(up.sorted_u)
        _write_csv(
            out / f"uplot_{name}_recal.csv",
            ["u", "ecdf"],
            [[repr(u), repr((i + 1) / n)] for i, u in enumerate(up.sorted_u)],
        )

    # Pairwise running log likelihood ratios over common indices.
    scored = recal if args.recalibrate else {n: rr.records for n, rr in streams.items()}
    names = list(scored)
    plr_header = ["index"]
    plr_cols = []
    common = None
    for a in range(len(names)):
        for b in range(a + 1, len(names)):
            ia = {r.index for r in scored[names[a]]}
            ib = {r.index for r in scored[names[b]]}
            shared = sorted(ia & ib)
            common = shared if common is None else [i for i in common if i in set(shared)]
    if common:
        for a in range(len(names)):
            for b in range(a + 1, len(names)):
                ra = [r for r in scored[names[a]] if r.index in set(common)]
                rb = [r for r in scored[names[b]] if r.index in set(common)]
                series = evaluation.plr(ra, rb)
                plr_header.append(f"{names[a]}:{names[b]}")
                plr_cols.append(series)
        plr_rows = [
            [common[i]] + [repr(float(col[i])) for col in plr_cols]
            for i in range(len(common))
        ]
        _write_csv(out / "plr.csv", plr_header, plr_rows)

    # Summary with per-model calibration and the trimmed consensus.
    finals, totals = {}, {}
    summary_rows = []
    for name in streams:
        raw_ks = evaluation.u_plot(streams[name].records).ks_distance
        recal_ks = evaluation.u_plot(recal[name]).ks_distance if name in recal else ""
        src = recal.get(name, streams[name].records)
        finals[name] = src[-1].median
        totals[name] = sum(r.log_density for r in src)
        summary_rows.append(
            [
                name,
                repr(raw_ks),
                repr(recal_ks) if recal_ks != "" else "",
                "" if finals[name] is None else repr(float(finals[name])),
                repr(totals[name]),
                len(streams[name].skipped),
            ]
        )
    consensus = consensus_mmtd(finals, totals)
    _write_csv(
        out / "summary.csv",
        ["model", "ks_raw", "ks_recalibrated", "final_mmtd", "total_log_density", "skipped"],
        summary_rows,
    )
    label = "recalibrated " if args.recalibrate else ""
    if consensus is not None:
        print(f"{label}consensus median-miles-to-next-disengagement at final step: {consensus:.0f}")
    for row in summary_rows:
        print(
            f"  {row[0]}: ks={float(row[1]):.3f}"
            + (f" ks#={float(row[2]):.3f}" if row[2] else "")
            + (f" final mmtd={float(row[3]):.0f}" if row[3] else " final mmtd=none")
        )
    if args.format in ("svg", "both"):
        render.render_csv_chart(
            mmtd_path,
            out / "mmtd.svg",
            title="Median miles to next disengagement (one step ahead)",
            x_label="failure index",
            y_label="median miles",
            logy=True,
        )
        if common:
            render.render_csv_chart(
                out / "plr.csv",
                out / "plr.svg",
                title="Running log prequential likelihood ratios",
                x_label="failure index",
                y_label="log PLR",
            )
    return 1 if hard_failure else 0


def cmd_evaluate(args, out: Path) -> int:
    streams = {}
    for path in args.records:
        name = Path(path).stem
        streams[name] = evaluation.read_records_csv(path)
    rows = []
    for name, recs in streams.items():
        up = evaluation.u_plot(recs)
        n = len(up.sorted_u)
        _write_csv(
            out / f"uplot_{name}.csv",
            ["u", "ecdf"],
            [[repr(u), repr((i + 1) / n)] for i, u in enumerate(up.sorted_u)],
        )
        row = [name, repr(up.ks_distance), ""]
        if args.recalibrate and len(recs) > args.warmup:
            recal_u = evaluation.recalibrated_u_values(recs, warmup=args.warmup)
            shadow = [
                evaluation.PredictionRecord(i, u, 0.0, None, 0.0)
                for i, u in enumerate(recal_u)
            ]
            row[2] = repr(evaluation.u_plot(shadow).ks_distance)
        rows.append(row)
        print(f"{name}: ks={float(row[1]):.4f}" + (f" ks#={float(row[2]):.4f}" if row[2] else ""))
    _write_csv(out / "evaluation.csv", ["stream", "ks_raw", "ks_recalibrated"], rows)

    names = list(streams)
    for a in range(len(names)):
        for b in range(a + 1, len(names)):
            ia = {r.index for r in streams[names[a]]}
            ib = {r.index for r in streams[names[b]]}
            shared = sorted(ia & ib)
            if not shared:
                continue
            ra = [r for r in streams[names[a]] if r.index in set(shared)]
            rb = [r for r in streams[names[b]] if r.index in set(shared)]
            series = evaluation.plr(ra, rb)
            _write_csv(
                out / f"plr_{names[a]}_{names[b]}.csv",
                ["index", "log_plr"],
                [[shared[i], repr(float(series[i]))] for i in range(len(shared))],
            )
            print(f"log PLR {names[a]}:{names[b]} endpoint: {series[-1]:.3f}")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_constraint_flags(parser):
    parser.add_argument("--epsilon", type=float, default=1.09e-10, help="engineering goal")
    parser.add_argument("--theta", type=float, default=0.9, help="prior confidence in the goal")
    parser.add_argument("--p-l", dest="p_l", type=float, default=1e-15, help="technology floor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="avreliability",
        description="Reliability bounds and disengagement forecasting for AV road testing.",
    )
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for all randomness")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--format", choices=["csv", "svg", "both"], default="csv")
    parser.add_argument("--config", help="JSON file overriding scenario parameters")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("miles", help="miles required to support a claim")
    p.add_argument("--scenario", choices=["table1", "fig2", "fig3", "fig4"])
    p.add_argument(
        "--method",
        choices=["cbi", "classical", "rand-power", "beta-uniform", "beta-jeffreys"],
        default="cbi",
    )
    p.add_argument("--p", type=float, default=1.09e-8)
    p.add_argument("--c", type=float, default=0.95)
    p.add_argument("--k", type=int, default=0)
    _add_constraint_flags(p)
    p.set_defaults(func=cmd_miles)

    p = sub.add_parser("confidence", help="posterior confidence in a claim")
    p.add_argument("--method", choices=["cbi", "beta-uniform", "beta-jeffreys"], default="cbi")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--n", type=float, required=True)
    _add_constraint_flags(p)
    p.set_defaults(func=cmd_confidence)

    p = sub.add_parser("compensate", help="extra miles to offset one failure")
    p.add_argument("--scenario", choices=["fig4"])
    p.add_argument("--c", type=float, default=0.95)
    p.add_argument("--n1-lo", type=float, default=1e7)
    p.add_argument("--n1-hi", type=float, default=1e14)
    p.add_argument("--points", type=int, default=57)
    _add_constraint_flags(p)
    p.set_defaults(func=cmd_compensate)

    p = sub.add_parser("oracle", help="brute-force check of the worst-case bound")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--grid-size", type=int, default=2000)
    p.add_argument("--samples", type=int, default=1000)
    _add_constraint_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("ingest", help="expand monthly reports to inter-failure miles")
    p.add_argument("--data", required=True, help="monthly CSV (month,miles,disengagements)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("srgm", help="growth-model fitting and prequential scoring")
    p.add_argument(
        "--data",
        default=str(waymo_fixture_path()),
        help="monthly CSV or interfailure CSV (default: bundled fixture)",
    )
    p.add_argument("--kinds", default="GO,DU,MO,LI,LV")
    p.add_argument("--start-index", type=int, default=DEFAULT_ROLLING_START)
    p.add_argument("--min-events", type=int, default=DEFAULT_MIN_FIT)
    p.add_argument("--warmup", type=int, default=DEFAULT_WARMUP)
    p.add_argument("--recalibrate", action="store_true")
    p.set_defaults(func=cmd_srgm)

    p = sub.add_parser("evaluate", help="score saved prediction records")
    p.add_argument("--records", nargs="+", required=True)
    p.add_argument("--recalibrate", action="store_true")
    p.add_argument("--warmup", type=int, default=DEFAULT_WARMUP)
    p.set_defaults(func=cmd_evaluate)

    return parser


def main(argv=None) -> int:
    level = os.environ.get("RELIAB_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(message)s")
    args = build_parser().parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        return args.func(args, out)
    except ReliabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
