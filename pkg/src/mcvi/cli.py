"""Command-line entry point: ``mcvi <subcommand> [options]``.

Every run writes ``index_panel.csv``, ``country_ranking.csv``, the report
files of the chosen subcommand and ``manifest.json`` into ``--output``. On
failure a ``FAILED.json`` marker describing the error is written instead of
the manifest and the process exits with status 1. Usage errors exit with 2.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from pathlib import Path

import numpy as np
import pandas as pd

from . import __version__
from .analysis import (
    PRESET_EVENTS, cluster_profiles, convergent_summary, convergent_validity, descriptive_statistics,
    dominant_dimensions, event_study, group_statistics, index_properties, robustness_suite,
    run_regressions, temporal_report,
)
from .dimensions import build_raw_panel
from .errors import InsufficientData, MCVIError
from .index import IndexPanel, WeightVector, aggregate_mcvi, derive_pca_weights, rank_countries
from .ingest import DEFAULT_YEAR_RANGE, generate_fixture, load_bundle, write_bundle
from .normalize import Method, normalize_panel
from .stats import spearman
from .uncertainty import McConfig, decompose_variance, run_monte_carlo

CSV_FLOAT = "%.6g"
FAILURE_MARKER = "FAILED.json"
MANIFEST = "manifest.json"
SUBCOMMANDS = ("build", "robustness", "montecarlo", "decompose", "validate", "events", "fixture", "report")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, Path):
        return str(obj)
    return obj


class Run:
    """Output directory bookkeeping: written files, digests and stage timings."""

    def __init__(self, output: Path):
        self.output = output
        self.outputs: dict[str, str] = {}
        self.timings: dict[str, float] = {}
        self.notes: list[str] = []

    def _record(self, name: str, data: bytes):
        (self.output / name).write_bytes(data)
        self.outputs[name] = hashlib.sha256(data).hexdigest()

    def csv(self, name: str, frame: pd.DataFrame):
        text = frame.to_csv(index=False, float_format=CSV_FLOAT, lineterminator="\n")
        self._record(name, text.encode())

    def json(self, name: str, payload):
        text = json.dumps(_jsonable(payload), indent=2, sort_keys=False, allow_nan=False) + "\n"
        self._record(name, text.encode())

    def stage(self, name: str):
        run = self

        class _Timer:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                run.timings[name] = time.perf_counter() - self.t0
                return False

        return _Timer()


def parse_weights(text: str) -> str | WeightVector:
    text = text.strip().lower()
    if text in ("equal", "pca"):
        return text
    parts = text.split(",")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        values = []
    if len(values) != 3:
        raise argparse.ArgumentTypeError("weights must be 'equal', 'pca' or three comma-separated numbers")
    if any(v < 0 for v in values) or abs(sum(values) - 1.0) > 1e-9:
        raise argparse.ArgumentTypeError("explicit weights must be non-negative and sum to 1")
    return WeightVector.normalized(values)


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", type=Path, help="directory holding the input CSVs")
    common.add_argument("--output", type=Path, required=True, help="directory for outputs")
    common.add_argument("--method", choices=[m.value for m in Method], default=Method.POOLED_RANK.value,
                        help="normalization (default: pooled-rank)")
    common.add_argument("--weights", type=parse_weights, default="equal",
                        help="equal, pca, or W1,W2,W3 summing to 1")
    common.add_argument("--min-years", type=_positive_int, default=1,
                        help="flag countries covered for fewer years in the ranking")
    common.add_argument("--sims", type=_positive_int, default=1000, help="Monte Carlo simulations")
    common.add_argument("--alpha", type=float, default=20.0, help="Dirichlet concentration for weights")
    common.add_argument("--noise", type=float, default=0.05, help="uniform noise half-width on raw indicators")
    common.add_argument("--pswitch", type=float, default=0.30,
                        help="probability a simulation uses an alternative normalization")
    common.add_argument("--seed", type=int, default=0, help="seed for Monte Carlo and k-means")
    common.add_argument("--workers", type=_positive_int, default=1, help="Monte Carlo threads")
    common.add_argument("--k-min", type=int, default=2, help="smallest k tried by k-means")
    common.add_argument("--k-max", type=int, default=6, help="largest k tried by k-means")

    parser = argparse.ArgumentParser(prog="mcvi", description="Maritime Connectivity Vulnerability Index")
    parser.add_argument("--version", action="version", version=f"mcvi {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="{" + ",".join(SUBCOMMANDS) + "}")
    helps = {
        "build": "construct the index and country ranking",
        "robustness": "ranking agreement under alternative specifications",
        "montecarlo": "Monte Carlo rank uncertainty and variance decomposition",
        "decompose": "dominant dimensions and k-means profiles",
        "validate": "convergent validity and panel regressions",
        "events": "disruption event studies",
        "report": "run every report",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    fx = sub.add_parser("fixture", help="write a synthetic input bundle")
    fx.add_argument("--output", type=Path, required=True)
    fx.add_argument("--economies", type=int, default=20, help="number of synthetic economies")
    fx.add_argument("--years", type=int, default=5, help="number of years from 2006")
    fx.add_argument("--seed", type=int, default=0)
    return parser


def _config_echo(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if isinstance(v, WeightVector):
            v = list(v.as_tuple())
        out[k] = _jsonable(v)
    return out


def _mc_config(args) -> McConfig:
    return McConfig(
        n_sims=args.sims, dirichlet_alpha=args.alpha, noise_halfwidth=args.noise,
        p_switch_normalization=args.pswitch, seed=args.seed, min_years=args.min_years,
    )


def _build(args, run: Run):
    with run.stage("ingest"):
        bundle = load_bundle(args.input, year_range=DEFAULT_YEAR_RANGE)
    with run.stage("index"):
        raw = build_raw_panel(bundle)
        norm = normalize_panel(raw, args.method)
        weights = args.weights
        if weights == "pca":
            weights = derive_pca_weights(norm)
        elif weights == "equal":
            weights = WeightVector.equal()
        index = aggregate_mcvi(norm, weights)
        ranking = rank_countries(index, args.min_years)
    run.csv("index_panel.csv", index.data)
    run.csv("country_ranking.csv", ranking)
    if weights != WeightVector.equal():
        base = rank_countries(aggregate_mcvi(norm, WeightVector.equal()), args.min_years)
        run.csv("country_ranking_equal.csv", base)
        joined = ranking.merge(base, on="economy", suffixes=("", "_equal"))
        rho = spearman(joined["mean_mcvi"], joined["mean_mcvi_equal"]).r
        run.json("ranking_comparison.json", {"weights": weights.as_tuple(), "spearman_vs_equal": rho})
    return bundle, raw, index


def _robustness(raw, run: Run):
    with run.stage("robustness"):
        table = robustness_suite(raw)
    run.csv("robustness.csv", table)
    run.json("robustness.json", table.to_dict(orient="records"))


def _montecarlo(raw, args, run: Run):
    cfg = _mc_config(args)
    with run.stage("montecarlo"):
        result = run_monte_carlo(raw, cfg, workers=args.workers)
    with run.stage("variance_decomposition"):
        shares = decompose_variance(raw, cfg, workers=args.workers)
    run.csv("montecarlo_ranks.csv", result.rank_quantiles())
    payload = json.loads(result.to_json())
    payload["variance_shares"] = shares.as_dict()
    run.json("montecarlo.json", payload)


def _decompose(index: IndexPanel, args, run: Run):
    with run.stage("decompose"):
        dom = dominant_dimensions(index)
        clusters = cluster_profiles(index, range(args.k_min, args.k_max + 1), seed=args.seed)
    run.csv("dominant_dimensions.csv", dom.table)
    run.csv("clusters.csv", clusters.members)
    run.json("decomposition.json", {"dominant": dom.to_dict(), "clusters": clusters.to_dict()})


def _validate(bundle, index: IndexPanel, run: Run) -> bool:
    if bundle.external.empty:
        run.notes.append("validate skipped: no external.csv")
        return False
    with run.stage("validate"):
        conv = convergent_validity(index, bundle.external)
        reg = run_regressions(index, bundle.external, bundle.classification)
    run.csv("convergent_validity.csv", conv)
    run.csv("regressions.csv", reg.table())
    run.json("validation.json", {"convergent": conv.to_dict(orient="records"),
                                 "convergent_summary": convergent_summary(conv),
                                 "regressions": reg.to_dict()})
    # country-level scatter data: mean MCVI against mean log GDP per capita
    ext = bundle.external[bundle.external["gdp_pc"] > 0]
    gdp = np.log(ext.groupby("economy")["gdp_pc"].mean()).rename("log_gdp_pc")
    scatter = index.data.groupby("economy")["mcvi"].mean().to_frame("mean_mcvi").join(gdp, how="inner")
    scatter = scatter.join(bundle.classification.set_index("economy")[["sids", "region"]]).reset_index()
    run.csv("gdp_scatter.csv", scatter)
    return True


def _events(bundle, index: IndexPanel, run: Run):
    if bundle.external.empty:
        run.notes.append("events skipped: no external.csv")
        return
    reports, skipped, quartiles = [], [], []
    with run.stage("events"):
        for spec in PRESET_EVENTS:
            try:
                rep = event_study(index, bundle.external, spec, bundle.classification)
            except InsufficientData as exc:
                skipped.append({"event": spec.name, "reason": str(exc)})
                continue
            reports.append(rep.to_dict())
            quartiles.append(rep.quartiles.assign(event=spec.name))
    cols = ["event", "quartile", "n", "mean_change", "mcvi_min", "mcvi_max"]
    table = pd.concat(quartiles, ignore_index=True)[cols] if quartiles else pd.DataFrame(columns=cols)
    run.csv("event_quartiles.csv", table)
    run.json("events.json", {"events": reports, "skipped": skipped})


def _descriptive(bundle, index: IndexPanel, run: Run):
    with run.stage("properties"):
        desc = descriptive_statistics(index)
        props = index_properties(index)
        groups = group_statistics(index, bundle.classification)
        temporal = temporal_report(index, bundle.classification)
    run.csv("descriptive.csv", desc.reset_index())
    run.json("properties.json", props.to_dict())
    run.csv("groups.csv", groups.table)
    run.json("groups.json", groups.to_dict())
    run.csv("annual_trend.csv", temporal.annual)
    run.csv("volatility.csv", temporal.volatility)
    run.json("temporal.json", temporal.to_dict())
    regions = index.data.merge(bundle.classification[["economy", "region"]], on="economy")
    run.csv("regional_trend.csv", regions.groupby(["region", "year"])["mcvi"].mean().reset_index())


def execute(args, run: Run):
    if args.command == "fixture":
        with run.stage("fixture"):
            bundle = generate_fixture(args.economies, args.years, args.seed)
            paths = write_bundle(bundle, run.output)
        for name in sorted(p.name for p in paths.values()):
            run.outputs[name] = hashlib.sha256((run.output / name).read_bytes()).hexdigest()
        return {}

    bundle, raw, index = _build(args, run)
    cmd = args.command
    if cmd in ("robustness", "report"):
        _robustness(raw, run)
    if cmd in ("montecarlo", "report"):
        _montecarlo(raw, args, run)
    if cmd in ("decompose", "report"):
        _decompose(index, args, run)
    if cmd in ("validate", "report"):
        if not _validate(bundle, index, run) and cmd == "validate":
            raise InsufficientData("validate needs external.csv in the input directory")
    if cmd in ("events", "report"):
        if bundle.external.empty and cmd == "events":
            raise InsufficientData("events needs external.csv in the input directory")
        _events(bundle, index, run)
    if cmd == "report":
        _descriptive(bundle, index, run)
    return bundle.provenance


def _manifest(args, run: Run, provenance: dict) -> dict:
    return {
        "tool": "mcvi",
        "version": __version__,
        "command": args.command,
        "config": _config_echo(args),
        "inputs": provenance.get("files", {}),
        "row_counts": provenance.get("row_counts", {}),
        "outputs": dict(sorted(run.outputs.items())),
        "notes": run.notes,
        "timings_seconds": run.timings,
    }


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command != "fixture" and args.input is None:
        parser.error(f"{args.command} requires --input")
    output: Path = args.output
    output.mkdir(parents=True, exist_ok=True)
    for stale in (FAILURE_MARKER, MANIFEST):
        (output / stale).unlink(missing_ok=True)
    run = Run(output)
    try:
        provenance = execute(args, run)
    except (MCVIError, OSError, ValueError) as exc:
        failure = {
            "error": type(exc).__name__,
            "message": str(exc),
            "source": getattr(exc, "source", None),
            "line": getattr(exc, "line", None),
            "partial_outputs": sorted(run.outputs),
        }
        (output / FAILURE_MARKER).write_text(json.dumps(_jsonable(failure), indent=2) + "\n")
        print(f"mcvi {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    (output / MANIFEST).write_text(json.dumps(_jsonable(_manifest(args, run, provenance)), indent=2) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
