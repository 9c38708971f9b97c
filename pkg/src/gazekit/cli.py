"""Command-line entry point: ``gazekit {generate,classify,optimize,noise-sweep,evaluate}``.

Exit status is 0 on success, 2 for usage or input validation errors and 1 for
runtime failures. Outputs go to ``--out-dir``, defaulting to ``$GAZEKIT_OUT_DIR``
and then ``./gazekit-out``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from gazekit.classify import DEFAULT_PX_PER_DEG, reference_parse
from gazekit.errors import GazeKitError, InputError
from gazekit.experiment import run_noise_sweep
from gazekit.ingest import (
    ColumnMap,
    IngestPolicy,
    MissingPolicy,
    atomic_write_text,
    parse_csv,
    parse_labeled_csv,
    read_label_file,
    series_to_csv,
    labels_to_csv,
)
from gazekit.kratio import Scale, SweepGrid, curve_from_labeler, default_grid, labeler, optimal_threshold
from gazekit.metrics import MetricsReport, evaluate
from gazekit.model import Algorithm, TimeUnit
from gazekit.noise import DEFAULT_SIGMAS
from gazekit.synth import SynthConfig, generate

OUT_DIR_ENV = "GAZEKIT_OUT_DIR"
DEFAULT_SEED = 0

log = logging.getLogger("gazekit")


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return v


def _nonnegative(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _pair(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO,HI, got {text!r}") from None
    return lo, hi


def _grid_spec(text: str) -> tuple[Algorithm, SweepGrid]:
    """ALG:LO:HI:COUNT[:SCALE]"""
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise argparse.ArgumentTypeError(f"expected ALG:LO:HI:COUNT[:SCALE], got {text!r}")
    try:
        alg = Algorithm(parts[0].lower())
        grid = SweepGrid(float(parts[1]), float(parts[2]), int(parts[3]), Scale(parts[4]) if len(parts) == 5 else Scale.LOG)
    except (ValueError, InputError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return alg, grid


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("common")
    g.add_argument("--seed", type=_seed, default=DEFAULT_SEED, help="random seed (default %(default)s)")
    g.add_argument("--time-unit", choices=[u.value for u in TimeUnit], default=TimeUnit.PER_MS.value,
                   help="velocity denominator: px/ms or px/s (default %(default)s)")
    g.add_argument("--out-dir", type=Path, default=None, help=f"output directory (default ${OUT_DIR_ENV} or ./gazekit-out)")
    g.add_argument("-v", "--verbose", action="store_true")


def _input_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_argument_group("input")
    g.add_argument("--input", type=Path, required=required, help="gaze CSV")
    g.add_argument("--t-col", type=int, default=0)
    g.add_argument("--x-col", type=int, default=1)
    g.add_argument("--y-col", type=int, default=2)
    g.add_argument("--label-col", type=int, default=None)
    g.add_argument("--no-header", action="store_true")
    g.add_argument("--on-missing", choices=[m.value for m in MissingPolicy], default=MissingPolicy.DROP.value)
    g.add_argument("--max-gap-ms", type=_positive, default=100.0)
    g.add_argument("--rate-hz", type=_positive, default=1000.0)


def _synth_args(p: argparse.ArgumentParser) -> None:
    d = SynthConfig()
    g = p.add_argument_group("synthetic trajectory")
    g.add_argument("--duration-ms", type=_positive, default=d.duration_ms)
    g.add_argument("--synth-rate-hz", type=_positive, default=d.rate_hz)
    g.add_argument("--fix-duration-ms", type=_pair, default=d.fix_duration_ms_range, metavar="LO,HI")
    g.add_argument("--sac-duration-ms", type=_pair, default=d.sac_duration_ms_range, metavar="LO,HI")
    g.add_argument("--sac-amplitude-px", type=_pair, default=d.sac_amplitude_px_range, metavar="LO,HI")
    g.add_argument("--fix-jitter-px", type=_nonnegative, default=d.fix_jitter_px)
    g.add_argument("--arena", type=_pair, default=d.arena, metavar="W,H")


def _sweep_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t-min-ms", type=_positive, default=50.0, help="I-DT minimum window span")
    p.add_argument("--grid", type=_grid_spec, action="append", default=[], metavar="ALG:LO:HI:COUNT[:SCALE]",
                   help="override the sweep grid of one algorithm (repeatable)")


def _algorithms_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algorithm", dest="algorithms", action="append", choices=[a.value for a in Algorithm],
                   help="algorithm to run (repeatable; default all)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gazekit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic labeled trajectory")
    _common(p)
    _synth_args(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("classify", help="label samples with a fixed or adaptive threshold")
    _common(p)
    _input_args(p)
    p.add_argument("--algorithm", choices=[a.value for a in Algorithm], default=Algorithm.IVT.value)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--threshold", type=_positive)
    mode.add_argument("--adaptive", action="store_true")
    p.add_argument("--plot-data", action="store_true", help="also write x,y,label for scanpath plots")
    p.add_argument("--output", default="labels.csv")
    _sweep_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("optimize", help="K-ratio curves and optimal thresholds")
    _common(p)
    _input_args(p)
    _algorithms_arg(p)
    _sweep_args(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("noise-sweep", help="fixed vs adaptive thresholds under added noise")
    _common(p)
    _input_args(p, required=False)
    _synth_args(p)
    _algorithms_arg(p)
    _sweep_args(p)
    p.add_argument("--sigma", type=_nonnegative, action="append", help="noise level in px (repeatable)")
    p.add_argument("--truth", choices=["synth", "file", "reference"], default=None,
                   help="ground truth source (default: synth without --input, file with --label-col)")
    p.add_argument("--px-per-deg", type=_positive, default=DEFAULT_PX_PER_DEG)
    p.add_argument("--resume", action="store_true", help="reuse per-level results from an earlier run")
    p.set_defaults(func=cmd_noise_sweep)

    p = sub.add_parser("evaluate", help="frame-wise metrics of predicted vs true labels")
    _common(p)
    p.add_argument("--pred", type=Path, required=True)
    p.add_argument("--truth", type=Path, required=True)
    p.add_argument("--output", default="metrics")
    p.set_defaults(func=cmd_evaluate)
    return parser


def _out_dir(args) -> Path:
    out = args.out_dir or Path(os.environ.get(OUT_DIR_ENV, "gazekit-out"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _column_map(args, label_col=None) -> ColumnMap:
    return ColumnMap(args.t_col, args.x_col, args.y_col, label_col, not args.no_header)


def _policy(args) -> IngestPolicy:
    return IngestPolicy(MissingPolicy(args.on_missing), args.max_gap_ms)


def _synth_config(args) -> SynthConfig:
    return SynthConfig(
        duration_ms=args.duration_ms,
        rate_hz=args.synth_rate_hz,
        fix_duration_ms_range=args.fix_duration_ms,
        sac_duration_ms_range=args.sac_duration_ms,
        sac_amplitude_px_range=args.sac_amplitude_px,
        fix_jitter_px=args.fix_jitter_px,
        arena=args.arena,
        seed=args.seed,
    )


def _grids(args, unit: TimeUnit) -> dict:
    grids = {a: default_grid(a, unit) for a in Algorithm}
    grids.update(dict(args.grid))
    return grids


def _dump_json(path: Path, doc: dict) -> None:
    atomic_write_text(path, json.dumps(doc, indent=2) + "\n")


def cmd_generate(args) -> int:
    cfg = _synth_config(args)
    series, truth = generate(cfg)
    out = _out_dir(args)
    atomic_write_text(out / "trajectory.csv", series_to_csv(series, truth))
    atomic_write_text(out / "truth.csv", labels_to_csv(series.t, truth))
    _dump_json(out / "trajectory.json", {"config": cfg.to_dict(), "n_samples": len(series)})
    print(f"samples={len(series)} fixation_proportion={truth.n_fixation / len(truth):.4f} -> {out}")
    return 0


def cmd_classify(args) -> int:
    unit = TimeUnit(args.time_unit)
    alg = Algorithm(args.algorithm)
    series = parse_csv(args.input, _column_map(args), _policy(args), args.rate_hz)
    classify = labeler(series, alg, unit, args.t_min_ms)
    k = None
    if args.adaptive:
        grid = _grids(args, unit)[alg]
        threshold, k = optimal_threshold(curve_from_labeler(classify, alg, grid))
    else:
        threshold = args.threshold
    labels = classify(threshold)
    out = _out_dir(args)
    target = out / args.output
    atomic_write_text(target, labels_to_csv(series.t, labels))
    if args.plot_data:
        rows = ["x,y,label"] + [f"{x!r},{y!r},{tok}" for x, y, tok in zip(series.x.tolist(), series.y.tolist(), labels.tokens())]
        atomic_write_text(target.with_name(target.stem + "_plot.csv"), "\n".join(rows) + "\n")
    _dump_json(
        target.with_suffix(".json"),
        {
            "algorithm": alg.value,
            "adaptive": bool(args.adaptive),
            "threshold": threshold,
            "k_ratio": k,
            "time_unit": unit.value,
            "t_min_ms": args.t_min_ms,
            "n_samples": len(labels),
            "n_fix": labels.n_fixation,
            "n_sac": labels.n_saccade,
        },
    )
    print(f"{alg.value} threshold={threshold!r} fixations={labels.n_fixation} saccades={labels.n_saccade}")
    return 0


def cmd_optimize(args) -> int:
    unit = TimeUnit(args.time_unit)
    algorithms = [Algorithm(a) for a in (args.algorithms or [a.value for a in Algorithm])]
    series = parse_csv(args.input, _column_map(args), _policy(args), args.rate_hz)
    grids = _grids(args, unit)
    out = _out_dir(args)
    summary = [f"# time_unit={unit.value}", "algorithm,threshold,k_ratio"]
    failed = []
    report = {"time_unit": unit.value, "t_min_ms": args.t_min_ms, "algorithms": {}}
    for alg in algorithms:
        curve = curve_from_labeler(labeler(series, alg, unit, args.t_min_ms), alg, grids[alg])
        atomic_write_text(out / f"curve_{alg.value}.csv", f"# time_unit={unit.value}\n" + curve.to_csv())
        try:
            thr, k = optimal_threshold(curve)
        except GazeKitError as exc:
            failed.append(str(exc))
            summary.append(f"{alg.value},,")
            report["algorithms"][alg.value] = {"threshold": None, "k_ratio": None, "grid": grids[alg].to_dict()}
            continue
        summary.append(f"{alg.value},{thr!r},{k!r}")
        report["algorithms"][alg.value] = {"threshold": thr, "k_ratio": k, "grid": grids[alg].to_dict()}
        print(f"{alg.value:5s} threshold={thr:.6g} k_ratio={k:.6g}")
    atomic_write_text(out / "summary.csv", "\n".join(summary) + "\n")
    _dump_json(out / "summary.json", report)
    if failed:
        for msg in failed:
            print(f"error: {msg}", file=sys.stderr)
        return 1
    return 0


def cmd_noise_sweep(args) -> int:
    unit = TimeUnit(args.time_unit)
    algorithms = [Algorithm(a) for a in (args.algorithms or [a.value for a in Algorithm])]
    truth_source = args.truth or ("synth" if args.input is None else "file" if args.label_col is not None else "reference")
    if args.input is None:
        if truth_source == "file":
            raise InputError("--truth file needs --input with --label-col")
        series, truth = generate(_synth_config(args))
        if truth_source == "reference":
            truth = reference_parse(series, px_per_deg=args.px_per_deg)
    else:
        if truth_source == "synth":
            raise InputError("--truth synth is only available without --input")
        if truth_source == "file":
            if args.label_col is None:
                raise InputError("--truth file needs --label-col")
            series, truth = parse_labeled_csv(args.input, _column_map(args, args.label_col), _policy(args),
                                              sample_rate_hz=args.rate_hz)
        else:
            series = parse_csv(args.input, _column_map(args), _policy(args), args.rate_hz)
            truth = reference_parse(series, px_per_deg=args.px_per_deg)

    out = _out_dir(args)
    parts = out / "noise_sweep_parts"
    if not args.resume and parts.is_dir():
        for f in parts.glob("level_*.json"):
            f.unlink()
    result = run_noise_sweep(
        series,
        truth,
        algorithms,
        sigmas=args.sigma if args.sigma else DEFAULT_SIGMAS,
        seed=args.seed,
        unit=unit,
        t_min_ms=args.t_min_ms,
        grids=_grids(args, unit),
        part_dir=parts,
    )
    atomic_write_text(out / "noise_sweep.csv", result.to_csv())
    doc = json.loads(result.to_json())
    doc["truth_source"] = truth_source
    _dump_json(out / "noise_sweep.json", doc)
    for r in result.rows:
        m = r.metrics
        f1f = "   -" if m.f1_f is None else f"{m.f1_f:.2f}"
        f1s = "   -" if m.f1_s is None else f"{m.f1_s:.2f}"
        print(f"{r.algorithm:5s} {r.condition:9s} sigma={r.sigma:<5g} thr={r.threshold:<10.4g} "
              f"acc={m.accuracy:.2f} f1_f={f1f} f1_s={f1s} fix%={r.fix_pct:.1f}")
    return 0


def cmd_evaluate(args) -> int:
    pred = read_label_file(args.pred)
    truth = read_label_file(args.truth)
    report = evaluate(pred, truth)
    out = _out_dir(args)
    _dump_json(out / f"{args.output}.json", report.to_dict())
    atomic_write_text(out / f"{args.output}.csv", MetricsReport.csv_header() + "\n" + report.csv_row() + "\n")
    for name, value in report.to_dict().items():
        print(f"{name:26s} {'undefined' if value is None else f'{value:.4f}'}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (GazeKitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
