"""Command line interface: ``mcssa detect|calibrate|power|adjust-alpha|roc|replay``."""

import argparse
import json
import os
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bases import FrequencyRange
from .calibration import Scenario, adjust_alpha, roc_sweep, simulate
from .detection import BONFERRONI, MAX_CORRECTION, TestConfig, run_mcssa
from .exceptions import (DataError, MCSSAError, ParameterError, RangeError, SampleSizeError,
                         SearchFailure)
from .io import (calibration_csv, detection_report, dumps, format_float, read_series,
                 spectrum_csv, spectrum_table, write_text)
from .noise import Ar1Model, SignalSpec, synthesize

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


def _range(text):
    try:
        lo, hi = (float(v) for v in text.split(","))
        return FrequencyRange(lo, hi)
    except (ValueError, MCSSAError) as exc:
        raise argparse.ArgumentTypeError(f"expected LOW,HIGH inside [0, 0.5], got {text!r}") from exc


def _model_source(text):
    if text in ("estimate", "given"):
        return text
    try:
        varphi, delta = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected 'estimate', 'given' or PHI,DELTA, got {text!r}") from None
    return varphi, delta


def _levels(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated levels, got {text!r}") from None


def _add_test_options(p):
    p.add_argument("--window", "-L", type=int, default=20)
    p.add_argument("--surrogates", "-G", type=int, default=1000)
    p.add_argument("--confidence", type=float, default=0.8,
                   help="confidence level; significance is 1 - confidence")
    p.add_argument("--basis", choices=("ev", "sin"), default="ev")
    p.add_argument("--range", type=_range, default=FrequencyRange(0.0, 0.5), metavar="LO,HI")
    p.add_argument("--two-tailed", action="store_true")
    p.add_argument("--correction", choices=(MAX_CORRECTION, BONFERRONI), default=MAX_CORRECTION)
    p.add_argument("--seed", type=int, default=None,
                   help="master seed (falls back to $MCSSA_SEED)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, default=None, help="output directory")


def _add_generation_options(p, signal=True):
    p.add_argument("--length", "-N", type=int, default=1000)
    p.add_argument("--phi", type=float, default=0.7)
    p.add_argument("--delta", type=float, default=1.0)
    if signal:
        p.add_argument("--amplitude", type=float, default=0.0)
        p.add_argument("--period", type=float, default=5.5)
        p.add_argument("--phase", type=float, default=0.0)


def build_parser():
    parser = argparse.ArgumentParser(prog="mcssa", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="test one series for an oscillation in red noise")
    p.add_argument("--input", type=Path, default=None,
                   help="series file (one value per line); otherwise a series is generated")
    _add_generation_options(p)
    p.add_argument("--model", type=_model_source, default="estimate",
                   help="null model: 'estimate', or PHI,DELTA")
    _add_test_options(p)

    for name, helptext in (("calibrate", "estimate the type-I error"),
                           ("power", "estimate the power against a sinusoid")):
        p = sub.add_parser(name, help=helptext)
        _add_generation_options(p, signal=name == "power")
        p.add_argument("--model", choices=("given", "estimate"), default="given",
                       help="surrogates from the true model or from per-replicate estimates")
        p.add_argument("--replicates", "-M", type=int, default=1000)
        p.add_argument("--label", default=None)
        _add_test_options(p)

    p = sub.add_parser("adjust-alpha", help="find the nominal level hitting a target type-I error")
    _add_generation_options(p, signal=False)
    p.add_argument("--model", choices=("given", "estimate"), default="estimate")
    p.add_argument("--replicates", "-M", type=int, default=1000)
    p.add_argument("--target", type=float, default=0.2)
    p.add_argument("--lo", type=float, default=0.01)
    p.add_argument("--hi", type=float, default=0.6)
    p.add_argument("--max-iter", type=int, default=30)
    _add_test_options(p)

    p = sub.add_parser("roc", help="FPR and TPR at several nominal levels")
    _add_generation_options(p)
    p.add_argument("--model", choices=("given", "estimate"), default="given")
    p.add_argument("--replicates", "-M", type=int, default=1000)
    p.add_argument("--levels", type=_levels, default=[0.05, 0.1, 0.2])
    _add_test_options(p)

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest", type=Path)
    p.add_argument("--out", type=Path, default=None)
    return parser


def _resolve_seed(seed):
    if seed is not None:
        return seed
    env = os.environ.get("MCSSA_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise DataError(f"MCSSA_SEED must be an integer, got {env!r}") from None
    return int(np.random.SeedSequence().entropy % (2**63))


def _config(args, null_model):
    return TestConfig(window=args.window, n_surrogates=args.surrogates,
                      confidence=args.confidence, two_tailed=args.two_tailed,
                      freq_range=args.range, basis=args.basis, null_model=null_model,
                      correction=args.correction)


def _emit(args, files):
    """Write ``{name: text}`` into ``--out``, or print the primary output."""
    if args.out is None:
        sys.stdout.write(next(iter(files.values())))
        return
    args.out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        write_text(args.out / name, text)


def _manifest(argv, args, seed, started, extra=None):
    manifest = {
        "command": args.command,
        "argv": _canonical_argv(argv, seed),
        "seed": seed,
        "config": {k: _jsonable(v) for k, v in sorted(vars(args).items())
                   if k not in ("out", "func")},
        "versions": {"mcssa": __version__, "python": platform.python_version(),
                     "numpy": np.__version__},
        "timings": {"elapsed_seconds": round(time.perf_counter() - started, 3)},
    }
    if extra:
        manifest.update(extra)
    return json.dumps(manifest, indent=2) + "\n"


def _jsonable(v):
    if isinstance(v, FrequencyRange):
        return [v.low, v.high]
    if isinstance(v, Path):
        return str(v)
    return v


def _canonical_argv(argv, seed):
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a in ("--out", "--seed"):
            skip = True
            continue
        if a.startswith("--out=") or a.startswith("--seed="):
            continue
        out.append(a)
    return out + ["--seed", str(seed)]


def cmd_detect(args, argv, started):
    seed = _resolve_seed(args.seed)
    series_ss, test_ss = np.random.SeedSequence(seed).spawn(2)
    files = {}
    if args.input is not None:
        x = read_series(args.input)
    else:
        true_model = Ar1Model(args.phi, args.delta, args.length)
        signal = SignalSpec(args.amplitude, args.period, args.phase)
        x = synthesize(signal, args.length, true_model, np.random.default_rng(series_ss))
    if args.model == "estimate":
        null_model = None
    elif args.model == "given":
        null_model = Ar1Model(args.phi, args.delta, len(x))
    else:
        null_model = Ar1Model(*args.model, len(x))
    config = _config(args, null_model)
    result = run_mcssa(x, config, np.random.default_rng(test_ss), args.workers)
    report = detection_report(result, seed=seed, window=args.window,
                              n_surrogates=args.surrogates, freq_range=args.range)
    files["report.json"] = dumps(report)
    files["spectrum.csv"] = spectrum_csv(spectrum_table(result))
    if args.input is None:
        files["series.txt"] = "\n".join(format_float(v) for v in x) + "\n"
    if args.out is not None:
        files["manifest.json"] = _manifest(argv, args, seed, started,
                                           {"density_overlay_constant": len(x)})
    _emit(args, files)
    return EXIT_OK


def _scenario(args, amplitude):
    model = Ar1Model(args.phi, args.delta, args.length)
    signal = SignalSpec(amplitude, getattr(args, "period", 5.5), getattr(args, "phase", 0.0))
    null_model = model if args.model == "given" else None
    return Scenario(model, signal, _config(args, null_model), args.replicates)


def _label(args, scenario):
    if getattr(args, "label", None):
        return args.label
    cfg = scenario.config
    source = "model" if args.model == "given" else f"est.(alpha={format_float(cfg.alpha)})"
    return (f"{source}, ({format_float(cfg.freq_range.low)}, {format_float(cfg.freq_range.high)}),"
            f" N={args.length}, G={cfg.n_surrogates}")


def cmd_calibrate(args, argv, started):
    seed = _resolve_seed(args.seed)
    amplitude = args.amplitude if args.command == "power" else 0.0
    if args.command == "power" and amplitude <= 0.0:
        raise DataError("power needs --amplitude > 0")
    scenario = _scenario(args, amplitude)
    est = simulate(scenario, seed, args.workers).estimate()
    files = {"table.csv": calibration_csv([(_label(args, scenario), est)])}
    if args.out is not None:
        files["manifest.json"] = _manifest(argv, args, seed, started)
    _emit(args, files)
    return EXIT_OK


def cmd_adjust_alpha(args, argv, started):
    seed = _resolve_seed(args.seed)
    scenario = _scenario(args, 0.0)
    header = "label,level,estimate\n"
    try:
        adj = adjust_alpha(scenario, args.target, seed, lo=args.lo, hi=args.hi,
                           max_iter=args.max_iter, workers=args.workers)
    except SearchFailure as exc:
        rows = "".join(f"trial,{format_float(a)},{format_float(e)}\n" for a, e in exc.trace)
        sys.stderr.write(f"mcssa: {exc}\n")
        _emit(args, {"alpha.csv": header + rows})
        return EXIT_RUNTIME
    rows = "".join(f"trial,{format_float(a)},{format_float(e)}\n" for a, e in adj.trace)
    rows += f"adjusted,{format_float(adj.adjusted)},{format_float(adj.estimate.proportion)}\n"
    files = {"alpha.csv": header + rows,
             "table.csv": calibration_csv([(_label(args, scenario), adj.estimate)])}
    if args.out is not None:
        files["manifest.json"] = _manifest(argv, args, seed, started)
    _emit(args, files)
    return EXIT_OK


def cmd_roc(args, argv, started):
    seed = _resolve_seed(args.seed)
    if args.amplitude <= 0.0:
        raise DataError("roc needs --amplitude > 0 for the alternative")
    null = _scenario(args, 0.0)
    alt = _scenario(args, args.amplitude)
    points = roc_sweep(null, alt, args.levels, seed, args.workers)
    lines = ["alpha,fpr,fpr_ci_2.5,fpr_ci_97.5,tpr,tpr_ci_2.5,tpr_ci_97.5"]
    for p in points:
        lines.append(",".join(format_float(v) for v in (
            p.alpha, p.fpr.proportion, p.fpr.ci_low, p.fpr.ci_high,
            p.tpr.proportion, p.tpr.ci_low, p.tpr.ci_high)))
    files = {"roc.csv": "\n".join(lines) + "\n"}
    if args.out is not None:
        files["manifest.json"] = _manifest(argv, args, seed, started)
    _emit(args, files)
    return EXIT_OK


def cmd_replay(args, argv, started):
    manifest = json.loads(args.manifest.read_text(encoding="utf-8"))
    replay = list(manifest["argv"])
    if args.out is not None:
        replay += ["--out", str(args.out)]
    return main(replay)


COMMANDS = {"detect": cmd_detect, "calibrate": cmd_calibrate, "power": cmd_calibrate,
            "adjust-alpha": cmd_adjust_alpha, "roc": cmd_roc, "replay": cmd_replay}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        return COMMANDS[args.command](args, argv, started)
    except (RangeError, SampleSizeError) as exc:
        sys.stderr.write(f"mcssa: {exc}\n")
        return EXIT_RUNTIME
    except (DataError, ParameterError, OSError) as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"mcssa: error: {exc}\n")
        return EXIT_USAGE
    except MCSSAError as exc:
        sys.stderr.write(f"mcssa: {exc}\n")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
