"""
Command-line front end.

    qthermo run      --scheme du --scheme w --p 0.5 --out results/
    qthermo sweep-p  --p-list 0,0.5,1 --out results/
    qthermo tmp      --p 1 --out results/
    qthermo analyze  results/qcgf_du.csv --out reanalysis/

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 analysis error.
"""

import argparse
import datetime as dt
import os
import sys
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

from . import spectral
from .errors import AnalysisError, ConfigError
from .io import (
    load_config_file,
    read_qcgf_csv,
    write_averages_csv,
    write_json,
    write_qcgf_csv,
    write_qpdf_csv,
    write_tmp_csv,
)
from .protocol import SCHEMES, ExperimentConfig, SchemeKind, sweep
from .tmp import tmp_averages, tmp_distribution

EXIT_CONFIG, EXIT_IO, EXIT_ANALYSIS = 2, 3, 4

_CONFIG_FLAGS = {
    "theta": float,
    "phi": float,
    "alpha": float,
    "beta": float,
    "p": float,
    "chi_max": float,
    "dchi": float,
    "shots": int,
    "seed": int,
}


def _version():
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def worker_count():
    """Worker-pool size, capped by ``QTHERMO_THREADS``."""
    cap = os.environ.get("QTHERMO_THREADS")
    n = os.cpu_count() or 1
    if cap is None:
        return 1
    try:
        return max(1, min(n, int(cap)))
    except ValueError:
        raise ConfigError(f"QTHERMO_THREADS must be an integer, got {cap!r}", field="QTHERMO_THREADS") from None


def _add_config_args(parser):
    for name, kind in _CONFIG_FLAGS.items():
        parser.add_argument("--" + name.replace("_", "-"), dest=name, type=kind, default=None)
    parser.add_argument("--mode", choices=["exact", "sampled"], default=None)
    parser.add_argument("--config", type=Path, default=None, help="key=value file; flags override it")
    parser.add_argument("--out", type=Path, default=Path("."))


def build_config(args):
    overrides = load_config_file(args.config) if args.config else {}
    for name in [*_CONFIG_FLAGS, "mode"]:
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return ExperimentConfig(**overrides)


def _prepare_out(out):
    out.mkdir(parents=True, exist_ok=True)
    if not out.is_dir():
        raise NotADirectoryError(str(out))
    return out


class _Manifest:
    def __init__(self, command, cfg, schemes=()):
        self.data = {
            "command": command,
            "config": cfg.as_dict() if cfg else None,
            "schemes": [s.value for s in schemes],
            "seed": cfg.seed if cfg else None,
            "outputs": [],
            "started": dt.datetime.now(dt.timezone.utc).isoformat(),
            "version": _version(),
        }

    def add(self, path):
        self.data["outputs"].append(Path(path).name)
        return path

    def write(self, out):
        self.data["finished"] = dt.datetime.now(dt.timezone.utc).isoformat()
        write_json(self.data, out / "manifest.json")


def analyze_table(table, out, tag, manifest):
    """Write QPDF, peaks and moments for one table; return its summary entry."""
    density = spectral.qpdf(table)
    peaks = spectral.peak_weights(table)
    neg = spectral.negativity(density)
    moments = {
        "slope": spectral.average_from_slope(table, table.dchi).as_dict(),
        "derivative": spectral.average_from_derivative(table).as_dict(),
        "peaks": spectral.average_from_peaks(peaks).as_dict(),
    }
    manifest.add(write_qpdf_csv(density, out / f"qpdf_{tag}.csv"))
    peak_doc = {"raw": peaks.as_dict(), "renormalized": spectral.renormalize_peaks(peaks).as_dict()}
    manifest.add(write_json(peak_doc, out / f"peaks_{tag}.json"))
    manifest.add(write_json(moments, out / f"moments_{tag}.json"))
    return {
        "moments": moments,
        "negativity": {"negative": neg.negative, "min_density": neg.min_density, "floor": neg.floor,
                       "regions": neg.regions},
    }


def cmd_run(args):
    cfg = build_config(args)
    schemes = [SchemeKind.parse(s) for s in (args.scheme or [s.value for s in SCHEMES])]
    out = _prepare_out(args.out)
    manifest = _Manifest("run", cfg, schemes)
    summary = {"schemes": {}}
    workers = worker_count()
    for scheme in schemes:
        table = sweep(scheme, cfg, workers=workers)
        manifest.add(write_qcgf_csv(table, out / f"qcgf_{scheme.value}.csv"))
        entry = analyze_table(table, out, scheme.value, manifest)
        pipeline = spectral.scheme_average(scheme, cfg) if cfg.mode == "exact" else spectral.average_from_slope(table)
        entry["average"] = pipeline.as_dict()
        summary["schemes"][scheme.value] = entry
    if len(set(schemes)) == 3:
        avg = {k: spectral.MomentReport(**{**v["average"]}) for k, v in summary["schemes"].items()}
        summary["conservation"] = spectral.conservation_check(avg["du"], avg["w"], avg["q"]).as_dict()
    manifest.add(write_json(summary, out / "summary.json"))
    manifest.write(out)
    return 0


def _parse_p_list(text):
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse p list {text!r}", field="p") from None
    if not values:
        raise ConfigError("p list is empty", field="p")
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise ConfigError(f"p must lie in [0, 1], got {v}", field="p")
    return values


def cmd_sweep_p(args):
    cfg = build_config(args)
    p_values = _parse_p_list(args.p_list)
    out = _prepare_out(args.out)
    manifest = _Manifest("sweep-p", cfg, SCHEMES)
    rows = []
    for p in p_values:
        c = cfg.replace(p=p)
        reports, _ = spectral.pipeline_averages(c)
        t = tmp_averages(tmp_distribution(c))
        row = {"p": p}
        for k in ("du", "w", "q"):
            row[k], row[k + "_err"] = reports[k].mean, reports[k].stderr
            row["tmp_" + k] = t[k]
        rows.append(row)
    manifest.add(write_averages_csv(rows, out / "averages_vs_p.csv"))
    manifest.write(out)
    return 0


def cmd_tmp(args):
    cfg = build_config(args)
    out = _prepare_out(args.out)
    manifest = _Manifest("tmp", cfg)
    dist = tmp_distribution(cfg)
    manifest.add(write_tmp_csv(dist, out / "tmp_dist.csv"))
    doc = {
        "averages": tmp_averages(dist),
        "mass": {k: {str(e): m for e, m in dist.mass(k).items()} for k in ("du", "q", "w")},
    }
    manifest.add(write_json(doc, out / "tmp_averages.json"))
    manifest.write(out)
    return 0


def cmd_analyze(args):
    cfg = build_config(args)
    table = read_qcgf_csv(args.qcgf_csv, args.scheme or "du", cfg)
    out = _prepare_out(args.out)
    manifest = _Manifest("analyze", table.config, [table.scheme])
    manifest.data["input"] = str(args.qcgf_csv)
    tag = table.scheme.value
    summary = analyze_table(table, out, tag, manifest)
    manifest.add(write_json(summary, out / f"summary_{tag}.json"))
    manifest.write(out)
    return 0


def make_parser():
    parser = argparse.ArgumentParser(prog="qthermo", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="sweep chi for one or more schemes and analyse")
    p_run.add_argument("--scheme", action="append", choices=[s.value for s in SCHEMES])
    _add_config_args(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep-p", help="averages versus relaxation probability")
    p_sweep.add_argument("--p-list", default="0,0.25,0.5,0.75,1")
    _add_config_args(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep_p)

    p_tmp = sub.add_parser("tmp", help="two-measurement protocol reference distribution")
    _add_config_args(p_tmp)
    p_tmp.set_defaults(func=cmd_tmp)

    p_an = sub.add_parser("analyze", help="re-analyse a stored QCGF table")
    p_an.add_argument("qcgf_csv", type=Path)
    p_an.add_argument("--scheme", choices=[s.value for s in SCHEMES])
    _add_config_args(p_an)
    p_an.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        field = f" [{exc.field}]" if exc.field else ""
        print(f"qthermo: config error{field}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AnalysisError as exc:
        print(f"qthermo: analysis error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except OSError as exc:
        print(f"qthermo: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
