"""Command-line entry point: ``spreamble --figure succ-k --out succ-k.csv``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .experiment import FIGURES, ExperimentConfig, parse_grid, run_all, run_experiment

# config-file keys that map onto command-line destinations
_KEYS = {"figure": "figure", "m": "m", "l": "l", "k": "k", "b": "b", "snr-db": "snr_db",
         "omega-db": "omega_db", "trials": "trials", "seed": "seed", "out": "out",
         "workers": "workers", "sweep": "sweep", "kappa-source": "kappa_source"}


def read_config(path) -> dict:
    """Parse a ``key=value`` file; blank lines and ``#`` comments are ignored."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower().replace("_", "-")
        if key not in _KEYS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        values[_KEYS[key]] = value
    return values


def build_parser() -> argparse.ArgumentParser:
    figs = ", ".join(FIGURES) + ", all"
    p = argparse.ArgumentParser(prog="spreamble",
                                description="Monte Carlo curves for grant-free random access with S-preambles.")
    p.add_argument("--config", help="key=value file; command-line flags take precedence")
    p.add_argument("--figure", help=f"figure id ({figs})")
    p.add_argument("--m", type=int, help="antennas M")
    p.add_argument("--l", type=int, help="pool size L")
    p.add_argument("--k", type=int, help="active devices K")
    p.add_argument("--b", help="schemes to run: 1, 2 or 1,2 (default both)")
    p.add_argument("--snr-db", type=float, help="receive SNR in dB")
    p.add_argument("--omega-db", type=float, help="SINR threshold in dB")
    p.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    p.add_argument("--seed", type=int, help="master seed (default 2020)")
    p.add_argument("--out", help="CSV path, or directory for --figure all")
    p.add_argument("--workers", type=int, help="worker processes (default 1)")
    p.add_argument("--sweep", help="override the grid: lo:hi:step or v1,v2,...")
    p.add_argument("--kappa-source", choices=("genie", "estimated"),
                   help="component counts for the detector (default genie)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _merge(args: argparse.Namespace) -> dict:
    merged = read_config(args.config) if args.config else {}
    for key in _KEYS.values():
        value = getattr(args, key)
        if value is not None:
            merged[key] = value
    return merged


def _config_from(opts: dict) -> ExperimentConfig:
    def get(key, cast):
        return cast(opts[key]) if opts.get(key) is not None else None

    b = opts.get("b")
    return ExperimentConfig(
        figure=opts["figure"],
        grid=parse_grid(str(opts["sweep"])) if opts.get("sweep") else None,
        M=get("m", int), L=get("l", int), K=get("k", int),
        B=tuple(int(v) for v in str(b).split(",")) if b else (1, 2),
        snr_db=get("snr_db", float), omega_db=get("omega_db", float),
        trials=get("trials", int),
        seed=get("seed", int) if opts.get("seed") is not None else 2020,
        out=opts.get("out"),
        workers=get("workers", int) or 1,
        kappa_source=opts.get("kappa_source") or "genie",
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        opts = _merge(args)
        if not opts.get("figure"):
            parser.error("--figure is required")
        if opts["figure"] == "all":
            outdir = opts.get("out") or "results"
            seed = int(opts.get("seed") or 2020)
            trials = int(opts["trials"]) if opts.get("trials") else None
            runtimes = run_all(seed, outdir, trials=trials, workers=int(opts.get("workers") or 1))
            for name, sec in runtimes.items():
                print(f"{name:12s} {sec:8.1f} s")
            return 0
        if opts["figure"] not in FIGURES:
            parser.error(f"unknown figure {opts['figure']!r}")
        cfg = _config_from(opts)
        points = run_experiment(cfg)
    except (ValueError, OSError) as exc:
        print(f"spreamble: error: {exc}", file=sys.stderr)
        return 1
    if not cfg.out:
        print("x,series,value,stderr,trials")
        for pt in points:
            print(f"{pt.x:.9g},{pt.series},{pt.value:.9g},{pt.stderr:.9g},{pt.trials}")
    else:
        print(f"wrote {len(points)} points to {cfg.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
