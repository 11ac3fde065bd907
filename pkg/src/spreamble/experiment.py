"""Figure-level sweeps, parallel trial execution and CSV output."""

from __future__ import annotations

import csv
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .analytics import (binomial_avg_error, collision_free_prob, db_to_linear,
                        zc_success_prob)
from .estimation import rank_sums
from .simulate import LinkSetup, detection_counts, link_counts, theory_counts

log = logging.getLogger(__name__)

__all__ = [
    "FIGURES",
    "CurvePoint",
    "ExperimentConfig",
    "run_experiment",
    "run_all",
    "write_csv",
    "parse_grid",
]

CSV_HEADER = ("x", "series", "value", "stderr", "trials")


@dataclass(frozen=True)
class Figure:
    sweep: str
    grid: tuple
    params: dict
    trials: int
    description: str


FIGURES: dict[str, Figure] = {
    "pnc": Figure("K", tuple(range(1, 51)), dict(L=64), 0,
                  "collision-free probability vs K (analytic)"),
    "rank": Figure("K", tuple(range(1, 65)), dict(L=64), 500,
                   "average rank of PhiBar vs K"),
    "spd-snr": Figure("snr_db", tuple(range(0, 15, 2)), dict(M=100, L=32, K=20), 2000,
                      "FA/MD of S-preamble detection vs SNR"),
    "spd-m": Figure("M", (25, 50, 100, 200, 400), dict(L=32, K=20, snr_db=10.0), 2000,
                    "FA/MD of S-preamble detection vs M"),
    "spd-k": Figure("K", tuple(range(4, 41, 4)), dict(M=100, L=32, snr_db=10.0), 2000,
                    "FA/MD of S-preamble detection vs K"),
    "succ-omega": Figure("omega_db", tuple(range(0, 11)), dict(M=100, K=16, L=32, snr_db=10.0), 2000,
                         "success probability vs SINR threshold"),
    "succ-snr": Figure("snr_db", tuple(range(-2, 15, 2)), dict(M=100, K=16, L=32, omega_db=6.0), 2000,
                       "success probability vs SNR"),
    "succ-k": Figure("K", tuple(range(2, 33, 2)), dict(M=100, L=32, snr_db=10.0, omega_db=6.0), 2000,
                     "success probability vs K"),
    "succ-l": Figure("L", tuple(range(16, 65, 8)), dict(M=100, K=20, snr_db=10.0, omega_db=6.0), 2000,
                     "success probability vs L"),
    "succ-m": Figure("M", (25, 50, 100, 200, 400), dict(K=16, L=32, snr_db=10.0, omega_db=6.0), 2000,
                     "success probability vs M"),
}

_BASE = dict(M=100, L=32, K=16, snr_db=10.0, omega_db=6.0)


@dataclass(frozen=True)
class CurvePoint:
    x: float
    series: str
    value: float
    stderr: float
    trials: int


@dataclass(frozen=True)
class ExperimentConfig:
    """One figure run. ``None`` parameters take the figure defaults."""

    figure: str
    grid: tuple | None = None
    M: int | None = None
    L: int | None = None
    K: int | None = None
    B: tuple[int, ...] = (1, 2)
    snr_db: float | None = None
    omega_db: float | None = None
    trials: int | None = None
    seed: int = 2020
    out: str | None = None
    workers: int = 1
    kappa_source: str = "genie"

    def __post_init__(self):
        if self.figure not in FIGURES:
            raise ValueError(f"unknown figure {self.figure!r}; choose from {', '.join(FIGURES)}")
        if self.grid is not None and len(self.grid) == 0:
            raise ValueError("sweep grid is empty")
        if self.trials is not None and self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not set(self.B) <= {1, 2} or not self.B:
            raise ValueError(f"B must be a subset of {{1, 2}}, got {self.B}")

    def resolved(self) -> dict:
        """Fixed parameters after applying figure defaults and overrides."""
        fig = FIGURES[self.figure]
        params = dict(_BASE, **fig.params)
        for name in ("M", "L", "K", "snr_db", "omega_db"):
            value = getattr(self, name)
            if value is not None:
                params[name] = value
        params["grid"] = tuple(self.grid) if self.grid is not None else fig.grid
        params["trials"] = self.trials if self.trials is not None else fig.trials
        return params


def parse_grid(text: str) -> tuple:
    """``lo:hi:step`` (inclusive of ``hi``) or a comma-separated list."""
    if ":" in text:
        lo, hi, step = (float(v) for v in text.split(":"))
        if step <= 0:
            raise ValueError(f"sweep step must be positive in {text!r}")
        n = int(math.floor((hi - lo) / step + 1e-9)) + 1
        values = [lo + i * step for i in range(max(n, 0))]
    else:
        values = [float(v) for v in text.split(",") if v.strip()]
    if not values:
        raise ValueError(f"empty sweep {text!r}")
    return tuple(int(v) if float(v).is_integer() else v for v in values)


def _run_trials(fn: Callable, args: tuple, trials: int, workers: int,
                pool: ProcessPoolExecutor | None) -> np.ndarray:
    """Sum ``fn(*args, start, stop)`` over contiguous chunks of ``[0, trials)``."""
    if pool is None or workers == 1:
        return fn(*args, 0, trials)
    nchunks = min(trials, workers * 4)
    bounds = np.linspace(0, trials, nchunks + 1).astype(int)
    futures = [pool.submit(fn, *args, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    total = None
    for f in futures:
        part = f.result()
        total = part if total is None else total + part
    return total


def _binomial_se(p: float, n: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


def _at(params: dict, sweep: str, x) -> dict:
    p = dict(params)
    p[sweep] = x
    return p


def _detection_points(cfg, params, fig, pool) -> list[CurvePoint]:
    out = []
    n = params["trials"]
    for x in params["grid"]:
        p = _at(params, fig.sweep, x)
        M, L, K = int(p["M"]), int(p["L"]), int(p["K"])
        snr = db_to_linear(p["snr_db"])
        setup = LinkSetup(M=M, K=K, L=L, B=2, snr=snr, kappa_source=cfg.kappa_source)
        fa, unused, md, used = _run_trials(detection_counts, (setup, cfg.seed), n, cfg.workers, pool)
        p_fa = fa / unused if unused else 0.0
        p_md = md / used if used else 0.0
        Q = math.comb(L, 2)
        pbar = binomial_avg_error(M, snr, L, Q, min(K, L - 1))
        out += [CurvePoint(x, "fa", p_fa, _binomial_se(p_fa, n), n),
                CurvePoint(x, "md", p_md, _binomial_se(p_md, n), n),
                CurvePoint(x, "analytic", pbar, 0.0, 0)]
    return out


def _success_points(cfg, params, fig, pool) -> list[CurvePoint]:
    out = []
    n = params["trials"]
    grid = params["grid"]
    # an omega sweep reuses the same trials for every threshold
    groups = [grid] if fig.sweep == "omega_db" else [(x,) for x in grid]
    for xs in groups:
        p = _at(params, fig.sweep, xs[0])
        M, L, K = int(p["M"]), int(p["L"]), int(p["K"])
        snr = db_to_linear(p["snr_db"])
        omega_dbs = xs if fig.sweep == "omega_db" else (p["omega_db"],)
        omegas = [db_to_linear(w) for w in omega_dbs]
        Q = math.comb(L, 2)
        for B in sorted(cfg.B, reverse=True):
            boost = 2.0 if B == 1 else 1.0
            setup = LinkSetup(M=M, K=K, L=L, B=B, snr=snr * boost, kappa_source=cfg.kappa_source)
            counts = _run_trials(link_counts, (setup, omegas, cfg.seed), n, cfg.workers, pool)
            theory = _run_trials(theory_counts, (setup, omegas, cfg.seed), n, cfg.workers, pool)
            ceiling = collision_free_prob(Q if B == 2 else L, K)
            name = "proposed-B2" if B == 2 else "conventional-B1"
            for i, x in enumerate(xs):
                ps = counts[i] / counts[-2]
                pt = ceiling * theory[i] / theory[-1]
                out += [CurvePoint(x, name, ps, _binomial_se(ps, n), n),
                        CurvePoint(x, f"theory-mc-B{B}", pt, ceiling * _binomial_se(theory[i] / n, n), n),
                        CurvePoint(x, f"ceiling-B{B}", ceiling, 0.0, 0)]
                if B == 2:
                    pd = counts[-1] / n
                    out.append(CurvePoint(x, "rank-deficient-B2", pd, _binomial_se(pd, n), n))
        for x, omega in zip(xs, omegas):
            out.append(CurvePoint(x, "zc-analytic", zc_success_prob(L, Q, K, omega), 0.0, 0))
    return out


def _pnc_points(cfg, params, fig, pool) -> list[CurvePoint]:
    out = []
    for x in params["grid"]:
        p = _at(params, fig.sweep, x)
        L, K = int(p["L"]), int(p["K"])
        for B in sorted(cfg.B):
            size = L if B == 1 else math.comb(L, 2)
            out.append(CurvePoint(x, f"analytic-B{B}", collision_free_prob(size, K), 0.0, 0))
    return out


def _rank_points(cfg, params, fig, pool) -> list[CurvePoint]:
    out = []
    n = params["trials"]
    for x in params["grid"]:
        p = _at(params, fig.sweep, x)
        L, K = int(p["L"]), int(p["K"])
        s1, s2 = _run_trials(rank_sums, (L, K, cfg.seed), n, cfg.workers, pool)
        mean = s1 / n
        var = max(s2 / n - mean * mean, 0.0) * n / max(n - 1, 1)
        out += [CurvePoint(x, "rank", mean, math.sqrt(var / n), n),
                CurvePoint(x, "columns", float(K), 0.0, 0)]
    return out


_RUNNERS = {"pnc": _pnc_points, "rank": _rank_points}


def _runner(figure: str):
    if figure in _RUNNERS:
        return _RUNNERS[figure]
    return _detection_points if figure.startswith("spd-") else _success_points


def write_csv(points: Sequence[CurvePoint], path) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for pt in points:
                w.writerow([f"{pt.x:.9g}", pt.series, f"{pt.value:.9g}", f"{pt.stderr:.9g}", pt.trials])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def run_experiment(cfg: ExperimentConfig) -> list[CurvePoint]:
    """Compute every curve point of ``cfg.figure``; write the CSV if ``cfg.out`` is set."""
    fig = FIGURES[cfg.figure]
    params = cfg.resolved()
    t0 = time.perf_counter()
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            points = _runner(cfg.figure)(cfg, params, fig, pool)
    else:
        points = _runner(cfg.figure)(cfg, params, fig, None)
    log.info("%s: %d points in %.1f s", cfg.figure, len(points), time.perf_counter() - t0)
    if cfg.out:
        write_csv(points, cfg.out)
    return points


def run_all(seed: int, outdir, trials: int | None = None, workers: int = 1) -> dict[str, float]:
    """Write ``<figure>.csv`` for every figure into ``outdir``; return runtimes in seconds.

    Runtimes also go to ``outdir/runtimes.txt``, kept apart from the CSVs
    so those stay byte-identical between runs.
    """
    outdir = Path(outdir)
    runtimes = {}
    for name in FIGURES:
        cfg = ExperimentConfig(figure=name, seed=seed, trials=trials, workers=workers,
                               out=str(outdir / f"{name}.csv"))
        t0 = time.perf_counter()
        run_experiment(cfg)
        runtimes[name] = time.perf_counter() - t0
    with (outdir / "runtimes.txt").open("w") as fh:
        for name, sec in runtimes.items():
            fh.write(f"{name}\t{sec:.2f}\n")
    return runtimes

