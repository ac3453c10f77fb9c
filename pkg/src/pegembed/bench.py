"""Timing and chain-length benchmark: structured construction vs heuristic."""
from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .baseline import HeuristicConfig, HeuristicFailure, heuristic_embed
from .embedder import EmbedderConfig, capacity, embed_biclique
from .lattice import HardwareGraph
from .validator import chain_metrics

ALGORITHMS = ("structured", "heuristic")
HEADER = ("config", "algorithm", "trials", "avg_time_s", "std_time_s",
          "avg_chains_ge_6", "std_chains_ge_6")
FAILED_COLUMN = "failed_trials"
CHAIN_THRESHOLD = 6


@dataclass(frozen=True)
class BenchConfig:
    sizes: tuple = tuple((n, n) for n in range(40, 121, 20))
    trials: int = 100
    algorithms: tuple = ALGORITHMS
    seed: int = 0
    m: int = 4
    n: int = 8
    heuristic_tries: int = 10
    heuristic_timeout: float | None = None
    overuse_base: float = 8.0

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple((int(v), int(h)) for v, h in self.sizes))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        bad = [a for a in self.algorithms if a not in ALGORITHMS]
        if bad or not self.algorithms:
            raise ValueError(f"algorithms must be a non-empty subset of {ALGORITHMS}, got {bad}")


@dataclass(frozen=True)
class BenchRecord:
    config: str
    algorithm: str
    trials: int
    avg_time_s: float
    std_time_s: float
    avg_chains_ge_6: float
    std_chains_ge_6: float
    failed_trials: int = 0
    times: tuple = field(default=(), repr=False, compare=False)

    @property
    def median_time_s(self) -> float:
        return float(np.median(self.times)) if self.times else math.nan

    def row(self, with_failures: bool) -> list[str]:
        cells = [self.config, self.algorithm, str(self.trials),
                 f"{self.avg_time_s:.6e}", f"{self.std_time_s:.6e}",
                 _metric(self.avg_chains_ge_6), _metric(self.std_chains_ge_6)]
        if with_failures:
            cells.append(str(self.failed_trials))
        return cells


def _metric(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.4f}"


def _mean_std(xs) -> tuple[float, float]:
    """Mean and sample (n-1) standard deviation; a single sample has std 0."""
    if not xs:
        return math.nan, math.nan
    a = np.asarray(xs, dtype=float)
    return float(a.mean()), float(a.std(ddof=1)) if len(a) > 1 else 0.0


def trial_seed(base: int, V: int, H: int, trial: int) -> int:
    return int(np.random.SeedSequence([base, V, H, trial]).generate_state(1)[0])


def _run_structured(V, H, cfg: BenchConfig, graph: HardwareGraph, ecfg: EmbedderConfig):
    times, counts = [], []
    for _ in range(cfg.trials):
        t0 = time.perf_counter()
        e = embed_biclique(V, H, ecfg, graph)
        times.append(time.perf_counter() - t0)
        counts.append(chain_metrics(e, CHAIN_THRESHOLD).count_ge_threshold)
    return times, counts, 0


def _run_heuristic(V, H, cfg: BenchConfig, graph: HardwareGraph):
    times, counts, failed = [], [], 0
    for t in range(cfg.trials):
        hcfg = HeuristicConfig(seed=trial_seed(cfg.seed, V, H, t), max_tries=cfg.heuristic_tries,
                               overuse_base=cfg.overuse_base, timeout=cfg.heuristic_timeout)
        t0 = time.perf_counter()
        try:
            e = heuristic_embed(V, H, graph, hcfg)
        except HeuristicFailure:
            e = None
        times.append(time.perf_counter() - t0)
        if e is None:
            failed += 1
        else:
            counts.append(chain_metrics(e, CHAIN_THRESHOLD).count_ge_threshold)
    return times, counts, failed


def run_bench(cfg: BenchConfig, graph: HardwareGraph) -> list[BenchRecord]:
    """Time every (size, algorithm) pair over ``cfg.trials`` runs.

    Only the embedding call is timed.  Failed heuristic trials count
    towards the time statistics (they spent that time) but not towards the
    chain statistics, and are reported in ``failed_trials``.
    """
    if graph.params is None:
        raise ValueError("benchmark graph needs lattice parameters")
    ecfg = EmbedderConfig(graph.params, cfg.m, cfg.n)
    if "structured" in cfg.algorithms:
        v_max, h_max = capacity(ecfg)
        too_big = [(V, H) for V, H in cfg.sizes if V > v_max or H > h_max]
        if too_big:
            raise ValueError(f"sizes {too_big} exceed structured capacity ({v_max}, {h_max})")

    records = []
    for V, H in sorted(set(cfg.sizes)):
        for alg in sorted(cfg.algorithms):
            if alg == "structured":
                times, counts, failed = _run_structured(V, H, cfg, graph, ecfg)
            else:
                times, counts, failed = _run_heuristic(V, H, cfg, graph)
            t_mean, t_std = _mean_std(times)
            c_mean, c_std = _mean_std(counts)
            records.append(BenchRecord(f"{V}x{H}", alg, cfg.trials, t_mean, t_std,
                                       c_mean, c_std, failed, tuple(times)))
    return records


def to_csv(records: list[BenchRecord], with_failures: bool | None = None) -> str:
    """CSV text with LF line endings.  The ``failed_trials`` column is
    appended when any heuristic row is present (or when forced)."""
    if with_failures is None:
        with_failures = any(r.algorithm == "heuristic" for r in records)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER + ((FAILED_COLUMN,) if with_failures else ()))
    for r in records:
        w.writerow(r.row(with_failures))
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))
