import csv
import io
import math

import pytest

from pegembed.bench import HEADER, BenchConfig, BenchRecord, read_csv, run_bench, to_csv, trial_seed
from pegembed.lattice import LatticeParams, build_lattice

HEADER_LINE = "config,algorithm,trials,avg_time_s,std_time_s,avg_chains_ge_6,std_chains_ge_6"


def metric_columns(text):
    return [(r["config"], r["algorithm"], r["trials"], r["avg_chains_ge_6"], r["std_chains_ge_6"],
             r.get("failed_trials")) for r in read_csv(text)]


def test_header_and_structured_120(g16):
    recs = run_bench(BenchConfig(sizes=[(120, 120)], trials=2, algorithms=["structured"]), g16)
    text = to_csv(recs)
    assert text.splitlines()[0] == HEADER_LINE
    assert ",".join(HEADER) == HEADER_LINE
    (rec,) = recs
    assert rec.avg_chains_ge_6 == 240 and rec.std_chains_ge_6 == 0
    assert rec.avg_time_s < 0.014


def test_single_trial_has_zero_std(g16):
    recs = run_bench(BenchConfig(sizes=[(40, 40)], trials=1, algorithms=["structured"]), g16)
    assert len(recs) == 1
    assert recs[0].std_time_s == 0.0 and recs[0].std_chains_ge_6 == 0.0


def test_rows_sorted_and_failures_column():
    g = build_lattice(LatticeParams(4, 12))
    cfg = BenchConfig(sizes=[(16, 16), (4, 4)], trials=2, seed=5, heuristic_tries=2)
    recs = run_bench(cfg, g)
    assert [(r.config, r.algorithm) for r in recs] == [
        ("4x4", "heuristic"), ("4x4", "structured"), ("16x16", "heuristic"), ("16x16", "structured")]
    text = to_csv(recs)
    assert text.splitlines()[0] == HEADER_LINE + ",failed_trials"
    rows = list(csv.reader(io.StringIO(text)))
    assert all(len(r) == 8 for r in rows)
    failed = {(r.config, r.algorithm): r.failed_trials for r in recs}
    assert failed[("16x16", "structured")] == 0
    # K(16,16) on M=4 does not converge in two sweeps
    assert failed[("16x16", "heuristic")] == 2
    row = next(r for r in read_csv(text) if r["config"] == "16x16" and r["algorithm"] == "heuristic")
    assert row["avg_chains_ge_6"] == "nan"
    assert float(row["avg_time_s"]) > 0


def test_metric_columns_reproducible():
    g = build_lattice(LatticeParams(4, 12))
    cfg = BenchConfig(sizes=[(6, 6), (10, 10)], trials=3, seed=11)
    a, b = to_csv(run_bench(cfg, g)), to_csv(run_bench(cfg, g))
    assert metric_columns(a) == metric_columns(b)


def test_sample_std():
    g = build_lattice(LatticeParams(4, 12))
    recs = run_bench(BenchConfig(sizes=[(8, 8)], trials=4, algorithms=["heuristic"], seed=2), g)
    from pegembed.baseline import HeuristicConfig, heuristic_embed
    from pegembed.validator import chain_metrics
    import numpy as np
    counts = [chain_metrics(heuristic_embed(8, 8, g, HeuristicConfig(seed=trial_seed(2, 8, 8, t))))
              .count_ge_threshold for t in range(4)]
    assert recs[0].failed_trials == 0
    assert math.isclose(recs[0].avg_chains_ge_6, np.mean(counts))
    assert math.isclose(recs[0].std_chains_ge_6, np.std(counts, ddof=1))


def test_config_errors(g16):
    with pytest.raises(ValueError):
        BenchConfig(trials=0)
    with pytest.raises(ValueError):
        BenchConfig(algorithms=["annealing"])
    with pytest.raises(ValueError):
        run_bench(BenchConfig(sizes=[(8, 121)], trials=1, algorithms=["structured"]), g16)


def test_record_median():
    r = BenchRecord("1x1", "structured", 3, 0.0, 0.0, 0.0, 0.0, times=(3.0, 1.0, 2.0))
    assert r.median_time_s == 2.0
