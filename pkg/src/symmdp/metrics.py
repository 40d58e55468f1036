"""Operation-count and space reporting for analysis runs.

A ``MetricsReport`` row records the instance descriptor, per-category
symbolic operation counts, the peak number of simultaneously live sets,
and the maximum recursion depth of the decomposition.  Reports serialise
deterministically: fixed field order, and wall time is only recorded when
explicitly requested so that repeated runs stay byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass

from .core import OP_KINDS
from .mec import (RunStats, classical_mec_stream, default_gamma,
                  gamma_for_epsilon, mec_stream)

CSV_FIELDS = ("family", "n", "m", "seed", "algo", "epsilon", "gamma",
              "ops_pre", "ops_post", "ops_basic_set", "ops_pick",
              "ops_cardinality", "total_ops", "peak_live_sets",
              "recursion_depth", "wall_time_s")


@dataclass
class MetricsReport:
    family: str
    n: int
    m: int
    seed: int
    algo: str
    epsilon: float | None
    gamma: int | None
    op_counts: dict
    total_ops: int
    peak_live_sets: int
    recursion_depth: int
    wall_time_s: float | None = None

    def to_dict(self):
        d = {
            "family": self.family,
            "n": self.n,
            "m": self.m,
            "seed": self.seed,
            "algo": self.algo,
            "epsilon": self.epsilon,
            "gamma": self.gamma,
            "op_counts": {k: self.op_counts[k] for k in OP_KINDS},
            "total_ops": self.total_ops,
            "peak_live_sets": self.peak_live_sets,
            "recursion_depth": self.recursion_depth,
        }
        if self.wall_time_s is not None:
            d["wall_time_s"] = self.wall_time_s
        return d

    def to_csv_row(self):
        return {
            "family": self.family, "n": self.n, "m": self.m, "seed": self.seed,
            "algo": self.algo,
            "epsilon": "" if self.epsilon is None else self.epsilon,
            "gamma": "" if self.gamma is None else self.gamma,
            "ops_pre": self.op_counts["pre"],
            "ops_post": self.op_counts["post"],
            "ops_basic_set": self.op_counts["basic_set"],
            "ops_pick": self.op_counts["pick"],
            "ops_cardinality": self.op_counts["cardinality"],
            "total_ops": self.total_ops,
            "peak_live_sets": self.peak_live_sets,
            "recursion_depth": self.recursion_depth,
            "wall_time_s": "" if self.wall_time_s is None else f"{self.wall_time_s:.6f}",
        }


def report_from_meter(meter, *, family, n, m, seed, algo, epsilon, gamma,
                      recursion_depth, wall_time_s=None):
    snap = meter.snapshot()
    return MetricsReport(family=family, n=n, m=m, seed=seed, algo=algo,
                         epsilon=epsilon, gamma=gamma,
                         op_counts=dict(snap.op_counts),
                         total_ops=snap.total_ops,
                         peak_live_sets=snap.peak_live_sets,
                         recursion_depth=recursion_depth,
                         wall_time_s=wall_time_s)


def run_mec_metrics(model, algo="separator", gamma=None, epsilon=None,
                    timings=False):
    """Run one MEC decomposition with a fresh meter.

    MECs are consumed from the stream and immediately converted to id lists
    (then released), matching the immediate-output space accounting.
    Returns (sorted list of id tuples, non-MEC ids, MetricsReport).
    """
    if epsilon is not None and gamma is None:
        gamma = gamma_for_epsilon(model.n, epsilon)
    P = model.to_symbolic()
    if algo == "separator" and gamma is None:
        gamma = default_gamma(model.n)
    stats = RunStats()
    start = time.perf_counter()
    if algo == "separator":
        stream = mec_stream(P, gamma, stats)
    elif algo == "classical":
        stream = classical_mec_stream(P)
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    mec_ids = []
    for m in stream:
        mec_ids.append(tuple(int(x) for x in m.to_ids()))
        m.release()
    elapsed = time.perf_counter() - start
    mec_ids.sort(key=lambda t: t[0])
    covered = set()
    for t in mec_ids:
        covered.update(t)
    non_mec = sorted(set(range(model.n)) - covered)
    report = report_from_meter(
        P.ctx.meter,
        family=model.meta.get("family", "file"), n=model.n, m=model.m,
        seed=model.meta.get("seed", 0), algo=algo, epsilon=epsilon, gamma=gamma,
        recursion_depth=stats.max_depth,
        wall_time_s=elapsed if timings else None)
    P.release()
    return mec_ids, non_mec, report


def bench_matrix(families, n_list, epsilon_list, seeds, algos=("separator", "classical"),
                 avg_degree=4.0, random_fraction=0.3, cycle_len=8, timings=False):
    """One MetricsReport row per (family, n, seed, epsilon, algo)."""
    from .generators import generate

    rows = []
    for family in families:
        for n in n_list:
            for seed in seeds:
                model = generate(family, n, avg_degree=avg_degree,
                                 random_fraction=random_fraction, seed=seed,
                                 cycle_len=cycle_len)
                for epsilon in epsilon_list:
                    for algo in algos:
                        _, _, rep = run_mec_metrics(model, algo=algo,
                                                    epsilon=epsilon,
                                                    timings=timings)
                        rows.append(rep)
    return rows


def rows_to_json(rows):
    return json.dumps([r.to_dict() for r in rows], indent=2) + "\n"


def rows_to_csv(rows):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(r.to_csv_row())
    return buf.getvalue()


def loglog_slope(ns, values):
    """Least-squares slope of log(values) against log(ns)."""
    import numpy as np

    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    return float(np.polyfit(x, y, 1)[0])
