"""Shared helpers for the experiment scripts."""

import argparse

import numpy as np

from walkdist import expcli
from walkdist.stats import summarize


def parser(doc, **defaults):
    p = argparse.ArgumentParser(description=doc.strip().splitlines()[0])
    p.add_argument("--seed", type=int, default=defaults.get("seed", 1))
    p.add_argument("--replicas", type=int, default=defaults.get("replicas", 20))
    p.add_argument("--workers", type=int, default=1)
    return p


def run(model, n, times, replicas, seed, workers=1, **extra):
    """Normalized distances per scaled time, via the CLI configuration path."""
    values = {"model": model, "n": str(n), "times": ",".join(repr(float(t)) for t in times),
              "replicas": replicas, "master_seed": seed, "workers": workers, **extra}
    cfg = expcli.build_config(values)
    out = {}
    for row in expcli.run_simulation(cfg):
        out.setdefault(row["scaled_time"], []).append(row["normalized_distance"])
    return {t: np.asarray(v) for t, v in out.items()}


def table(samples, theory, label="t"):
    print(f"{label:>8} {'mean':>10} {'stderr':>9} {'theory':>10} {'gap':>9}")
    for t, vals in samples.items():
        target = theory(t)
        s = summarize(vals, target)
        se = s.stderr if s.replicas > 1 else float("nan")
        print(f"{t:8.4g} {s.mean:10.5f} {se:9.2e} {target:10.5f} {s.mean - target:+9.5f}")
