"""``walkdist`` command line: simulate, curve, compare, diag, graph-export.

Exit codes: 0 all pass, 1 comparison failure, 2 configuration error,
3 runtime or tolerance error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from . import cubic_graph, limit_curves, stats
from .walkers import (
    Model,
    a_shuffle,
    replicate,
    simulate_adjacent_transpositions,
    simulate_hypercube,
    simulate_random_transpositions,
    simulate_riffle,
)
from .perm_core import descent_count
from .stats import derive_stream, stream_id_for

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3

TIME_SCALES = ("linear_n", "cubic_n", "log2_n", "shuffles", "alpha")
ALLOWED_SCALES = {
    Model.HYPERCUBE: ("linear_n",),
    Model.RANDOM_TRANSPOSITION: ("linear_n",),
    Model.ADJACENT_TRANSPOSITION: ("linear_n", "cubic_n"),
    Model.CUBIC_GRAPH: ("log2_n",),
    Model.RIFFLE: ("shuffles", "alpha"),
}
DEFAULT_SCALE = {
    Model.HYPERCUBE: "linear_n",
    Model.RANDOM_TRANSPOSITION: "linear_n",
    Model.ADJACENT_TRANSPOSITION: "linear_n",
    Model.CUBIC_GRAPH: "log2_n",
    Model.RIFFLE: "shuffles",
}
SIM_COLUMNS = ("model", "n", "scaled_time", "replica", "distance", "normalized_distance")
CURVE_COLUMNS = ("model", "scaled_time", "theory_value", "evaluator_metadata")
GRAPH_STREAM_BASE = 1 << 23
# the riffle limit is only claimed for alpha above 1/(2 pi)
RIFFLE_ALPHA_MIN = 1.0 / (2.0 * math.pi)


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    model: Model
    n_grid: List[int]
    times: List[float]
    time_scale: str
    replicas: int = 1
    master_seed: int = 0
    tol: float = 1e-6
    dmax: Optional[int] = None
    kmax: int = 64
    eps: float = 0.01
    graphs: int = 1
    simple_graph: bool = False
    out: Optional[str] = None
    format: str = "csv"
    workers: int = 1

    def validate(self, require_n: bool = True) -> "ExperimentConfig":
        if self.replicas < 1:
            raise ConfigError("replicas must be >= 1")
        if require_n and not self.n_grid:
            raise ConfigError("n grid is empty")
        if not self.times:
            raise ConfigError("time grid is empty")
        if list(self.times) != sorted(self.times) or list(self.n_grid) != sorted(self.n_grid):
            raise ConfigError("grids must be sorted")
        if any(t < 0 for t in self.times):
            raise ConfigError("times must be nonnegative")
        if self.time_scale not in ALLOWED_SCALES[self.model]:
            raise ConfigError(f"time_scale {self.time_scale!r} not valid for {self.model.value}; "
                              f"use one of {ALLOWED_SCALES[self.model]}")
        if self.time_scale == "shuffles" and any(t != int(t) for t in self.times):
            raise ConfigError("shuffle counts must be integers")
        if self.time_scale == "alpha" and any(t <= 0 for t in self.times):
            raise ConfigError("alpha values must be positive")
        if not (self.tol > 0 and self.kmax > 0 and self.eps > 0):
            raise ConfigError("tolerances must be positive")
        if self.dmax is not None and self.dmax < 1:
            raise ConfigError("dmax must be positive")
        if self.graphs < 1 or self.graphs > self.replicas:
            raise ConfigError("graphs must lie in 1..replicas")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        minimum = {Model.HYPERCUBE: 1, Model.RIFFLE: 1, Model.CUBIC_GRAPH: 2}.get(self.model, 2)
        if any(n < minimum for n in self.n_grid):
            raise ConfigError(f"n must be >= {minimum} for {self.model.value}")
        if self.model is Model.CUBIC_GRAPH and any(n % 2 for n in self.n_grid):
            raise ConfigError("cubic graphs need even n")
        return self

    def config_hash(self) -> str:
        d = asdict(self)
        for k in ("out", "format", "workers"):
            d.pop(k)
        d["model"] = self.model.value
        blob = json.dumps(d, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def header(self) -> str:
        return f"# walkdist version={__version__} config_hash={self.config_hash()} seed={self.master_seed}"


# -- config parsing ---------------------------------------------------------


def _floats(s: str) -> List[float]:
    return [float(x) for x in str(s).replace(";", ",").split(",") if x.strip()]


def _ints(s: str) -> List[int]:
    out = []
    for x in str(s).replace(";", ",").split(","):
        x = x.strip()
        if not x:
            continue
        if "^" in x:
            b, e = x.split("^")
            out.append(int(b) ** int(e))
        else:
            out.append(int(float(x)))
    return out


def _bool(s) -> bool:
    if isinstance(s, bool):
        return s
    v = str(s).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {s!r}")


def read_config_file(path: str) -> Dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    values: Dict[str, str] = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value")
                k, v = line.split("=", 1)
                values[k.strip().replace("-", "_")] = v.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return values


def build_config(values: Dict[str, object], require_n: bool = True) -> ExperimentConfig:
    v = {k: x for k, x in values.items() if x is not None}
    try:
        model = Model(str(v["model"]))
    except KeyError:
        raise ConfigError("model is required") from None
    except ValueError:
        raise ConfigError(f"unknown model {v['model']!r}; use one of {[m.value for m in Model]}") from None
    if "n_grid" in v:
        n_grid = _ints(v["n_grid"])
    elif "n" in v:
        n_grid = _ints(v["n"])
    elif require_n:
        raise ConfigError("n or n_grid is required")
    else:
        n_grid = []
    if "alpha_grid" in v:
        times = _floats(v["alpha_grid"])
        scale = str(v.get("time_scale", "alpha"))
    elif "times" in v:
        times = _floats(v["times"])
        scale = str(v.get("time_scale", DEFAULT_SCALE[model]))
    else:
        raise ConfigError("times (or alpha_grid) is required")
    if scale not in TIME_SCALES:
        raise ConfigError(f"unknown time_scale {scale!r}")
    seed = v.get("master_seed", v.get("seed", os.environ.get("WALKDIST_SEED", 0)))
    try:
        cfg = ExperimentConfig(
            model=model,
            n_grid=n_grid,
            times=times,
            time_scale=scale,
            replicas=int(v.get("replicas", 1)),
            master_seed=int(seed),
            tol=float(v.get("tol", 1e-6)),
            dmax=None if v.get("dmax") in (None, "", "auto") else int(v["dmax"]),
            kmax=int(v.get("kmax", 64)),
            eps=float(v.get("eps", 0.01)),
            graphs=int(v.get("graphs", 1)),
            simple_graph=_bool(v.get("simple_graph", False)),
            out=None if v.get("out") in (None, "", "-") else str(v["out"]),
            format=str(v.get("format", "csv")),
            workers=int(v.get("workers", 1)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    return cfg.validate(require_n)


# -- simulation ---------------------------------------------------------------


def normalizer(scale: str, n: int) -> float:
    return {
        "linear_n": float(n),
        "cubic_n": float(n) ** 2,
        "log2_n": math.log2(n),
        "shuffles": float(n),
        "alpha": float(n),
    }[scale]


def actual_times(scale: str, n: int, times: Sequence[float]) -> np.ndarray:
    t = np.asarray(times, dtype=float)
    if scale == "linear_n":
        return n * t
    if scale == "cubic_n":
        return float(n) ** 3 * t
    if scale == "log2_n":
        return np.floor(t * math.log2(n)).astype(np.int64)
    return t


def _per_replica_task(cfg: ExperimentConfig, n: int):
    t_actual = actual_times(cfg.time_scale, n, cfg.times)
    model = cfg.model
    if model is Model.HYPERCUBE:
        return lambda rng: simulate_hypercube(n, t_actual, rng).distances
    if model is Model.RANDOM_TRANSPOSITION:
        return lambda rng: simulate_random_transpositions(n, t_actual, rng).distances
    if model is Model.ADJACENT_TRANSPOSITION:
        return lambda rng: simulate_adjacent_transpositions(n, t_actual, rng).distances
    if model is Model.RIFFLE and cfg.time_scale == "shuffles":
        r = t_actual.astype(np.int64)
        return lambda rng: simulate_riffle(n, int(r[-1]), rng).descents[r]
    if model is Model.RIFFLE:
        packets = [max(1, int(round(a * n))) for a in cfg.times]
        return lambda rng: np.array([descent_count(a_shuffle(n, a, rng)) for a in packets])
    raise AssertionError(model)


def _cubic_distances(cfg: ExperimentConfig, n: int) -> np.ndarray:
    steps = actual_times("log2_n", n, cfg.times)
    per_graph = np.array_split(np.arange(cfg.replicas), cfg.graphs)
    out = np.zeros((cfg.replicas, len(cfg.times)), dtype=np.int64)
    code = Model.CUBIC_GRAPH.code
    for gi, reps in enumerate(per_graph):
        grng = derive_stream(cfg.master_seed, stream_id_for(code, n, GRAPH_STREAM_BASE + gi))
        g = cubic_graph.generate(n, cfg.simple_graph, grng)
        lay = cubic_graph.bfs(g, 0)
        for r in reps:
            rng = derive_stream(cfg.master_seed, stream_id_for(code, n, int(r)))
            out[r] = cubic_graph.simulate_walk(g, 0, int(steps[-1]), steps, rng, layers=lay).distances
    return out


def run_simulation(cfg: ExperimentConfig) -> List[dict]:
    rows = []
    for n in cfg.n_grid:
        if cfg.model is Model.CUBIC_GRAPH:
            dist = _cubic_distances(cfg, n)
        else:
            dist = np.array(replicate(_per_replica_task(cfg, n), cfg.replicas, cfg.master_seed,
                                      cfg.model, n, cfg.workers))
        norm = normalizer(cfg.time_scale, n)
        for k, t in enumerate(cfg.times):
            for r in range(cfg.replicas):
                d = int(dist[r, k])
                rows.append({"model": cfg.model.value, "n": n, "scaled_time": float(t), "replica": r,
                             "distance": d, "normalized_distance": d / norm})
    return rows


# -- curves -------------------------------------------------------------------


def curve_value(model: Model, scale: str, t: float, tol: float = 1e-6,
                dmax: Optional[int] = None, kmax: int = 64):
    """Theory value and a short evaluator description for one grid point."""
    if model is Model.HYPERCUBE:
        return limit_curves.hypercube_curve(t), "exact"
    if model is Model.RANDOM_TRANSPOSITION:
        if t == 0:
            return 0.0, "exact"
        v, info = limit_curves.random_transposition_curve(t, tol=tol, return_info=True)
        return v, f"series terms={info['terms']} tail_bound={info['tail_bound']:.3e}"
    if model is Model.ADJACENT_TRANSPOSITION and scale == "linear_n":
        v, info = limit_curves.adjacent_small_curve(t, dmax=dmax, tol=tol, return_info=True)
        return v, f"uniformization tol={tol:g} X={info['X']} dmax={info['dmax']}"
    if model is Model.ADJACENT_TRANSPOSITION:
        if t == 0:
            return 0.0, "exact"
        return limit_curves.large_time_curve(t, kmax=kmax), f"gauss-legendre kmax={kmax}"
    if model is Model.CUBIC_GRAPH:
        return limit_curves.cubic_curve(t), "exact"
    if model is Model.RIFFLE:
        return limit_curves.riffle_curve(t), "exact alpha"
    raise AssertionError(model)


def run_curve(cfg: ExperimentConfig) -> List[dict]:
    if cfg.model is Model.RIFFLE and cfg.time_scale != "alpha":
        raise ConfigError("riffle curves are indexed by alpha; pass --alpha-grid")
    rows = []
    for t in cfg.times:
        v, meta = curve_value(cfg.model, cfg.time_scale, t, cfg.tol, cfg.dmax, cfg.kmax)
        rows.append({"model": cfg.model.value, "scaled_time": float(t), "theory_value": v,
                     "evaluator_metadata": meta})
    return rows


# -- output -------------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def render(rows: List[dict], columns: Sequence[str], header: str, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"header": header.lstrip("# "), "rows": rows}, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(header + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w") as fh:
        fh.write(text)


def read_table(path: str) -> List[dict]:
    """Read a CSV or JSON file written by ``simulate`` or ``curve``."""
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return json.loads(text)["rows"]
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    return list(csv.DictReader(lines))


# -- compare ------------------------------------------------------------------


def _key_time(x) -> str:
    return f"{float(x):.12g}"


def compare(sim_rows: List[dict], curve_rows: List[dict], eps: float) -> dict:
    """Per (model, n, scaled_time) comparison of empirical means with theory."""
    theory = {(r["model"], _key_time(r["scaled_time"])): float(r["theory_value"]) for r in curve_rows}
    groups: Dict[tuple, List[float]] = {}
    for r in sim_rows:
        key = (r["model"], int(r["n"]), _key_time(r["scaled_time"]))
        groups.setdefault(key, []).append(float(r["normalized_distance"]))
    missing = sorted({(m, t) for (m, _, t) in groups} - set(theory))
    if missing:
        raise ConfigError("no theory value for: " + ", ".join(f"{m}@{t}" for m, t in missing))
    points = []
    for (model, n, t), vals in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1], float(kv[0][2]))):
        target = theory[(model, t)]
        s = stats.summarize(vals, target)
        conc = stats.concentration_check(vals, target, eps)
        delta = s.mean - target
        points.append({
            "model": model, "n": n, "scaled_time": float(t), "replicas": s.replicas,
            "mean": s.mean, "stderr": None if math.isnan(s.stderr) else s.stderr,
            "theory": target, "z_score": s.z_score if s.z_score is None or math.isfinite(s.z_score) else str(s.z_score),
            "concentration_fraction": conc, "pass": abs(delta) <= eps,
            "asserted": not (model == Model.RIFFLE.value and float(t) <= RIFFLE_ALPHA_MIN),
        })
    return {"eps": eps, "all_pass": all(p["pass"] for p in points if p["asserted"]), "points": points}


# -- diagnostics ----------------------------------------------------------------


def diag_kernel(ts=(0.01, 0.05, 0.1, 0.5, 2.0), us=(0.0, 0.1, 0.5, 0.9, 1.0), kmax=64) -> dict:
    s, w = np.polynomial.legendre.leggauss(200)
    s, w = 0.5 * (s + 1), 0.5 * w
    worst = 0.0
    for t in ts:
        for u in us:
            mass = float(np.sum(w * limit_curves.reflected_kernel(t, u, s, kmax)))
            worst = max(worst, abs(mass - 1.0))
    return {"kind": "kernel", "max_residual": worst, "pass": worst < 1e-6}


def diag_badv(n: int = 1 << 14, graphs: int = 200, levels: int = 8, seed: int = 0) -> dict:
    bad = np.zeros(levels + 1)
    size = np.zeros(levels + 1)
    code = Model.CUBIC_GRAPH.code
    for gi in range(graphs):
        g = cubic_graph.generate(n, False, derive_stream(seed, stream_id_for(code, n, GRAPH_STREAM_BASE + gi)))
        lay = cubic_graph.bfs(g, 0)
        counts = cubic_graph.classify_bad_vertices(g, 0, lay)
        top = min(levels, lay.eccentricity)
        bad[: top + 1] += counts[: top + 1]
        size[: top + 1] += lay.level_sizes[: top + 1]
    results = []
    for lvl in range(1, levels + 1):
        m = int(size[lvl])
        ind = np.zeros(m)
        ind[: int(bad[lvl])] = 1.0
        chk = stats.bound_check("badv", {"level": lvl, "n": n}, ind)
        results.append({"level": lvl, **chk.to_dict()})
    return {"kind": "badv", "n": n, "graphs": graphs, "levels": results,
            "pass": all(r["passed"] for r in results)}


def _walk_endpoints(t: float, draws: int, rng, jump_mean: Optional[float] = None) -> np.ndarray:
    mu = 2.0 * t if jump_mean is None else jump_mean
    jumps = rng.poisson(mu, size=draws)
    ups = rng.binomial(jumps, 0.5)
    return 2 * ups - jumps


def diag_bounds(seed: int = 0, draws: int = 1_000_000) -> dict:
    """Run the four inequality oracles at their reference points."""
    rng = derive_stream(seed, 0xB0)
    checks = []
    # reflection comparison on the finite interval, n=100, time n t with t=1
    n, t, reps = 100, 1.0, 4000
    i0 = n // 2
    finals = replicate(lambda r: simulate_adjacent_transpositions(n, [n * t], r).final_state,
                       reps, seed, Model.ADJACENT_TRANSPOSITION, n)
    loc = np.array([np.argsort(f) for f in finals])  # location of each particle
    for x in (1, 2, 3, 4, 6, 8):
        ind = (loc[:, i0] > loc[:, i0 + x]).astype(float)
        chk = stats.bound_check("refcomp", {"x": x, "t": t, "jump_mean": 2.0 * t * n / (n - 1)}, ind)
        checks.append({"params": {"x": x, "t": t, "n": n}, **chk.to_dict()})
    # exponential moment bound at theta=1, x = 3 log n, plus interior points
    w1 = _walk_endpoints(1.0, draws, rng)
    for x, th in ((3 * math.log(1000.0), 1.0), (3.0, 1.0), (5.0, 1.5)):
        chk = stats.bound_check("ldbd", {"x": x, "t": 1.0, "theta": th}, (w1 > x).astype(float))
        checks.append({"params": {"x": x, "t": 1.0, "theta": th}, **chk.to_dict()})
    for t_ in (0.25, 1.0, 3.0):
        w = _walk_endpoints(t_, draws, rng)
        x = 4 * math.e * t_
        for xx in (x, 0.5 * x, 2.0 * x):
            chk = stats.bound_check("ld2", {"x": xx, "t": t_}, (w > xx).astype(float))
            checks.append({"params": {"x": xx, "t": t_}, **chk.to_dict()})
    bad = diag_badv(graphs=100, levels=8, seed=seed)
    for lv in bad["levels"]:
        checks.append({"params": {"level": lv["level"], "n": bad["n"]},
                       **{k: lv[k] for k in ("name", "empirical", "stderr", "bound", "margin", "passed")}})
    return {"kind": "bounds", "checks": checks, "pass": all(c["passed"] for c in checks)}


# -- argument parsing -----------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="walkdist", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"walkdist {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="flat key=value config file")
        sp.add_argument("--model", choices=[m.value for m in Model])
        sp.add_argument("--n")
        sp.add_argument("--n-grid", dest="n_grid")
        sp.add_argument("--times")
        sp.add_argument("--alpha-grid", dest="alpha_grid")
        sp.add_argument("--time-scale", dest="time_scale", choices=TIME_SCALES)
        sp.add_argument("--replicas", type=int)
        sp.add_argument("--seed", dest="master_seed", type=int)
        sp.add_argument("--tol", type=float)
        sp.add_argument("--dmax", type=int)
        sp.add_argument("--kmax", type=int)
        sp.add_argument("--graphs", type=int)
        sp.add_argument("--simple-graph", dest="simple_graph", action="store_const", const=True)
        sp.add_argument("--workers", type=int)
        sp.add_argument("--out")
        sp.add_argument("--format", choices=("csv", "json"))

    common(sub.add_parser("simulate", help="run replicated simulations"))
    cp = sub.add_parser("curve", help="evaluate a limit curve on a grid")
    common(cp)

    cmp_ = sub.add_parser("compare", help="compare a simulation file with a curve file")
    cmp_.add_argument("simulation")
    cmp_.add_argument("curve")
    cmp_.add_argument("--eps", type=float, default=0.01)
    cmp_.add_argument("--out")

    dg = sub.add_parser("diag", help="run diagnostics")
    dg.add_argument("--kind", choices=("badv", "bounds", "kernel"), required=True)
    dg.add_argument("--n", type=int, default=1 << 14)
    dg.add_argument("--graphs", type=int, default=200)
    dg.add_argument("--kmax", type=int, default=64)
    dg.add_argument("--seed", type=int, default=None)
    dg.add_argument("--out")

    ge = sub.add_parser("graph-export", help="write a random cubic graph as an edge list")
    ge.add_argument("--n", type=int, required=True)
    ge.add_argument("--seed", type=int, default=None)
    ge.add_argument("--simple-graph", action="store_true")
    ge.add_argument("--out")
    return p


_CONFIG_KEYS = {f.name for f in fields(ExperimentConfig)} | {"n", "n_grid", "alpha_grid", "seed"}


def _config_from_args(args, require_n: bool = True) -> ExperimentConfig:
    values: Dict[str, object] = {}
    if args.config:
        values.update(read_config_file(args.config))
        unknown = set(values) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for k in ("model", "n", "n_grid", "times", "alpha_grid", "time_scale", "replicas", "master_seed",
              "tol", "dmax", "kmax", "graphs", "simple_graph", "workers", "out", "format"):
        val = getattr(args, k, None)
        if val is not None:
            values[k] = val
    # a flag on the command line beats the competing key from the file
    if args.n is not None and args.n_grid is None:
        values.pop("n_grid", None)
    if args.times is not None and args.alpha_grid is None:
        values.pop("alpha_grid", None)
    return build_config(values, require_n)


def _default_seed(seed: Optional[int]) -> int:
    if seed is not None:
        return seed
    try:
        return int(os.environ.get("WALKDIST_SEED", 0))
    except ValueError:
        raise ConfigError("WALKDIST_SEED must be an integer") from None


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "simulate":
            cfg = _config_from_args(args)
            rows = run_simulation(cfg)
            _emit(render(rows, SIM_COLUMNS, cfg.header(), cfg.format), cfg.out)
            return EXIT_OK
        if args.command == "curve":
            cfg = _config_from_args(args, require_n=False)
            rows = run_curve(cfg)
            _emit(render(rows, CURVE_COLUMNS, cfg.header(), cfg.format), cfg.out)
            return EXIT_OK
        if args.command == "compare":
            try:
                sim, cur = read_table(args.simulation), read_table(args.curve)
            except OSError as exc:
                raise ConfigError(f"cannot read input: {exc}") from exc
            if not args.eps > 0:
                raise ConfigError("eps must be positive")
            report = compare(sim, cur, args.eps)
            _emit(json.dumps(report, indent=1) + "\n", args.out)
            return EXIT_OK if report["all_pass"] else EXIT_FAIL
        if args.command == "diag":
            seed = _default_seed(args.seed)
            if args.kind == "kernel":
                report = diag_kernel(kmax=args.kmax)
                print(f"kernel normalization max residual {report['max_residual']:.3e} "
                      f"{'PASS' if report['pass'] else 'FAIL'}")
            elif args.kind == "badv":
                report = diag_badv(args.n, args.graphs, seed=seed)
                for lv in report["levels"]:
                    print(f"level {lv['level']}: bad fraction {lv['empirical']:.5f} "
                          f"bound {lv['bound']:.5f} {'PASS' if lv['passed'] else 'FAIL'}")
            else:
                report = diag_bounds(seed)
                for c in report["checks"]:
                    print(f"{c['name']:8s} {json.dumps(c['params'])}: empirical {c['empirical']:.3e} "
                          f"bound {c['bound']:.3e} {'PASS' if c['passed'] else 'FAIL'}")
            if args.out:
                _emit(json.dumps(report, indent=1) + "\n", args.out)
            return EXIT_OK if report["pass"] else EXIT_FAIL
        if args.command == "graph-export":
            seed = _default_seed(args.seed)
            g = cubic_graph.generate(args.n, args.simple_graph,
                                     derive_stream(seed, stream_id_for(Model.CUBIC_GRAPH.code, args.n,
                                                                       GRAPH_STREAM_BASE)))
            if args.out:
                with open(args.out, "w") as fh:
                    cubic_graph.export_edge_list(g, fh)
            else:
                cubic_graph.export_edge_list(g, sys.stdout)
            return EXIT_OK
    except ConfigError as exc:
        print(f"walkdist: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"walkdist: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"walkdist: I/O error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (RuntimeError, limit_curves.ToleranceError) as exc:
        print(f"walkdist: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
