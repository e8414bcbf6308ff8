"""Random streams, replica summaries and the inequality oracles.

Every replica owns a counter-based Philox stream keyed by ``(master_seed,
stream_id)``; results therefore do not depend on scheduling or on how many
workers are used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy import special

__all__ = [
    "RngStream",
    "derive_stream",
    "stream_id_for",
    "EstimateSummary",
    "summarize",
    "concentration_check",
    "BoundCheck",
    "BOUND_NAMES",
    "bound_value",
    "bound_check",
    "walk_tail_exact",
]

_MASK64 = (1 << 64) - 1
SIGMA_BAND = 4.0


@dataclass
class RngStream:
    """A reproducible random stream; unknown attributes go to the generator."""

    master_seed: int
    stream_id: int
    generator: np.random.Generator

    def __getattr__(self, name):
        # only reached for attributes not defined on the dataclass
        return getattr(self.__dict__["generator"], name)


def derive_stream(master_seed: int, stream_id: int) -> RngStream:
    """Derive the stream ``stream_id`` of ``master_seed``.

    SeedSequence hashes both words into the Philox key, so neighbouring ids
    give unrelated keys.
    """
    seed = int(master_seed) & _MASK64
    sid = int(stream_id) & _MASK64
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(sid,))
    return RngStream(seed, sid, np.random.Generator(np.random.Philox(seq)))


def stream_id_for(model_code: int, n: int, replica: int) -> int:
    """Pack (model, n, replica) into one 64-bit stream id."""
    if not (0 <= model_code < 16 and 0 <= n < (1 << 36) and 0 <= replica < (1 << 24)):
        raise ValueError("stream id fields out of range")
    return (model_code << 60) | (n << 24) | replica


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")


@dataclass(frozen=True)
class EstimateSummary:
    replicas: int
    mean: float
    variance: float
    stderr: float
    target: Optional[float] = None
    z_score: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "replicas": self.replicas,
            "mean": self.mean,
            "variance": self.variance,
            "stderr": self.stderr,
            "target": self.target,
            "z_score": self.z_score,
        }


def summarize(samples: Sequence[float], target: Optional[float] = None) -> EstimateSummary:
    """Mean, unbiased variance and standard error of ``samples``.

    With a single sample the variance is reported as ``nan``. The z-score is
    0 when the mean hits the target exactly (including zero spread), and
    +-inf for a nonzero gap with zero spread.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("summarize needs at least one sample")
    m = x.size
    mean = float(np.mean(x))
    if m >= 2:
        var = float(np.var(x, ddof=1))
        se = math.sqrt(var / m)
    else:
        var = se = float("nan")
    z = None
    if target is not None:
        gap = mean - float(target)
        if gap == 0.0:
            z = 0.0
        elif se > 0:
            z = gap / se
        else:
            z = math.copysign(math.inf, gap)
    return EstimateSummary(m, mean, var, se, None if target is None else float(target), z)


def concentration_check(samples: Sequence[float], target: float, eps: float) -> float:
    """Fraction of samples farther than ``eps`` from ``target``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("no samples")
    return float(np.mean(np.abs(x - target) > eps))


# -- inequality oracles ---------------------------------------------------

BOUND_NAMES = ("refcomp", "ldbd", "ld2", "badv")


def walk_tail_exact(y: float, t: float, jump_mean: Optional[float] = None) -> float:
    """P(W > y) for a symmetric continuous-time simple walk with Poisson(2t) jumps.

    P(W = m) = e^{-mu} I_m(mu) with mu the mean jump count.
    """
    mu = 2.0 * t if jump_mean is None else float(jump_mean)
    if mu <= 0:
        return 0.0 if y >= 0 else 1.0
    start = int(math.floor(y)) + 1
    # terms past mu + 20 sqrt(mu) + 50 are far below double precision
    span = int(mu + 20.0 * math.sqrt(mu) + 50)
    if start > span:
        return 0.0
    m = np.arange(max(start, -span), span + 1)
    return float(min(1.0, np.sum(special.ive(np.abs(m), mu))))


def bound_value(name: str, params: Mapping[str, float]) -> float:
    """Right-hand side of one of the four proven tail bounds.

    ``refcomp``  8 P(W_t > x/2), W the rate-2 walk (optionally ``jump_mean``)
    ``ldbd``     exp(-theta x + t (e^theta + e^-theta - 2))
    ``ld2``      exp(-x^2 / 8et) + exp(-x ln 2 - 2t)
    ``badv``     2 * 2^level / n
    """
    if name == "refcomp":
        return min(1.0, 8.0 * walk_tail_exact(params["x"] / 2.0, params["t"], params.get("jump_mean")))
    if name == "ldbd":
        th, x, t = params["theta"], params["x"], params["t"]
        if not th > 0:
            raise ValueError("theta must be positive")
        return math.exp(-th * x + t * (math.exp(th) + math.exp(-th) - 2.0))
    if name == "ld2":
        x, t = params["x"], params["t"]
        return math.exp(-x * x / (8.0 * math.e * t)) + math.exp(-x * math.log(2.0) - 2.0 * t)
    if name == "badv":
        return 2.0 * 2.0 ** params["level"] / params["n"]
    raise ValueError(f"unknown bound {name!r}; expected one of {BOUND_NAMES}")


@dataclass(frozen=True)
class BoundCheck:
    name: str
    empirical: float
    stderr: float
    bound: float
    margin: float
    passed: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def bound_check(name: str, params: Mapping[str, float], samples: Sequence[float]) -> BoundCheck:
    """Check an empirical event frequency against a proven bound.

    ``samples`` are 0/1 indicators of the bounded event. Passes when the
    frequency is at most ``bound + 4 * stderr``.
    """
    if name not in BOUND_NAMES:
        raise ValueError(f"unknown bound {name!r}; expected one of {BOUND_NAMES}")
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("no samples")
    p = float(np.mean(x))
    se = math.sqrt(p * (1.0 - p) / x.size)
    b = bound_value(name, params)
    margin = b + SIGMA_BAND * se - p
    return BoundCheck(name, p, se, b, margin, margin >= 0)
