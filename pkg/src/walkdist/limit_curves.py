"""Numerical limit curves for the normalized distance of each walk.

Conventions: time arguments are in the scaling of the corresponding limit
theorem (``t`` for time ``n t``, ``t`` for time ``n^3 t``, ``alpha`` for
``log2(alpha n)`` riffle shuffles, ``t`` for ``t log2 n`` graph steps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import special, stats as sps

from .stats import EstimateSummary, as_generator, summarize

__all__ = [
    "ToleranceError",
    "hypercube_curve",
    "random_transposition_curve",
    "PairChain",
    "pair_swap_probability",
    "adjacent_small_curve",
    "adjacent_small_ratio",
    "pair_tail_bound",
    "reflected_kernel",
    "reflected_kernel_cdf",
    "large_time_curve",
    "intermediate_constant",
    "expected_max_b4_mc",
    "expected_max_b4_refinement",
    "cubic_curve",
    "riffle_curve",
    "riffle_expected_descents",
]

UNIFORMIZATION_RATE = 4.0
KERNEL_T_SWITCH = 0.05
MAX_POISSON_TERMS = 10_000_000
MAX_SERIES_TERMS = 20_000_000
MAX_DMAX = 1 << 16


class ToleranceError(RuntimeError):
    """A truncated evaluation could not certify the requested tolerance."""


def _nonneg(t: float, name: str = "t") -> float:
    t = float(t)
    if not (t >= 0 and math.isfinite(t)):
        raise ValueError(f"{name} must be finite and nonnegative")
    return t


def hypercube_curve(t: float) -> float:
    t = _nonneg(t)
    return -0.5 * math.expm1(-2.0 * t)


# -- random transpositions -------------------------------------------------


def random_transposition_curve(t: float, tol: float = 1e-10, return_info: bool = False):
    """``t`` below 1/2, else ``1 - (1/2t) sum_k k^(k-2)/k! (2t e^{-2t})^k``.

    Terms are summed until a certified tail bound drops below ``tol``. Two
    bounds are used, whichever is smaller: successive term ratios are below
    ``r = 2t e^{1-2t}`` (geometric tail, useless near t = 1/2) and Stirling's
    ``k! >= sqrt(2 pi k) (k/e)^k`` bounds term k by ``r^k k^{-5/2}/sqrt(2 pi)``.
    """
    t = float(t)
    if not t > 0:
        raise ValueError("t must be positive")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if t <= 0.5:
        return (t, {"terms": 0, "tail_bound": 0.0}) if return_info else t
    c = 2.0 * t
    logx = math.log(c) - c
    log_r = 1.0 + logx  # log(e x) < 0 for t != 1/2
    r = math.exp(log_r)
    pref = 1.0 / c
    total = 0.0
    k0 = 1
    block = 4096
    tail = math.inf
    while k0 <= MAX_SERIES_TERMS:
        k = np.arange(k0, k0 + block, dtype=float)
        logs = (k - 2.0) * np.log(k) - special.gammaln(k + 1.0) + k * logx
        terms = np.exp(logs)
        csum = np.cumsum(terms)
        K = k
        geo = terms * r / (1.0 - r) if r < 1.0 else np.full_like(terms, np.inf)
        stir = np.exp((K + 1.0) * log_r) * (2.0 / 3.0) * K ** -1.5 / math.sqrt(2.0 * math.pi)
        bound = pref * np.minimum(geo, stir)
        ok = np.nonzero(bound < tol)[0]
        if ok.size:
            j = int(ok[0])
            total += float(csum[j])
            tail = float(bound[j])
            value = 1.0 - pref * total
            info = {"terms": int(k[j]), "tail_bound": tail}
            return (value, info) if return_info else value
        total += float(csum[-1])
        tail = float(bound[-1])
        k0 += block
        block = min(block * 2, 1 << 20)
    raise ToleranceError(
        f"random transposition series at t={t}: tail bound {tail:.3e} after "
        f"{MAX_SERIES_TERMS} terms exceeds tol={tol:.1e}"
    )


# -- two-particle stirring chain ------------------------------------------


@dataclass(frozen=True)
class PairChain:
    """Separation and swap parity of two labelled particles under stirring on Z.

    State ``(d, parity)`` with ``1 <= d <= dmax`` has index ``2(d-1) + parity``;
    index ``2 dmax`` is the absorbing overflow state. At ``d >= 2`` the
    separation moves up or down at rate 2 each. At ``d = 1`` the shared edge
    swaps the particles at rate 1 and the separation grows at rate 2.
    """

    dmax: int

    def __post_init__(self):
        if self.dmax < 1:
            raise ValueError("dmax must be >= 1")

    @property
    def size(self) -> int:
        return 2 * self.dmax + 1

    def index(self, d: int, parity: int) -> int:
        return 2 * (d - 1) + parity

    def generator(self) -> np.ndarray:
        """Dense generator matrix (rows sum to zero)."""
        N, D = self.size, self.dmax
        Q = np.zeros((N, N))
        for d in range(1, D + 1):
            for par in (0, 1):
                i = self.index(d, par)
                up = self.index(d + 1, par) if d < D else N - 1
                if d == 1:
                    Q[i, self.index(1, 1 - par)] += 1.0
                    Q[i, up] += 2.0
                else:
                    Q[i, up] += 2.0
                    Q[i, self.index(d - 1, par)] += 2.0
        Q[np.arange(N), np.arange(N)] = -Q.sum(axis=1)
        return Q

    def apply_backward(self, h: np.ndarray) -> np.ndarray:
        """``P h`` for the uniformized kernel ``P = I + Q/4``."""
        D = self.dmax
        ev, od, ab = h[0:2 * D:2], h[1:2 * D:2], h[2 * D]
        out = np.empty_like(h)
        for par, cur, other in ((0, ev, od), (1, od, ev)):
            up = np.empty(D)
            up[:-1] = cur[1:]
            up[-1] = ab
            res = np.empty(D)
            res[1:] = 0.5 * (up[1:] + cur[:-1])
            res[0] = 0.25 * other[0] + 0.5 * up[0] + 0.25 * cur[0]
            out[par:2 * D:2] = res
        out[2 * D] = ab
        return out

    def apply_forward(self, p: np.ndarray) -> np.ndarray:
        """``p P`` for a row vector of state probabilities."""
        D = self.dmax
        ev, od = p[0:2 * D:2], p[1:2 * D:2]
        out = np.zeros_like(p)
        for par, cur, other in ((0, ev, od), (1, od, ev)):
            res = np.zeros(D)
            # d >= 2 splits half up, half down
            res[:-1] += 0.5 * cur[1:]          # down from d+1
            res[2:] += 0.5 * cur[1:-1]         # up from d >= 2 (not top)
            res[1] += 0.5 * cur[0]             # up from d = 1
            res[0] += 0.25 * cur[0] + 0.25 * other[0]
            out[par:2 * D:2] = res
        top_up = 0.5 * (ev[-1] + od[-1]) if D >= 2 else 0.5 * (ev[0] + od[0])
        out[2 * D] = p[2 * D] + top_up
        return out


def _poisson_weights(mean: float, tol: float) -> np.ndarray:
    if mean == 0:
        return np.ones(1)
    K = int(sps.poisson.isf(tol, mean)) + 1
    if K > MAX_POISSON_TERMS:
        raise ToleranceError(f"uniformization needs {K} terms for tol={tol:.1e}")
    return sps.poisson.pmf(np.arange(K + 1), mean)


def _swap_values(chain: PairChain, t: float, tol: float) -> np.ndarray:
    """Probability of odd parity at time t from every state (backward sweep)."""
    w = _poisson_weights(UNIFORMIZATION_RATE * t, tol)
    h = np.zeros(chain.size)
    h[1:2 * chain.dmax:2] = 1.0
    acc = w[0] * h
    for wk in w[1:]:
        h = chain.apply_backward(h)
        acc += wk * h
    return acc


def pair_chain_distribution(x: int, t: float, dmax: int, tol: float = 1e-12) -> Tuple[np.ndarray, float]:
    """Forward state distribution from ``(x, even)`` and the Poisson mass kept."""
    chain = PairChain(dmax)
    w = _poisson_weights(UNIFORMIZATION_RATE * _nonneg(t), tol)
    p = np.zeros(chain.size)
    p[chain.index(x, 0)] = 1.0
    acc = w[0] * p
    for wk in w[1:]:
        p = chain.apply_forward(p)
        acc += wk * p
    return acc, float(w.sum())


def _default_dmax(t: float, x: int = 0) -> int:
    return x + int(math.ceil(6.0 * math.sqrt(t))) + 10


def pair_swap_probability(x: int, t: float, dmax: Optional[int] = None, tol: float = 1e-10) -> float:
    """P(two particles at separation ``x`` have swapped order by time ``t``).

    Particles move by stirring on Z (every edge rings at rate 1). Computed by
    uniformization of ``PairChain`` at rate 4; ``dmax`` is doubled until the
    value moves by less than ``tol``.
    """
    x = int(x)
    if x < 1:
        raise ValueError("separation must be >= 1")
    t = _nonneg(t)
    if not tol > 0:
        raise ValueError("tol must be positive")
    if t == 0:
        return 0.0
    d = int(dmax) if dmax is not None else _default_dmax(t, x)
    d = max(d, x)

    def value(dm):
        return float(_swap_values(PairChain(dm), t, tol)[2 * (x - 1)])

    cur = value(d)
    while True:
        if 2 * d > MAX_DMAX:
            raise ToleranceError(f"dmax stability not reached below {MAX_DMAX}")
        nxt = value(2 * d)
        if abs(nxt - cur) < tol:
            return nxt
        d, cur = 2 * d, nxt


def _cosh_gap(theta: float) -> float:
    return math.exp(theta) + math.exp(-theta) - 2.0


def pair_tail_bound(X: int, t: float) -> float:
    """Certified bound on ``sum_{x > X} P(pair at separation x swapped by t)``.

    Each term is at most ``8 P(W_t > x/2)`` for the rate-2 walk W, and
    ``P(W_t > y) <= exp(-theta y + t (e^theta + e^-theta - 2))``; the geometric
    sum is minimized over a grid of theta.
    """
    best = math.inf
    for theta in np.geomspace(1e-3, 8.0, 400):
        log_b = (math.log(8.0) + t * _cosh_gap(theta) - theta * (X + 1) / 2.0
                 - math.log(-math.expm1(-theta / 2.0)))
        best = min(best, log_b)
    return math.exp(best) if best < 700 else math.inf


def _x_cutoff(t: float, tol: float) -> int:
    X = 1
    while pair_tail_bound(X, t) >= tol:
        X *= 2
        if X > MAX_DMAX:
            raise ToleranceError("separation cutoff exceeds limits")
    lo, hi = X // 2, X
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pair_tail_bound(mid, t) < tol:
            hi = mid
        else:
            lo = mid
    return hi


def adjacent_small_curve(t: float, dmax: Optional[int] = None, tol: float = 1e-6,
                         return_info: bool = False):
    """Small-time limit of D/n for random adjacent transpositions at time n t.

    The sum over separations ``x = 1..X`` of ``pair_swap_probability(x, t)``,
    with X chosen so the certified tail is below ``tol``, Poisson truncation
    at ``tol`` and ``dmax`` doubled until stable to ``tol``.
    """
    t = _nonneg(t)
    if not tol > 0:
        raise ValueError("tol must be positive")
    if t == 0:
        return (0.0, {"X": 0, "dmax": 0}) if return_info else 0.0
    X = _x_cutoff(t, tol / 2)
    d = int(dmax) if dmax is not None else _default_dmax(t)

    def value(dm):
        u = _swap_values(PairChain(dm), t, tol / 4)
        m = min(X, dm)
        return float(np.sum(u[0:2 * m:2]))

    cur = value(d)
    while True:
        if 2 * d > MAX_DMAX:
            raise ToleranceError(f"dmax stability not reached below {MAX_DMAX}")
        nxt = value(2 * d)
        if abs(nxt - cur) < tol / 4 and 2 * d >= X:
            info = {"X": X, "dmax": 2 * d, "tail_bound": pair_tail_bound(X, t)}
            return (nxt, info) if return_info else nxt
        d, cur = 2 * d, nxt


def adjacent_small_ratio(t: float, dmax: Optional[int] = None, tol: float = 1e-6) -> float:
    """``adjacent_small_curve(t) / sqrt(t)``."""
    t = float(t)
    if not t > 0:
        raise ValueError("t must be positive")
    return adjacent_small_curve(t, dmax, tol) / math.sqrt(t)


# -- reflecting Brownian motion on [0, 1] --------------------------------


def _image_shifts(t: float) -> np.ndarray:
    sigma = math.sqrt(2.0 * t)
    M = int(math.ceil(4.0 * sigma + 2.0))
    return 2.0 * np.arange(-M, M + 1)


def reflected_kernel(t: float, u, v, kmax: int = 64):
    """Transition density of Brownian motion on [0, 1] with variance 2t, reflected.

    Cosine series ``1 + 2 sum e^{-k^2 pi^2 t} cos(k pi u) cos(k pi v)`` for
    ``t >= 0.05``, sum of Gaussian images below.
    """
    t = float(t)
    if not t > 0:
        raise ValueError("t must be positive")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if t >= KERNEL_T_SWITCH:
        k = np.arange(1, kmax + 1)
        coef = np.exp(-(k * math.pi) ** 2 * t)
        uu = np.cos(np.multiply.outer(u, k) * math.pi)
        vv = np.cos(np.multiply.outer(v, k) * math.pi)
        res = 1.0 + 2.0 * np.sum(coef * uu * vv, axis=-1)
    else:
        s2 = 2.0 * t
        shifts = _image_shifts(t)
        du = np.multiply.outer(v - u, np.ones_like(shifts)) + shifts
        su = np.multiply.outer(v + u, np.ones_like(shifts)) + shifts
        norm = 1.0 / math.sqrt(2.0 * math.pi * s2)
        res = norm * np.sum(np.exp(-du ** 2 / (2 * s2)) + np.exp(-su ** 2 / (2 * s2)), axis=-1)
    return float(res) if res.ndim == 0 else res


def reflected_kernel_cdf(t: float, v, x, kmax: int = 64):
    """``int_0^x reflected_kernel(t, v, y) dy`` in closed form (same truncation)."""
    t = float(t)
    v = np.asarray(v, dtype=float)
    x = np.asarray(x, dtype=float)
    if t >= KERNEL_T_SWITCH:
        k = np.arange(1, kmax + 1)
        coef = np.exp(-(k * math.pi) ** 2 * t) / (k * math.pi)
        vv = np.cos(np.multiply.outer(v, k) * math.pi)
        xx = np.sin(np.multiply.outer(x, k) * math.pi)
        return x + 2.0 * np.sum(coef * vv * xx, axis=-1)
    sigma = math.sqrt(2.0 * t)
    shifts = _image_shifts(t)
    ones = np.ones_like(shifts)
    Phi = special.ndtr
    a = np.multiply.outer(v, ones)
    b = np.multiply.outer(x, ones)
    res = (Phi((b - a + shifts) / sigma) - Phi((-a + shifts) / sigma)
           + Phi((b + a + shifts) / sigma) - Phi((a + shifts) / sigma))
    return np.sum(res, axis=-1)


def large_time_curve(t: float, kmax: int = 64, quad_points: int = 64) -> float:
    """Large-time limit of D/n^2 for adjacent transpositions at time n^3 t.

    ``int_0^1 du int_u^1 dv int_0^1 dx p_t(u,x) int_0^x p_t(v,y) dy`` over the
    unnormalized triangle ``u < v`` (mass 1/2), so it tends to 1/4. The
    y-integral is the closed-form antiderivative of the kernel; u, v, x use
    a tensor Gauss-Legendre rule.
    """
    t = float(t)
    if not t > 0:
        raise ValueError("t must be positive")
    s, w = np.polynomial.legendre.leggauss(quad_points)
    s = 0.5 * (s + 1.0)
    w = 0.5 * w
    u = s
    v = u[:, None] + (1.0 - u[:, None]) * s[None, :]          # (q, q)
    wuv = w[:, None] * w[None, :] * (1.0 - u[:, None])
    x = s
    pux = reflected_kernel(t, u[:, None], x[None, :], kmax)   # (q_u, q_x)
    G = reflected_kernel_cdf(t, v[:, :, None], x[None, None, :], kmax)  # (q_u, q_v, q_x)
    inner = np.einsum("ix,ijx,x->ij", pux, G, w)
    return float(np.sum(wuv * inner))


# -- intermediate regime ----------------------------------------------------


def intermediate_constant() -> float:
    return math.sqrt(2.0 / math.pi)


def _max_b4_halves(replicas: int, steps: int, rng, levels: int = 1) -> np.ndarray:
    """Half the running max of B_{4s}, s in [0,1], over a ``steps``-step walk.

    Returns shape ``(levels, replicas)``: level j uses the same path sampled
    on ``steps / 2^j`` steps (``steps`` divisible by ``2^(levels-1)``).
    """
    gen = as_generator(rng)
    out = np.empty((levels, replicas))
    rows = max(1, (1 << 21) // steps)
    sd = math.sqrt(4.0 / steps)
    for start in range(0, replicas, rows):
        m = min(rows, replicas - start)
        path = np.cumsum(gen.standard_normal((m, steps)) * sd, axis=1)
        for j in range(levels):
            sub = path[:, (1 << j) - 1::1 << j]
            out[j, start:start + m] = 0.5 * np.maximum(sub.max(axis=1), 0.0)
    return out


def expected_max_b4_mc(replicas: int, steps: int, rng) -> EstimateSummary:
    """Monte Carlo estimate of ``(1/2) E max_{0<=s<=1} B_{4s}`` by a Gaussian walk."""
    if replicas < 2 or steps < 1:
        raise ValueError("need replicas >= 2 and steps >= 1")
    return summarize(_max_b4_halves(replicas, steps, rng)[0], intermediate_constant())


def expected_max_b4_refinement(replicas: int, steps: int, rng) -> Tuple[EstimateSummary, EstimateSummary]:
    """Estimates at ``steps`` and ``2 steps`` sharing the same Brownian paths."""
    h = _max_b4_halves(replicas, 2 * steps, rng, levels=2)
    c = intermediate_constant()
    return summarize(h[1], c), summarize(h[0], c)


# -- cubic graph, riffle ----------------------------------------------------


def cubic_curve(t: float) -> float:
    t = _nonneg(t)
    return min(t / 3.0, 1.0)


def riffle_curve(alpha: float) -> float:
    alpha = float(alpha)
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    return alpha - 1.0 / math.expm1(1.0 / alpha)


def riffle_expected_descents(n: int, a: int) -> float:
    """Exact E Des(sigma) after an ``a``-shuffle of ``n`` cards.

    Rising sequences of the deck number ``Des(sigma) + 1`` and have mean
    ``a - (n + 1) a^{-n} sum_{r<a} r^n``.
    """
    if n < 1 or a < 1:
        raise ValueError("need n >= 1 and a >= 1")
    r = np.arange(1, a, dtype=float)
    s = float(np.sum(np.exp(n * np.log(r / a)))) if a > 1 else 0.0
    return a - 1.0 - (n + 1) * s
