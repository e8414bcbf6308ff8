"""Adjacent transpositions between the two scalings: D/(n sqrt s) near sqrt(2/pi)."""

import math

import numpy as np

from _common import parser
from walkdist import walkers as wk
from walkdist.limit_curves import (adjacent_small_ratio, expected_max_b4_mc, intermediate_constant,
                                   large_time_curve)
from walkdist.stats import derive_stream

if __name__ == "__main__":
    p = parser(__doc__, replicas=5)
    p.add_argument("--n", type=int, default=4000)
    p.add_argument("--power", type=float, default=1.5, help="s = n^power")
    args = p.parse_args()
    c = intermediate_constant()
    print(f"sqrt(2/pi) = {c:.5f}")
    for t in (25, 100, 400):
        print(f"  f(t)/sqrt(t) at t={t:4d}: {adjacent_small_ratio(t, tol=1e-4):.5f}")
    est = expected_max_b4_mc(20_000, 4096, derive_stream(args.seed, 1))
    print(f"  (1/2) E max B_4s by Monte Carlo: {est.mean:.5f} +- {est.stderr:.5f}")

    n, s = args.n, args.n ** args.power
    task = lambda rng: wk.simulate_adjacent_transpositions(n, [n * s], rng).distances[-1]
    d = np.array(wk.replicate(task, args.replicas, args.seed, wk.Model.ADJACENT_TRANSPOSITION, n,
                              args.workers))
    vals = d / (n * math.sqrt(s))
    finite = large_time_curve(s / n**2) * n / math.sqrt(s)
    print(f"\nn={n} s=n^{args.power:g}: D/(n sqrt s) = {vals.mean():.5f}  "
          f"(large-time curve at s/n^2={s / n**2:.4f}: {finite:.5f})")
