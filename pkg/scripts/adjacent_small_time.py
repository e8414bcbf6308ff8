"""Adjacent transpositions at time nt: D/n against the pair-chain curve f(t)."""

import math

from _common import parser, run, table
from walkdist.limit_curves import adjacent_small_curve, pair_swap_probability

if __name__ == "__main__":
    p = parser(__doc__, replicas=100)
    p.add_argument("--n", type=int, default=3000)
    args = p.parse_args()
    sims = run("adjacent", args.n, [0.5, 1, 2, 4], args.replicas, args.seed, args.workers)
    table(sims, lambda t: adjacent_small_curve(t, tol=1e-4))
    print("\nswap probability from separation 1")
    for t in (1, 10, 40, 160, 640):
        q = pair_swap_probability(1, t)
        print(f"  t={t:4d}  p={q:.5f}  (1/2 - p) sqrt(t) = {(0.5 - q) * math.sqrt(t):.4f}")
