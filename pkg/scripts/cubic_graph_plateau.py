"""Walk on a random cubic graph: D/log2 n against min(t/3, 1) after t log2 n steps."""

import math

import numpy as np

from _common import parser, run, table
from walkdist import cubic_graph as cg
from walkdist.limit_curves import cubic_curve
from walkdist.stats import derive_stream

if __name__ == "__main__":
    p = parser(__doc__, replicas=200)
    p.add_argument("--n", type=int, default=1 << 16)
    p.add_argument("--graphs", type=int, default=20)
    p.add_argument("--simple", action="store_true")
    args = p.parse_args()
    extra = {"graphs": args.graphs, "simple_graph": str(args.simple)}
    grid = [0.75, 1.5, 2.25, 3, 4.5, 6]
    table(run("cubic", args.n, grid, args.replicas, args.seed, **extra), cubic_curve)
    rng = derive_stream(args.seed, 99)
    ecc = [cg.bfs(cg.generate(args.n, args.simple, rng), 0).eccentricity for _ in range(10)]
    print(f"\nroot eccentricity / log2 n over 10 graphs: {np.mean(ecc) / math.log2(args.n):.4f}")
