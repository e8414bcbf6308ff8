"""Random transpositions: D/n against the tree-series curve and its kink at t = 1/2."""

import numpy as np

from _common import parser, run, table
from walkdist.limit_curves import random_transposition_curve

if __name__ == "__main__":
    p = parser(__doc__, replicas=100)
    p.add_argument("--n", type=int, default=5000)
    args = p.parse_args()
    grid = [0.25, 0.4, 0.5, 0.6, 0.75, 1, 1.5, 2]
    sims = run("transposition", args.n, grid, args.replicas, args.seed, args.workers)
    table(sims, random_transposition_curve)
    means = np.array([sims[float(t)].mean() for t in grid])
    theory = np.array([random_transposition_curve(t) for t in grid])
    print("\nright-difference slopes (simulated / theory)")
    for i in range(len(grid) - 1):
        h = grid[i + 1] - grid[i]
        print(f"  [{grid[i]:.2f}, {grid[i + 1]:.2f}]  {(means[i + 1] - means[i]) / h:.4f}"
              f"  {(theory[i + 1] - theory[i]) / h:.4f}")
