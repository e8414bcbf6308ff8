"""Hypercube walk: D/n at time nt against (1 - e^{-2t})/2, and concentration in n."""

import numpy as np

from _common import parser, run, table
from walkdist.limit_curves import hypercube_curve
from walkdist.stats import concentration_check

if __name__ == "__main__":
    p = parser(__doc__, replicas=200)
    p.add_argument("--n", type=int, default=2000)
    args = p.parse_args()
    grid = [0.1, 0.5, 1, 2]
    table(run("hypercube", args.n, grid, args.replicas, args.seed, args.workers), hypercube_curve)
    print("\nfraction farther than 0.02 from the curve")
    for n in (250, 1000, 4000):
        s = run("hypercube", n, grid, args.replicas, args.seed, args.workers)
        frac = np.mean([concentration_check(v, hypercube_curve(t), 0.02) for t, v in s.items()])
        print(f"  n={n:5d}  {frac:.3f}")
