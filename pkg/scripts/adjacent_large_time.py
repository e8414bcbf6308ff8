"""Adjacent transpositions at time n^3 t: D/n^2 against the reflected-Brownian curve."""

from _common import parser, run, table
from walkdist.limit_curves import large_time_curve

if __name__ == "__main__":
    p = parser(__doc__, replicas=50)
    p.add_argument("--n", type=int, default=300)
    args = p.parse_args()
    sims = run("adjacent", args.n, [0.01, 0.05, 0.1, 0.5, 5], args.replicas, args.seed,
               args.workers, time_scale="cubic_n")
    table(sims, large_time_curve)
    print(f"\nstationary mean (n-1)/(4n) = {(args.n - 1) / (4 * args.n):.5f}")
