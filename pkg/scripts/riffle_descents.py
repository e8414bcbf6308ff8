"""Riffle shuffles: Des/n after an (alpha n)-shuffle against alpha - 1/(e^{1/alpha} - 1)."""

from _common import parser, run, table
from walkdist.limit_curves import riffle_curve, riffle_expected_descents

if __name__ == "__main__":
    p = parser(__doc__, replicas=50)
    p.add_argument("--n", type=int, default=100_000)
    args = p.parse_args()
    grid = [0.5, 1, 2, 4]
    sims = run("riffle", args.n, grid, args.replicas, args.seed, args.workers,
               alpha_grid=",".join(map(str, grid)))
    table(sims, riffle_curve, label="alpha")
    print("\nexact finite-n mean")
    for a in grid:
        print(f"  alpha={a:g}: {riffle_expected_descents(args.n, round(a * args.n)) / args.n:.5f}")
