"""Empirical checks of the four tail bounds and of the bad-vertex rate."""

import argparse

from walkdist.expcli import diag_badv, diag_bounds

if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--graphs", type=int, default=200)
    args = p.parse_args()
    for c in diag_bounds(args.seed)["checks"]:
        print(f"{c['name']:8s} {c['params']}: empirical {c['empirical']:.3e} "
              f"bound {c['bound']:.3e} {'ok' if c['passed'] else 'VIOLATED'}")
    print("\nbad-vertex fraction / (2 * 2^l / n) by level")
    for lv in diag_badv(graphs=args.graphs, seed=args.seed)["levels"]:
        print(f"  l={lv['level']}  {lv['empirical'] / lv['bound']:.3f}")
