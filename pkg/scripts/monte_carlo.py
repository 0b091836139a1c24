"""Monte Carlo n-step distribution against the matrix-power oracle.

    python scripts/monte_carlo.py --a 0.125 --c 0.375 --kind force --steps 4 --paths 1000000
"""

import argparse

from zwalk.kmcg import oracle_power, simulate
from zwalk.walk import WalkSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kind", choices=("constant", "force"), default="constant")
    ap.add_argument("--a", type=float, default=0.125)
    ap.add_argument("--c", type=float, default=0.125)
    ap.add_argument("--start", type=int, default=0)
    ap.add_argument("--steps", type=int, default=2)
    ap.add_argument("--paths", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if args.kind == "constant":
        spec = WalkSpec.constant(args.a, 1 - args.a - args.c, args.c)
    else:
        spec = WalkSpec.force(args.a, args.c)
    emp = simulate(spec, args.start, args.steps, args.paths, args.seed)
    print(f"{'j':>4s} {'empirical':>10s} {'oracle':>10s} {'z':>6s}")
    for j in emp.states:
        ref = oracle_power(spec, args.start, int(j), args.steps)
        se = emp.se(int(j))
        z = (emp.prob(int(j)) - ref) / se if se > 0 else 0.0
        print(f"{int(j):4d} {emp.prob(int(j)):10.6f} {ref:10.6f} {z:6.2f}")


if __name__ == "__main__":
    main()
