"""End-to-end run for one of the two example walks.

    python scripts/reproduce_example.py constant
    python scripts/reproduce_example.py force --dps 40

Prints H and H', the Darboux rows that change, and the Karlin-McGregor and
orthogonality errors for the original walk and both Darboux walks.
"""

import argparse
import time

from zwalk.cli import EXAMPLES
from zwalk.contfrac import closed_form
from zwalk.darboux import darboux
from zwalk.factorization import UPPER, factor
from zwalk.pipeline import default_tol, km_report, original, orthogonality_report, transformed
from zwalk.walk import WalkSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("example", choices=sorted(EXAMPLES))
    ap.add_argument("--dps", type=int, default=40, help="digits for the Darboux spectra (0 = double)")
    args = ap.parse_args()

    spec = WalkSpec.from_json(EXAMPLES[args.example])
    H, Hp = closed_form(spec)
    print(f"{args.example}: H = {H:.15f}, H' = {Hp:.15f}")
    param = UPPER if args.example == "constant" else float(1 - 2 * spec.a)
    dw = darboux(factor(spec, "UL", param, 17))
    changed = [n for n in range(-15, 16) if dw.coeff(n) != spec.coeff(n)]
    print(f"UL Darboux at {param}: rows changed {changed}, row 0 = {[float(v) for v in dw.coeff(0)]}")

    tol = default_tol(spec)
    setups = [original(spec, 8)] + [transformed(spec, o, param, 8, 10, dps=args.dps) for o in ("UL", "LU")]
    for s in setups:
        t0 = time.perf_counter()
        km = km_report(s, 5, 10, tol)
        orth = orthogonality_report(s, 8, 1e-9)
        print(f"  {s.label:40s} KM {km.summary()}")
        print(f"  {'':40s} orthogonality {orth.summary()}  ({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
