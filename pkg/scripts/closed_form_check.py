"""Constructed Darboux spectra against their closed forms over a parameter grid.

    python scripts/closed_form_check.py --points 200 --grid 9
"""

import argparse

import numpy as np

from zwalk.closed_forms import compare, constant_darboux, force_darboux_lu, force_darboux_ul, force_half_darboux
from zwalk.contfrac import closed_form
from zwalk.factorization import factor
from zwalk.spectral import darboux_spectrum, example_spectrum
from zwalk.walk import WalkSpec


def rows(spec, closed, grid, points):
    H, Hp = closed_form(spec)
    for order in ("UL", "LU"):
        for p in np.linspace(Hp, H, grid):
            f = factor(spec, order, float(p), 4)
            ref = closed(spec, f, order)
            dens, atoms = compare(darboux_spectrum(example_spectrum(spec), f), ref, points)
            yield order, float(p), dens, atoms


def label(spec):
    a, b, c = (float(v) for v in spec.coeff(0))
    return f"{spec.kind}(a={a:g}, b={b:g}, c={c:g})"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=200)
    ap.add_argument("--grid", type=int, default=9)
    args = ap.parse_args()

    cases = [
        (WalkSpec.constant(0.125, 0.75, 0.125), lambda s, f, o: constant_darboux(s, f)),
        (WalkSpec.constant(0.1, 0.7, 0.2), lambda s, f, o: constant_darboux(s, f)),
        (WalkSpec.force(0.1, 0.3), lambda s, f, o: (force_darboux_ul if o == "UL" else force_darboux_lu)(s, f)),
        (WalkSpec.force(0.3, 0.1), lambda s, f, o: (force_darboux_ul if o == "UL" else force_darboux_lu)(s, f)),
    ]
    print(f"{'walk':32s} {'order':5s} {'param':>10s} {'density':>10s} {'atoms':>10s}")
    for spec, closed in cases:
        for order, p, dens, atoms in rows(spec, closed, args.grid, args.points):
            print(f"{label(spec):32s} {order:5s} {p:10.6f} {dens:10.2e} {atoms:10.2e}")
    half = WalkSpec.force(0.125, 0.375)
    dens, atoms = compare(darboux_spectrum(example_spectrum(half), factor(half, "UL", 0.75, 4)), force_half_darboux(half))
    print(f"force b = 1/2 at y0 = 1 - 2a: density {dens:.2e}, atoms {atoms:.2e}")


if __name__ == "__main__":
    main()
