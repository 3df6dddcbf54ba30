#!/usr/bin/env python3
"""Tabulate the decomposition of M (x) M under a c = 1/2 conformal vector.

By default the vector is omega (x) 1.  ``--rotate c s`` uses the Virasoro
vector of the fermion ``c psi^1 + s psi^2`` instead (needs c^2 + s^2 = 1).
"""

import argparse
from fractions import Fraction

from ising_svoa.conformal import (
    commutant_multiplicity,
    embed,
    miyamoto_decompose,
    tensor,
    tensor_action,
    tensor_dims,
)
from ising_svoa.zhu import OMEGA, VACUUM, X


def candidate(rotate):
    if rotate is None:
        return embed(OMEGA, 0, 2)
    c, s = rotate
    if c * c + s * s != 1:
        raise SystemExit("need c^2 + s^2 = 1")
    y = tensor(X, VACUUM) * c + tensor(VACUUM, X) * s
    return tensor_action(y, -2, y) * Fraction(1, 2)


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--max-weight", type=Fraction, default=Fraction(6))
    parser.add_argument("--rotate", nargs=2, type=Fraction, metavar=("C", "S"))
    args = parser.parse_args()

    e = candidate(args.rotate)
    dec = miyamoto_decompose(e, args.max_weight)
    full = tensor_dims(2, args.max_weight)
    comm = {h: commutant_multiplicity(e, h, args.max_weight) for h in ("0", "1/2", "1/16")}

    print(f"{'weight':>7} {'total':>6} {'V(0)':>5} {'V(1/2)':>6} {'V(1/16)':>7}   T(0) T(1/2) T(1/16)")
    for lev in sorted(full):
        row = [len(dec.spaces[lev][h]) for h in ("0", "1/2", "1/16")]
        print(f"{str(lev):>7} {full[lev]:>6} {row[0]:>5} {row[1]:>6} {row[2]:>7}   "
              f"{comm['0'][lev]:>4} {comm['1/2'][lev]:>6} {comm['1/16'][lev]:>7}")
    print(f"semisimple: {dec.semisimple}")


if __name__ == "__main__":
    main()
