"""From the Fibonacci fusion system to a table of lens-space invariants.

The script walks the whole pipeline once: validate the F-symbols, build the
tube algebra, split its center into minimal projections, read off (S, T) of
the double and evaluate a few surgery invariants.  It finishes by checking the
tensor-square factorization against the chiral Fibonacci data.
"""
import math

import numpy as np

from tvo.fusion import fibonacci, validate_pentagon
from tvo.modular import ModularData, validate_verlinde_axioms
from tvo.surgery import chain_invariant, continued_fraction, lens_invariant
from tvo.tube import build_tube, center, modular_data_from_tube


def chiral_fibonacci():
    phi = (1 + 5 ** 0.5) / 2
    S = np.array([[1, phi], [phi, -1]]) / math.sqrt(2 + phi)
    return ModularData(S, [1, np.exp(4j * np.pi / 5)])


def main():
    fs = fibonacci()
    print("pentagon:", validate_pentagon(fs).format())
    tube = build_tube(fs)
    print(f"tube algebra dimension: {tube.dim}")
    md = modular_data_from_tube(tube, center(tube, seed=0))
    print(f"center rank: {md.rank}, global dimension lambda = {md.lam:.6f}")
    print(validate_verlinde_axioms(md).format())

    chiral = chiral_fibonacci()
    print(f"\n{'manifold':>8}  {'Z(M)':>24}  {'|Z_chiral|^2':>14}")
    for p in range(2, 9):
        for q in range(1, p):
            if math.gcd(p, q) != 1 or q > 3:
                continue
            z = lens_invariant(md, p, q)
            sq = abs(chain_invariant(chiral, continued_fraction(p, q))) ** 2
            print(f"L({p},{q}):  {z.real:+.10f}{z.imag:+.10f}i  {sq:14.10f}")


if __name__ == "__main__":
    main()
