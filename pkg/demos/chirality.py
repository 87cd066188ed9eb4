"""Twisted doubles can tell L(3,1) from L(3,2); untwisted ones cannot.

L(3,1) and L(3,2) are the same lens space with opposite orientations.  An
invariant from modular data that is its own conjugate gives equal values, while
a twisted Z/3 double gives complex-conjugate values.
"""
from tvo.fusion import vec_omega_cyclic
from tvo.surgery import lens_invariant
from tvo.tube import build_tube, center, modular_data_from_tube


def double(n, k):
    tube = build_tube(vec_omega_cyclic(n, k))
    return modular_data_from_tube(tube, center(tube, seed=0))


for k in range(3):
    md = double(3, k)
    a, b = lens_invariant(md, 3, 1), lens_invariant(md, 3, 2)
    verdict = "distinguishes" if abs(a - b) > 1e-9 else "does not distinguish"
    print(f"Z/3 twist k={k}: L(3,1) = {a:.6f}, L(3,2) = {b:.6f}  ({verdict})")
