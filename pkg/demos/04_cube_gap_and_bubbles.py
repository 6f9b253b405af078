"""
The constant on the cube versus the sharp Sobolev constant
==========================================================

At q = 2*_s and eps = eps_s the constant has quotient pi^(2s)(n-2s)/(4s) on
the unit cube. Corner bubbles approach 2^(-2s) times the sharp Sobolev
constant, which is smaller, so the constant is not a global minimizer there.
"""

import numpy as np

from fracembed import constant_value_at_critical, cube_gap_check, reduced_sharp_constant
from fracembed.analysis import bubble_ladder

print(" n    s    I[1]      2^-2s S    margin")
for n in (1, 2, 3, 5, 10):
    for s in (0.1, 0.45, 0.9):
        if n > 2 * s:
            g = cube_gap_check(n, s)
            print(f"{n:2d} {s:5.2f} {g.lhs:9.5f} {g.rhs:9.5f} {g.margin:9.5f}")

# The bubble quotient decreases with the width but slowly: the L2 part of the
# quotient decays only like sqrt(a) log(1/a) in one dimension.
s, n = 0.25, 1
print(f"\nn={n}, s={s}: I[1] = {constant_value_at_critical(n, s):.6f}, "
      f"limit = {reduced_sharp_constant(n, s):.6f}")
for a, val in bubble_ladder([0.4, 0.2, 0.1, 0.05, 0.025, 0.0125], s, n):
    print(f"a = {a:<7g} quotient = {val:.6f}")
