"""
Symmetry breaking on the unit interval
======================================

On (0, 1) the first Neumann eigenvalue is pi^2, so for s = 1/2 and q = 4
the constant loses local minimality at eps = pi / 2. We follow the global
minimum of the quotient across that point.
"""

import numpy as np

from fracembed import (
    DomainSpec,
    ProblemParams,
    build_box_basis,
    epsilon_threshold,
    local_min_test_at_one,
    mean_free_fraction,
    minimize_quotient,
)

data = build_box_basis(DomainSpec(1, 15))
s, q = 0.5, 4.0
es = epsilon_threshold(q, s, data)
print(f"local threshold eps_s({q}) = {es:.12f}  (pi/2 = {np.pi / 2:.12f})")

# Below the threshold the constant wins with value eps^(2s); above it a
# nonconstant profile undercuts it. The amplitude grows continuously from zero.
print(f"{'eps/eps_s':>9} {'min I':>12} {'I(1)':>12} {'amplitude':>10} {'at 1':>10}")
for factor in np.linspace(0.8, 1.6, 9):
    p = ProblemParams(s, q, factor * es)
    res = minimize_quotient(p, data)
    verdict = local_min_test_at_one(p, data).value
    print(f"{factor:9.2f} {res.value:12.8f} {p.eps2s:12.8f} "
          f"{mean_free_fraction(res.minimizer):10.2e} {verdict:>10}")

# The minimizer just above threshold is monotone and concentrates at one end.
p = ProblemParams(s, q, 1.3 * es)
res = minimize_quotient(p, data)
print("\nleading coefficients at 1.3 eps_s:", np.round(res.minimizer[:5], 6))
print("smallest grid value (nonnegative profile):", round(res.min_grid_value, 6))
