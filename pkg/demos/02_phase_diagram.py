"""
Where is the constant the global minimizer?
===========================================

Sweep a (q, eps) grid and mark the cells where the constant function wins.
Once the constant loses, it keeps losing for larger q and larger eps, so the
boundary is a staircase. The bisection estimate of the global threshold sits
just below the local one.
"""

import numpy as np

from fracembed import (
    DomainSpec,
    ProblemParams,
    build_box_basis,
    epsilon_threshold,
    estimate_big_E,
    phase_sweep,
    staircase_violations,
)

data = build_box_basis(DomainSpec(1, 15))
template = ProblemParams(0.5, 3.0, 1.0)
q_grid = np.linspace(2.5, 6.0, 6)
eps_grid = np.linspace(0.25, 3.5, 6)

cells = phase_sweep(q_grid, eps_grid, template, data)
table = {(c.q, c.eps): c for c in cells}

print("rows: q, columns: eps;  '#' constant wins, '.' nonconstant minimizer")
print("       " + " ".join(f"{e:5.2f}" for e in eps_grid))
for q in q_grid:
    marks = ["  #  " if table[(q, e)].constant_global else "  .  " for e in eps_grid]
    print(f"q={q:4.2f} " + " ".join(marks) + f"   eps_s={epsilon_threshold(q, 0.5, data):.3f}")
print("staircase violations:", len(staircase_violations(cells)))

for q in (3.0, 4.0, 5.0, 6.0):
    es = epsilon_threshold(q, 0.5, data)
    est = estimate_big_E(q, template, data, tol=0.02 * es)
    print(f"q={q}: global threshold in [{est.lower:.4f}, {est.upper:.4f}], local {es:.4f}")
