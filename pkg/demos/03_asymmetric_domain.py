"""
An asymmetric triangle
======================

On a box the integral of phi_1^3 vanishes, so at eps = eps_s the constant is
a degenerate critical point. On a generic domain it does not vanish and the
constant is already a saddle at the threshold. The package ships Neumann
spectral data for a scalene triangle computed by Rayleigh-Ritz.
"""

from fracembed import (
    ProblemParams,
    d2J_at_one,
    d3J_at_one_phi1,
    epsilon_threshold,
    load_sample,
    local_min_test_at_one,
    minimize_quotient,
)
from fracembed.functionals import phi1_cubed_integral

tri = load_sample("asym_triangle")
print(tri.name, "modes:", tri.n_modes, "nodes:", tri.n_nodes)
print("eigenvalues:", tri.eigenvalues[:5].round(5))
print("integral of phi_1^3:", round(phi1_cubed_integral(tri), 6))

s, q = 0.5, 3.0
es = epsilon_threshold(q, s, tri)
for factor in (0.9, 1.0, 1.1):
    p = ProblemParams(s, q, factor * es, 2)
    print(f"eps = {factor:.1f} eps_s: D2 = {d2J_at_one(1, p, tri):+.3e}, "
          f"D3 = {d3J_at_one_phi1(p, tri):+.4f}, verdict {local_min_test_at_one(p, tri).value}")

# Just below the threshold the constant is still a local minimizer, but
# the global minimizer can already be nonconstant.
for factor in (0.5, 0.7, 0.8, 0.9, 1.0):
    p = ProblemParams(s, q, factor * es, 2)
    res = minimize_quotient(p, tri)
    print(f"eps = {factor:.2f} eps_s: min I = {res.value:.8f}, I(1) = {p.eps2s:.8f}, "
          f"constant: {res.is_constant}")
