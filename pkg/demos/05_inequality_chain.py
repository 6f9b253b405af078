"""
The Gamma-function inequality chain
===================================

The cube comparison reduces to a chain of inequalities between Gamma-function
expressions. Each link is evaluated on a grid and reported with its margin.
"""

from fracembed.inequality import B_value, chain_holds, g_ratio, verify_chain

reports = verify_chain(n_max=20, s_step=0.01)
for r in reports:
    if "f(s) increasing" in r.name or "log-derivative bound" in r.name:
        continue
    print(r.line())
print("... plus", sum("f(s)" in r.name or "bound >=" in r.name for r in reports),
      "per-dimension monotonicity links")
print("chain holds:", chain_holds(reports))
print("B_2, B_3 =", B_value(2), B_value(3))
print("g(2), g(10), g(60) =", g_ratio(2), g_ratio(10), g_ratio(60))
