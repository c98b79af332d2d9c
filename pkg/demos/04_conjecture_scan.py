"""Random search for shared positive zeros of the conjectured polynomial pair.

Each trial draws a rational vector gamma and builds
sum gamma_l (1+x^2)^(L-l) x^l P_l and the same with Q_l.  A nonzero
resultant settles distinctness; otherwise the gcd is isolated on (0, inf).
"""
from asymdir.directions import conjecture_poly_pair, conjecture_scan

pair = conjecture_poly_pair([1, 1], 1)
print("F_P =", pair.F_P.pretty("x"), "  F_Q =", pair.F_Q.pretty("x"), "  distinct:", pair.distinct_positive_roots)

report = conjecture_scan(L_max=5, trials=500, seed=1)
print("resolution methods:", report["resolution_methods"])
print("counterexamples:", len(report["counterexamples"]), "configuration counterexamples:", len(report["config_counterexamples"]))
