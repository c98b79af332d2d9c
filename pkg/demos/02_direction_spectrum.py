"""Candidate asymptotic directions of a dipole, computed exactly.

For charges +1 at (1, 0) and -1 at (-1, 0) the moment order is L = 1.
The X zero set can only escape to infinity along slopes x/y = +-1/sqrt(2)
in the Type I chart.  The three zeroing variants are compared as well.
"""
import json

from asymdir import moment_order, spectrum, validate, variant_comparison, zeroing_form

dipole = validate([(1, 1, 0), (-1, -1, 0)])
print("moment order L =", moment_order(dipole).order_L)

for comp in ("X", "Y"):
    for dom in ("I", "II"):
        f = zeroing_form(dipole, comp, dom)
        print(f"{comp} / Type {dom}: numerator {f.numerator.pretty()} over (1+t^2)^({f.half_exponent}/2)")

ds = spectrum(dipole)
for (comp, dom), e in ds.entries.items():
    print(f"{comp} / Type {dom}: slopes {[round(v, 12) for v in e.values()]}")
for dom, v in ds.distinctness.items():
    print(f"Type {dom}: X and Y directions distinct = {v.distinct} (resultant {v.resultant})")

# a configuration where dropping the per-term t power changes the answer
cfg = validate([(1, 1, "1/2"), (-1, "-1/3", 1)])
rep = variant_comparison(cfg, "X", "I")
print("variants agree on nonzero roots:", rep.nonzero_root_sets_equal)
print(json.dumps(rep.details["nonzero_real_roots"]))
