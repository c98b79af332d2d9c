"""U = cosh(a z) cos(b x + c y): harmonic exactly when a^2 = b^2 + c^2.

The finite-difference Laplacian shrinks by about 4 per halving of h for
(5, 3, 4) and stalls at -U for (1, 1, 1).  The planar Hessian determinant
U_xx U_yy - U_xy^2 vanishes identically in both cases.
"""
from asymdir.tracer import harmonic_demo

for abc in ((5, 3, 4), (1, 1, 1)):
    h = harmonic_demo(*abc)
    print(abc, "harmonic" if h["harmonic"] else "not harmonic")
    for lvl in h["levels"]:
        print(f"   h={lvl['h']:.4f}  max|lap U|/scale={lvl['max_residual']:.3e}")
    print(f"   Hessian determinant, relative: {h['hessian_max_relative']:.1e}")
