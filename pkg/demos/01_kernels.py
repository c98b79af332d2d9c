"""Kernel polynomials P_l, Q_l: recurrence, identity and interlacing.

The l-th derivatives of t/(1+t^2)^(3/2) and 1/(1+t^2)^(3/2) have numerators
P_l and Q_l.  This script prints the first few, checks the linking identity
exactly, and shows the real zeros of P_5 and Q_5 alternating.
"""
from fractions import Fraction

from asymdir.exact import isolate_real_roots, refine_interval
from asymdir.kernels import KIND_A, KIND_B, kernel_identity_check, kernel_interlacing_check, kernel_poly

for l in range(5):
    print(f"P_{l} = {kernel_poly(KIND_A, l).pretty('x')}")
    print(f"Q_{l} = {kernel_poly(KIND_B, l).pretty('x')}")

print("identity P_l = l Q_(l-1) (1+x^2) + x Q_l holds for l=1..12:", all(kernel_identity_check(l) for l in range(1, 13)))


def zeros_of(p, tag):
    return [(refine_interval(p, iv, Fraction(1, 10**9)).midpoint, tag) for iv in isolate_real_roots(p)]


zeros = sorted(zeros_of(kernel_poly(KIND_A, 5), "P") + zeros_of(kernel_poly(KIND_B, 5), "Q"))
print("merged zeros of P_5 and Q_5:", " ".join(f"{tag}:{v:+.4f}" for v, tag in zeros))
rep = kernel_interlacing_check(5)
print(f"all real={rep.all_real}, strictly interlacing={rep.strictly_interlacing}")
