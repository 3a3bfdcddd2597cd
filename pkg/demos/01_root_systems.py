"""Tour of the classical root systems and their derived constants.

Every other capability rests on this data: simple roots in explicit
Cartesian coordinates, positive roots, fundamental weights, the half-sum
rho, and the scale factor lambda with rho^2/lambda = n/24.
"""

import numpy as np

from liekernel import build_root_system, cartan_matrix, rescale

for family, rank in [("A", 1), ("A", 2), ("B", 2), ("A", 3), ("C", 3), ("D", 4)]:
    rs = build_root_system(family, rank)
    print(f"--- {rs.name}: dimension n={rs.n}, positive roots p={rs.p} ---")
    print("simple roots:")
    for g in rs.simple_roots:
        print("   ", np.round(g, 6))
    print("highest root:", np.round(rs.highest_root, 6), "coeffs", rs.highest_root_coeffs)
    print("rho:", np.round(rs.rho, 6), " lambda:", rs.lam)
    print(f"rho^2/lambda = {float(rs.rho @ rs.rho) / rs.lam:.12f}  (n/24 = {rs.n / 24:.12f})")
    print("Cartan matrix:\n", cartan_matrix(rs))
    print()

print("Rescaling changes lengths but no dimensionless data:")
rs = build_root_system("A", 2)
big = rescale(rs, 3.0)
print("  lambda:", rs.lam, "->", big.lam)
print("  rho^2/lambda:", float(big.rho @ big.rho) / big.lam, "(unchanged)")
print("  Cartan matrix unchanged:", np.array_equal(cartan_matrix(rs), cartan_matrix(big)))
