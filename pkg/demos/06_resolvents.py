"""Rank-1 resolvents: pole structure on the compact side, branch cut on the
open side, and their Laplace relation to the evolution kernels."""

import numpy as np
from scipy.integrate import quad

from liekernel import su2_resolvent, su2_resolvent_poles, su11_resolvent_d0

print("compact rank-1 resolvent: poles found by direct scanning")
poles = su2_resolvent_poles(4.5)
for p in poles:
    n = round(np.sqrt(8 * p + 1))
    print(f"  lambda = {p:.12f}   ( (n^2-1)/8 with n={n}: {(n**2 - 1) / 8.0:.12f} )")

print()
print("residues at the poles reproduce the spectral weights:")
phi = 1.1
for n in (1, 2, 3):
    lam_n = (n**2 - 1) / 8.0
    zs = lam_n + 0.003 * np.exp(2j * np.pi * np.arange(256) / 256)
    residue = np.mean([su2_resolvent(phi, z) * (z - lam_n) for z in zs])
    c_n = n * np.sin(n * phi / 2) / np.sin(phi / 2) / (32 * np.sqrt(2) * np.pi**2)
    print(f"  n={n}: residue = {residue.real:+.8e}, spectral coefficient = {c_n:+.8e}")

print()
print("open-domain resolvent: decay above the branch point, oscillation below")
for lam in (0.5, 0.0, -0.4):
    vals = [abs(su11_resolvent_d0(theta, lam)) for theta in (1.0, 2.0, 3.0)]
    print(f"  lambda={lam:+.1f}: |G| at theta=1,2,3 -> " + ", ".join(f"{v:.3e}" for v in vals))

print()
print("Laplace check: integrating the open-domain kernel against exp(i lambda t)")
theta, lam, beta = 1.2, 0.45 + 0.4j, np.pi / 4
rot = np.exp(1j * beta)


def kernel_t(t):
    return (np.exp(-1.5 * np.log(4j * np.pi * t)) * theta / (2 * np.sinh(theta / 2))
            * np.exp(-1j * theta**2 / (2 * t) + 1j * t / 8))


integrand = lambda s: kernel_t(rot * s) * np.exp(1j * lam * rot * s) * rot
re = quad(lambda s: integrand(s).real, 0, 60, limit=400)[0]
im = quad(lambda s: integrand(s).imag, 0, 60, limit=400)[0]
print(f"  transform   = {re + 1j * im:+.10f}")
print(f"  -resolvent  = {-su11_resolvent_d0(theta, lam):+.10f}")
print("  (the sign reflects the causal contour orientation)")
