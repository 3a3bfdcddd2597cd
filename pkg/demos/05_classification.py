"""Classifying concrete matrix-group elements into evolution domains.

The eigenvalue multiset of an element in the defining representation
determines its domain and radial parameters (modulo the representation's
periodicity lattice and Weyl moves).  Normal forms go the other way.
"""

import numpy as np

from liekernel import RadialPoint, build_element, classify_element
from liekernel.domains import canonical_radial, enumerate_domains, parse_group

rng = np.random.default_rng(9)

print("round trips: radial point -> normal form -> classify")
for name in ("SU(2,1)", "SL(3,R)", "SO(3,2)", "SU(2,2)", "Sp(6,R)"):
    fam = parse_group(name)
    print(f"--- {fam.name} ---")
    for dom in enumerate_domains(fam):
        vals = rng.uniform(0.3, 1.2, fam.rank)
        point = canonical_radial(fam, RadialPoint(tuple(vals), dom.signature))
        g = build_element(fam, point)
        dom_back, point_back = classify_element(fam, g)
        err = np.abs(np.array(point_back.values) - np.array(point.values)).max()
        print(f"  {dom.label} {''.join(dom.signature)}: matrix {g.shape[0]}x{g.shape[1]}, "
          f"recovered {dom_back.label}, radial error {err:.1e}")

print()
print("rank-1 threshold: the trace decides the domain of a split-form element")
fam = parse_group("SU(1,1)")
for trace in (1.4, 1.999, 2.001, 3.2):
    if trace < 2:
        phi = 2 * np.arccos(trace / 2)
        g = np.diag([np.exp(1j * phi / 2), np.exp(-1j * phi / 2)])
    else:
        theta = 2 * np.arccosh(trace / 2)
        c, s = np.cosh(theta / 2), np.sinh(theta / 2)
        g = np.array([[c, s], [s, c]])
    dom, point = classify_element(fam, g)
    print(f"  Tr={trace:6.3f}: {dom.label}, radial = {point.values[0]:.6f} ({point.signature[0]})")

print()
print("classification is conjugation invariant:")
theta = 1.1
c, s = np.cosh(theta / 2), np.sinh(theta / 2)
h = np.array([[c, s], [s, c]])
a = np.exp(0.4j) * np.cosh(0.6)
b = np.exp(1.1j) * np.sinh(0.6)
v = np.array([[a, b], [np.conj(b), np.conj(a)]])
dom, point = classify_element(fam, v @ h @ np.linalg.inv(v))
print(f"  conjugated hyperbolic element: {dom.label}, theta = {point.values[0]:.10f} (true {theta})")
