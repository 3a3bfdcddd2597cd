"""Non-compact real forms: evolution domains and the restricted path sum.

A non-compact group manifold splits into coordinate patches D_a where a of
the radial parameters stay periodic and the rest open up.  Each patch keeps
only the winding sublattice that vanishes along the open directions, and the
kernel is the path sum over that sublattice.
"""

import numpy as np

from liekernel import (
    KernelRequest,
    RadialPoint,
    TimeParameter,
    build_root_system,
    compact_pathsum,
    domain_sublattice,
    noncompact_pathsum,
    su11_kernel_d0,
    winding_lattice,
)
from liekernel.domains import enumerate_domains, parse_group, root_system_of

print("domain tables for the catalogued real forms:")
for name in ("SU(2,1)", "SL(3,R)", "SO(3,2)", "SO(5,1)", "USp(4,2)", "Sp(6,R)"):
    fam = parse_group(name)
    lat = winding_lattice(root_system_of(fam))
    print(f"--- {fam.name} (rank {fam.rank}) ---")
    for dom in enumerate_domains(fam):
        sub = domain_sublattice(lat, dom)
        gens = [np.round(g, 6).tolist() for g in sub.generators] if sub.dim else "0"
        print(f"  {dom.label}  signature {''.join(dom.signature)}   m-tilde basis: {gens}")

print()
print("rank-1 sanity: the periodic patch of the split form carries the compact kernel")
a1 = build_root_system("A", 1)
fam = parse_group("SU(1,1)")
d1, d0 = enumerate_domains(fam)
tp = TimeParameter.real(0.8)
phi = 1.3
open_val = noncompact_pathsum(
    KernelRequest(rs=a1, phi=RadialPoint.real([phi]), time=tp, domain=d1)
).value
compact_val = compact_pathsum(KernelRequest(rs=a1, phi=RadialPoint.real([phi]), time=tp)).value
print(f"  D1 kernel: {open_val:.12e}")
print(f"  compact  : {compact_val:.12e}   (identical code paths)")

print()
print("the fully open patch D0 has a one-term path sum with a closed form:")
for theta in (0.5, 1.5, 2.5):
    engine = noncompact_pathsum(
        KernelRequest(rs=a1, phi=RadialPoint.mixed([theta], "I"), time=tp, domain=d0)
    ).value
    closed = su11_kernel_d0(theta, tp)
    print(f"  theta={theta}: engine={engine:+.10e}  closed={closed:+.10e}")

print()
print("heat mode on an open direction grows instead of decaying; values carry tags:")
kv = noncompact_pathsum(
    KernelRequest(rs=a1, phi=RadialPoint.mixed([1.0], "I"), time=TimeParameter.heat(0.5), domain=d0)
)
print(f"  tag = {kv.tag.value}")
print(f"  {kv.warning}")
