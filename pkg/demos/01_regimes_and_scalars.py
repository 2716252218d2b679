"""Tour of the three dynamical regimes and the scalar coefficients behind
the closed-form amplitudes.

The gradient ``lam`` and the second-neighbour coupling ``alpha2`` decide
whether ``Gamma**2 = 4 alpha2**2 - lam**2`` is positive, negative or zero.
Light refocuses only when it is negative.

    python demos/01_regimes_and_scalars.py
"""

import numpy as np

from zigzag import LatticeParams, PhysicalLattice, classify_regime
from zigzag.analytic import scalar_frame
from zigzag.lattice import coupling_profile, to_dimensionless

# A physical array first: the spacing law makes the couplings grow like sqrt(n).
phys = PhysicalLattice(mu=3.0, alpha0=2.0, C=1.0, kappa=0.5, d1=1.0, d2=2.0)
lam, Z = to_dimensionless(phys, 1.5)
print(f"physical array -> lam = {lam:g}, Z = {Z:g}")
for n in (1, 4, 9, 16):
    c1, c2 = coupling_profile(phys, n)
    print(f"  site {n:2d}: first-neighbour {c1:.4f} (sqrt n = {np.sqrt(n):.4f}), second-neighbour {c2:.4f}")

print("\nregimes")
for lam, a2 in [(0.0, 1.0), (1.0, 0.5), (2.0, 0.5)]:
    p = LatticeParams(lam, 0.3, a2)
    r = classify_regime(p)
    print(f"  lam={lam:<4g} alpha2={a2:<4g} -> {r.kind.value:<13s} Gamma^2 = {r.gamma_sq:+.3f}")

print("\nscalars along Z in the trigonometric regime (lam=2, alpha2=0.5)")
p = LatticeParams(2.0, 0.1, 0.5)
print("     Z      |eta|       Re nu      |g1|")
for Z in np.linspace(0, np.pi / np.sqrt(3), 5):
    f = scalar_frame(p, Z)
    print(f"  {Z:5.3f}  {abs(f.eta):9.3e}  {f.nu.real:9.3e}  {abs(f.g1):9.3e}")
print("g1 is back at zero after Z = pi/sqrt(3), so the squeeze has undone itself.")

print("\nat the critical point (lam=1, alpha2=0.5) |g1| creeps towards 1 and never returns")
p = LatticeParams(1.0, 0.1, 0.5)
for Z in (1.0, 10.0, 100.0):
    print(f"  Z={Z:6.1f}  |g1| = {abs(scalar_frame(p, Z).g1):.4f}")
