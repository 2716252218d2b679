"""Growing the first-neighbour coupling doubles the revival period.

With ``lam=2`` and ``alpha2=0.5`` a weakly coupled zigzag refocuses every
``pi/sqrt(3)``. Once ``alpha1`` is comparable to the other couplings the
field needs two of those cycles to come back. The scan below measures
the spacing of revivals in guide ``n0`` for several couplings.

    python demos/03_period_doubling.py
"""

import numpy as np

from zigzag import LatticeParams, period_doubling_scan

# 200 guides keep the widest beam (alpha1 = 8) away from the far edge
base = LatticeParams(lam=2.0, alpha1=0.0, alpha2=0.5, n0=10, n_sites=200)
rows = period_doubling_scan(base, [0.0, 0.1, 0.5, 2.0, 4.0, 8.0], np.linspace(0, 8, 1601))

print(" alpha1   measured   pi/sqrt(3)   ratio")
for r in rows:
    print(f"  {r.alpha1:5.1f}   {r.measured:8.5f}   {r.formula:8.5f}   {r.ratio:5.3f}")
