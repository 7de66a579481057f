"""
Capacity and the best message order
===================================

The closed forms give the message count at which stored information equals
the number of binary connections, and the order that maximises the number of
messages recoverable at a target error rate.
"""

import numpy as np

from cliquemem import OrderProfile
from cliquemem import theory

print(f"M_max(c=16)      = {theory.max_diversity(100, 64, 16):.0f} messages "
      f"of {theory.message_information(100, 64, 16):.1f} bits")
print(f"M_max(c=12..20)  = {theory.max_diversity(100, 64, OrderProfile.uniform(12, 20)):.0f}")

for p0 in (1e-2, 1e-6):
    raw, c = theory.optimal_order(100, 64, 0.25, p0)
    m = theory.diversity_vs_order(100, 64, 0.25, p0, c)
    print(f"P0={p0:g}: best order {c} (raw {raw:.2f}), M={m:.0f}, efficiency {theory.efficiency(100, 64, c, m):.2f}")

cs = np.arange(2, 31)
curve = theory.diversity_vs_order(100, 64, 0.25, 1e-2, cs)
print("diversity vs order at P0=1e-2:", dict(zip(cs[::4].tolist(), np.round(curve[::4]).astype(int).tolist())))
