"""
The shared EPR resource
=======================

Build the two-mode squeezed state, look at the quadrature combinations it
squeezes, and see what Bob's beam splitter turns it into.
"""

import numpy as np

from cvdense import beamsplitter_5050, mean_photon, two_mode_squeezed

np.set_printoptions(precision=4, suppress=True)

# Covariance in (x1, p1, x2, p2) ordering, vacuum variance 1/4.
epr = two_mode_squeezed(1.0)
print(epr.cov)

# x1 + x2 and p1 - p2 are squeezed below the vacuum level of 1/2 ...
for r in (0.0, 0.5, 1.0, 2.0, 4.0):
    cov = two_mode_squeezed(r).cov
    var_sum_x = cov[0, 0] + cov[2, 2] + 2 * cov[0, 2]
    var_diff_p = cov[1, 1] + cov[3, 3] - 2 * cov[1, 3]
    print(f"r={r:3.1f}  var(x1+x2)={var_sum_x:.2e}  var(p1-p2)={var_diff_p:.2e}  "
          f"photons/mode={mean_photon(two_mode_squeezed(r), 0):.3f}")

# ... at the price of a growing photon number in each beam.

# The 50-50 beam splitter turns the pair into two independent squeezed beams:
# the sum port is quiet in x, the difference port is quiet in p.
mixed = beamsplitter_5050(epr, 0, 1)
print(mixed.cov)
