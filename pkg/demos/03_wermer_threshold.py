"""
Where compactness stops on the circle
=====================================

The circle maps exp(c (z**2 - 1) / z) fix z = 1 with derivative 2c there,
and sup |phi'| = 2c. Below c = 1/2 the derivative bound gives a compact
operator; above it the boundary point z = 1 witnesses non-compactness.
"""

from __future__ import annotations

import numpy as np

from ddlab import WeightSequence, classify, wermer_circle

w = WeightSequence.factorial_power(1.5)
for c in np.round(np.arange(0.1, 0.95, 0.1), 2):
    rep = classify(wermer_circle(float(c)), w)
    b = rep.derivative_bracket
    line = f"c = {c:.1f}  sup|phi'| in [{b.lower:.6f}, {b.upper:.6f}]  -> {rep.conclusion}"
    if rep.fixed_point is not None:
        line += f"  (x0 = {rep.fixed_point.x0:.3f})"
    elif rep.conclusion == "not_compact_by_L7":
        line += f"  (witness {rep.condition('L7').witnesses[0]:.3f})"
    print(line)
