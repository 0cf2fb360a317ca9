"""
Norm profiles for the interval map (1 + x**2) / 2
=================================================

This map sends [0, 1] into itself, touches 1 at x = 1 and has slope
exactly 1 there, so none of the sufficient conditions applies. We push
a truncated exponential through it and watch the partial sums of the
weighted norm for two weights. Exploratory only: a single profile says
nothing definite about the operator.
"""

from __future__ import annotations

import math

from ddlab import (INTERVAL, SeriesFunction, WeightSequence, classify, composed_norm_profile,
                   counterexample_interval, d_norm_profile)

phi = counterexample_interval()
f = SeriesFunction.taylor([1 / math.factorial(k) for k in range(41)], INTERVAL)

for gamma in (1.5, 2.0):
    w = WeightSequence.factorial_power(gamma)
    print(f"gamma = {gamma}: classification {classify(phi, w).conclusion}")
    base = d_norm_profile(f, w, INTERVAL, 25)
    comp = composed_norm_profile(f, phi, w, 25)
    print(f"  ||f||     = {base.norm:.6f} ({base.verdict})")
    print(f"  ||f o phi|| = {comp.norm:.6f} ({comp.verdict})")
    print("  first terms", [f"{t:.3g}" for t in comp.terms[:8]])
