"""
Weight sequences and what they say about the algebra
====================================================

Factorial powers M_n = n!**gamma are the standard examples. Here we check
the submultiplicativity condition, look at the non-analyticity and ratio
profiles, and estimate the order of the entire functions they let in.
"""

from __future__ import annotations

import numpy as np

from ddlab import (WeightSequence, entire_order_estimate, non_analyticity_profile, ratio_profile,
                   validate_admissibility)

for gamma in (1.0, 1.5, 2.0):
    w = WeightSequence.factorial_power(gamma, length=512)
    adm = validate_admissibility(w, 25)
    na = non_analyticity_profile(w, 100)
    rp = ratio_profile(w, 100)
    est = entire_order_estimate(w, 200)
    print(f"gamma = {gamma}")
    print(f"  admissible up to n = 25: {adm.passed} (smallest log margin {adm.min_margin:.3g})")
    print(f"  (n!/M_n)^(1/n) at n = 100: {na.values[-1]:.4f} -> {na.verdict}")
    print(f"  n^2 M_n / M_(n+1) at n = 100: {rp.values[-1]:.4g} -> {rp.verdict}")
    print(f"  entire order estimate: {est.order:.4f} (1/gamma = {1 / gamma:.4f})")

# gamma = 1 is the analytic borderline: every margin is essentially zero
# and the non-analyticity profile levels off at 1.
w = WeightSequence.factorial_power(1.0)
print("gamma = 1 profile tail:", np.round(non_analyticity_profile(w, 100).values[-4:], 4))
