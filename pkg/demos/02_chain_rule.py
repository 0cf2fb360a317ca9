"""
Higher derivatives of a composite
=================================

Two ways to get (f o phi)^(n): compose the power series and differentiate,
or combine the derivatives of f and phi through partial Bell polynomials.
On polynomials both must agree to rounding.
"""

from __future__ import annotations

import numpy as np

from ddlab import INTERVAL, SeriesFunction, compose_series, differentiate
from ddlab.calculus import bell_polynomials, faa_di_bruno_all

rng = np.random.default_rng(0)
f = SeriesFunction.taylor(rng.normal(size=6), INTERVAL)
phi = SeriesFunction.taylor(rng.normal(size=4), INTERVAL)
x = np.linspace(0, 1, 5)

order = 8
fd = [differentiate(f, k)(phi(x)) for k in range(order + 1)]
pd = [differentiate(phi, k)(x) for k in range(order + 1)]
bell = faa_di_bruno_all(fd, pd, order)
g = compose_series(f, phi, f.degree * phi.degree)

for n in range(order + 1):
    ref = differentiate(g, n)(x)
    rel = np.max(np.abs(bell[n] - ref)) / max(np.max(np.abs(ref)), 1e-300)
    print(f"n = {n}: max relative difference {rel:.1e}")

# with every x_i = 1 the partial Bell polynomials count set partitions
B = bell_polynomials(6, [0] + [1] * 6)
print("partitions of a 6-element set:", int(sum(B[6][k] for k in range(7)).real))
