"""
Spectra of truncated composition operators
==========================================

For a compact endomorphism with fixed point x0 the spectrum is
{phi'(x0)**n} together with 0 and 1. We compare with the eigenvalues of
finite sections, in the monomial basis on the disc and in the Fourier
basis on the circle, and look at singular-value decay after rescaling to
the weighted basis.
"""

from __future__ import annotations

from ddlab import (WeightSequence, affine, assemble_matrix, identity, singular_value_profile,
                   spectrum_check, weighted_normalize, wermer_circle)

w = WeightSequence.factorial_power(1.5)

rep = spectrum_check(affine(0.5, 0.25), w, 32, k=8)
print("z/2 + 1/4 on the disc, N = 32")
print("  fixed point", rep.fixed_point.x0, "slope", rep.fixed_point.derivative_at_fixed_point)
print("  largest matched distance", rep.max_distance, "unmatched", rep.unmatched.size)

for d in (16, 32, 64):
    rep = spectrum_check(wermer_circle(0.2, 80), w, 2 * d + 1, k=4, basis="laurent")
    top = [round(q.real, 6) for _, q, _ in rep.pairs]
    print(f"circle map c = 0.2, d = {d}: top eigenvalues {top}, error {rep.max_distance:.1e}")

print("singular value verdicts at N ~ 64:")
for name, phi, basis, N in [("identity", identity(), "taylor", 64),
                            ("z/2", affine(0.5), "taylor", 64),
                            ("circle c = 0.2", wermer_circle(0.2, 40), "laurent", 65)]:
    prof = singular_value_profile(weighted_normalize(assemble_matrix(phi, basis, N), w))
    print(f"  {name}: sigma_N/2 / sigma_1 = {prof.values[N // 2] / prof.values[0]:.2e} -> {prof.verdict}")
