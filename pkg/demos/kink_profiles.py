"""
Kink profiles of the double sine-Gordon potential
==================================================

The isolated kink interpolates between the true vacua 0 and 2pi.  For a
weak second harmonic it looks like the sine-Gordon kink; once the
coupling exceeds 1/4 the point phi = pi becomes a false vacuum and the
energy density splits into two sub-kinks with a plateau between them.

Run:  python3 demos/kink_profiles.py
"""

import numpy as np

from dsgchain import analytic, potential
from dsgchain.analytic import KinkSpec
from dsgchain.potential import PotentialParams

x = np.linspace(-6, 6, 13)

for eps in (0.0, 1.0, 10.0):
    params = PotentialParams(eps)
    spec = KinkSpec(params)
    print(f"\neps = {eps:g}   rest energy = {analytic.kink_rest_energy(params):.10f}")
    print(f"{'x':>6} {'phi':>12} {'dphi':>12} {'energy':>12}")
    for xi, phi, d, e in zip(
        x,
        analytic.kink_phi(spec, x),
        analytic.kink_slope(spec, x),
        analytic.kink_energy_density(spec, x),
    ):
        print(f"{xi:6.1f} {phi:12.8f} {d:12.8f} {e:12.8f}")

# the closed form of the rest energy against the phi-space quadrature
print("\neps    quadrature        closed form")
for eps in (0.0, 0.25, 1.0, 10.0):
    p = PotentialParams(eps)
    print(f"{eps:<6g} {analytic.kink_rest_energy(p):.12f}  {analytic.kink_rest_energy_closed_form(p):.12f}")

# where do the energy maxima sit?  one peak below eps = 1/4, two above
x = np.linspace(-4, 4, 4001)
print("\neps    energy maxima at x")
for eps in (0.1, 0.3, 1.0, 10.0):
    e = analytic.kink_energy_density(KinkSpec(PotentialParams(eps)), x)
    peaks = np.nonzero((e[1:-1] > e[:-2]) & (e[1:-1] > e[2:]))[0] + 1
    print(f"{eps:<6g} {np.round(x[peaks], 3)}")

# the false vacuum: a local minimum of V at pi only when eps > 1/4
print("\neps    V''(pi)")
for eps in (0.2, 0.25, 0.3):
    print(f"{eps:<6g} {potential.curvature(PotentialParams(eps), np.pi):+.4f}")
