"""
Equation of state of the chain
==============================

P doubles as the pressure of the chain, and the period mean of the energy
density rho_bar plays the part of the energy density of a continuous
medium.  For the kink/antikink chain at eps = 1 the density is largest at
the joining point of the two branches, where the compressibility
chi = d rho_bar / dP changes sign (1/chi passes through a pole).

Run:  python3 demos/state_diagram.py
"""

import numpy as np

from dsgchain import eos, orbit
from dsgchain.orbit import SolutionClass
from dsgchain.potential import PotentialParams

d = eos.state_diagram(PotentialParams(1.0))
prof = eos.compressibility_profile(d)
print(f"eps = 1: rho_max = {d.rho_max:.6f} at P = {d.P_at_max:.6f}")
print(f"chi changes sign at P = {prof.sign_changes}")

print(f"\n{'P':>12} {'branch':>7} {'rho_bar':>10} {'chi':>12}")
for r in d.rows[:: len(d.rows) // 15]:
    print(f"{r.P:12.6f} {r.branch:>7} {r.rho_bar:10.6f} {r.chi:12.4e}")

# sine-Gordon: the chain compresses all the way to the uniform state
lim = eos.endpoint_limit(PotentialParams(0.0))
print(f"\neps = 0 endpoint: P = {lim['P']}, rho_bar = {lim['rho_bar']:.9f}, L = {lim['L']:.9f}")
print(f"uniform false vacuum for comparison: (P, rho) = {eos.false_vacuum_state()}")

# step-like chains at large tension: rho_bar - P approaches 2(1 + eps)
print("\nstep-like, P = 50:")
for eps in (0.0, 1.0, 10.0):
    m = orbit.soliton_metrics(PotentialParams(eps), 50.0)
    print(f"  eps = {eps:<4g} rho_bar - P = {m.rho_bar - 50:.5f}   2(1 + eps) = {2 * (1 + eps):g}")

step = eos.state_diagram(PotentialParams(1.0), cls=SolutionClass.STEP_LIKE)
chi = step.column("chi")
print(f"step-like chi stays positive: min chi = {np.min(chi):.4f}")
