"""
Where the second branch appears
===============================

Below eps = 1/4 the spacing L(P) of kink/antikink chains stays bounded as
P approaches -V(pi), and there is a single branch (for 1/16 < eps < 1/4
L(P) has a shallow interior minimum, but both ends stay finite).  Above
it pi is a false vacuum, L diverges at both ends, and the minimum of L(P)
(P_star) joins a lower and an upper branch.  The critical coupling is found by bisection on
the presence of P_star.

Run:  python3 demos/bifurcation.py
"""

from dsgchain import orbit, potential, sweep
from dsgchain.potential import PotentialParams

print(f"{'eps':>6} {'P_star':>12} {'min L':>10} {'L near top':>12}")
for eps in (0.05, 0.1, 0.2, 0.24, 0.26, 0.3, 0.5, 1.0, 3.0, 10.0):
    p = PotentialParams(eps)
    ps = sweep.locate_pstar(p)
    top = potential.eval(p, 3.141592653589793)
    L_top = orbit.soliton_metrics(p, -top + 1e-9).L
    if ps is None:
        print(f"{eps:6g} {'none':>12} {'':>10} {L_top:12.4f}")
    else:
        print(f"{eps:6g} {ps:12.6f} {orbit.soliton_metrics(p, ps).L:10.5f} {L_top:12.4f}")

eps_c = sweep.critical_epsilon()
print(f"\ncritical coupling by bisection: {eps_c:.5f}")
