"""
Energy and force between solitons in a chain
============================================

Sweeping P gives the energy per soliton E_sol as a function of the
spacing L.  The force F = -dE_sol/dL is repulsive (F > 0) in step-like
chains and attractive (F < 0) in kink/antikink chains.  With a false
vacuum at pi (eps > 1/4) the periodic family has two branches meeting at
the minimum spacing; on the upper branch the plateau costs energy per
unit length, so E_sol grows like 2L and F tends to -2.

Run:  python3 demos/energy_force_curves.py [output.csv]
"""

import sys

import numpy as np

from dsgchain import analytic, sweep
from dsgchain.cli import SWEEP_HEADER, write_csv
from dsgchain.orbit import SolutionClass
from dsgchain.potential import PotentialParams

params = PotentialParams(1.0)
rest = analytic.kink_rest_energy(params)
print(f"eps = 1, isolated kink energy {rest:.8f}")

curves = {cls: sweep.sweep(params, cls) for cls in (SolutionClass.STEP_LIKE, SolutionClass.PERIODIC)}

for cls, c in curves.items():
    print(f"\n{cls.value}: {len(c.points)} rows, P_star = {c.P_star}")
    print(f"{'P':>14} {'branch':>7} {'L':>10} {'E_sol':>12} {'F':>12}")
    for p in c.points[:: len(c.points) // 12]:
        print(f"{p.P:14.6e} {p.branch:>7} {p.L:10.5f} {p.E_sol:12.6f} {p.F:12.5e}")

# along the family dE_sol/dL = -P, so the measured force reproduces P
for cls, c in curves.items():
    F, P = c.column("F"), c.P
    ok = np.isfinite(F)
    print(f"{cls.value}: max |F - P| = {np.max(np.abs(F[ok] - P[ok])):.2e} over {ok.sum()} rows")

# long spacings: the lower branch approaches isolated kinks, the upper the plateau
per = curves[SolutionClass.PERIODIC]
low = per.branch_mask(sweep.LOWER)
i = np.argmax(np.where(low, per.column("L"), -np.inf))
print(f"\nlower branch at L = {per.points[i].L:.3f}: E_sol - E_kink = {per.points[i].E_sol - rest:.2e}")

tail = sweep.tail_curve(params)
L, E, F = tail.column("L"), tail.column("E_sol"), tail.column("F")
print("upper branch tail (gap held exactly below the plateau):")
for k in range(0, len(L), 40):
    print(f"  L = {L[k]:7.3f}   E_sol - 2L = {E[k] - 2 * L[k]:.6f}   F = {F[k]:.10f}")

if len(sys.argv) > 1:
    rows = []
    for c in curves.values():
        rows += [[p.P, c.cls.value, p.branch, p.L, p.E_sol, p.F, p.rho_bar, "", "", p.error or ""] for p in c.points]
    with open(sys.argv[1], "w", newline="") as fh:
        write_csv(fh, SWEEP_HEADER, rows)
    print(f"\nwrote {len(rows)} rows to {sys.argv[1]}")
