"""
Equation of state of soliton chains: pressure P against average density.

P is the first integral (``-T^1_1``, read as tension in one dimension) and
the average density is the period mean of ``T^0_0``, i.e. ``rho_bar`` of
the orbit summary.  The compressibility is ``chi = d rho_bar / dP``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TooFewRows
from .orbit import SolutionClass
from .potential import PotentialParams
from .sweep import SweepCurve, assign_branches, build_curve, default_grid, derivative, smooth_coordinate

__all__ = [
    "StateRow",
    "StateDiagram",
    "CompressibilityProfile",
    "state_diagram",
    "diagram_from_curve",
    "compressibility_profile",
    "false_vacuum_state",
    "endpoint_limit",
]


@dataclass(frozen=True)
class StateRow:
    P: float
    rho_bar: float
    chi: float
    inv_chi: float
    branch: str | None


@dataclass
class StateDiagram:
    params: PotentialParams
    cls: SolutionClass
    rows: list[StateRow]
    rho_max: float
    P_at_max: float

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows], dtype=float)


@dataclass(frozen=True)
class CompressibilityProfile:
    """1/chi against P and the pressures where chi changes sign."""

    P: np.ndarray
    inv_chi: np.ndarray
    sign_changes: list[float]


def _parabola_vertex(x, y):
    x0, x1, x2 = x
    y0, y1, y2 = y
    d01, d12 = (y1 - y0) / (x1 - x0), (y2 - y1) / (x2 - x1)
    curv = (d12 - d01) / (x2 - x0)
    xv = 0.5 * (x0 + x1) - d01 / (2.0 * curv)
    return xv, y0 + d01 * (xv - x0) + curv * (xv - x0) * (xv - x1)


def diagram_from_curve(curve: SweepCurve) -> StateDiagram:
    """State rows from an already evaluated (and labelled) sweep curve."""
    pts = [p for p in curve.points if p.ok]
    P = np.array([p.P for p in pts])
    rho = np.array([p.rho_bar for p in pts])
    s, ds_dP = smooth_coordinate(curve.params, curve.cls, P)
    chi = derivative(rho, s) * ds_dP
    with np.errstate(divide="ignore"):
        inv = 1.0 / chi
    rows = [StateRow(float(a), float(b), float(c), float(d), p.branch) for a, b, c, d, p in zip(P, rho, chi, inv, pts)]

    i = int(np.argmax(rho))
    if 0 < i < len(rho) - 1:
        P_max, rho_max = _parabola_vertex(P[i - 1 : i + 2], rho[i - 1 : i + 2])
    else:
        P_max, rho_max = P[i], rho[i]
    return StateDiagram(curve.params, curve.cls, rows, float(rho_max), float(P_max))


def state_diagram(params: PotentialParams, grid=None, cls: SolutionClass = SolutionClass.PERIODIC, threads: int = 1) -> StateDiagram:
    """Equation-of-state rows over a P grid.

    ``chi`` is differentiated with :func:`~dsgchain.sweep.derivative` in the
    smooth coordinate and converted to d/dP; ``rho_max`` is refined by a
    parabola through the largest density and its two neighbours.
    """
    if grid is None:
        grid = default_grid(params, cls)
    return diagram_from_curve(assign_branches(build_curve(params, grid, cls, threads)))


def compressibility_profile(diagram: StateDiagram) -> CompressibilityProfile:
    """``(P, 1/chi)`` and the sign changes of chi.

    chi passes through zero (1/chi through a pole) where the density is
    maximal; each crossing is located by linear interpolation of chi
    between the bracketing rows.
    """
    if len(diagram.rows) < 5:
        raise TooFewRows(f"need at least 5 rows, got {len(diagram.rows)}")
    P = diagram.column("P")
    chi = diagram.column("chi")
    changes = []
    for i in np.nonzero(np.sign(chi[:-1]) * np.sign(chi[1:]) < 0)[0]:
        t = chi[i] / (chi[i] - chi[i + 1])
        changes.append(float(P[i] + t * (P[i + 1] - P[i])))
    return CompressibilityProfile(P, diagram.column("inv_chi"), changes)


def false_vacuum_state() -> tuple[float, float]:
    """``(P, rho) = (-2, 2)``: the uniform false vacuum, ``p = -rho``."""
    return -2.0, 2.0


def endpoint_limit(params: PotentialParams, ks=(3, 4, 5, 6)) -> dict:
    """Extrapolate rows at ``P = -V(pi) + 10^-k`` to the degenerate orbit.

    ``rho_bar`` and ``L`` are fitted linearly in ``delta = 10^-k`` and
    evaluated at ``delta = 0``.  Meaningful only when L stays bounded
    (no false vacuum at pi).
    """
    from . import potential
    from .orbit import soliton_metrics

    top = potential.eval(params, math.pi)
    delta = np.array([10.0**-k for k in ks])
    ms = [soliton_metrics(params, -top + d) for d in delta]
    rho = np.array([m.rho_bar for m in ms])
    L = np.array([m.L for m in ms])
    rho0 = np.polyfit(delta, rho, 1)[1]
    L0 = np.polyfit(delta, L, 1)[1]
    return {"P": -top, "rho_bar": float(rho0), "L": float(L0), "rows": list(zip(-top + delta, rho, L))}
