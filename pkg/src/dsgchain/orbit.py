"""
Classification and period/energy measurement of static chain solutions.

A static solution launched from phi = pi carries the conserved value
``P = phi'^2 / 2 - V(phi)``.  For P > 0 the field winds monotonically
(a chain of like kinks); for -V(pi) < P < 0 it oscillates between two
turning points symmetric about pi (an alternating kink/antikink chain).

Periods and energies are computed in phi-space, ``dx = dphi / sqrt(2 (P + V))``,
with the inverse-square-root turning-point singularity removed by
``phi = phi_t + (pi - phi_t) sin^2(theta)``.  :func:`period_rk` measures the
same period independently from Runge-Kutta event spacing.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from . import potential
from .errors import EventNotFound, NotBounded, NotPeriodic, NotPeriodicOrStepLike
from .integrate import (
    EventKind,
    IntegratorConfig,
    Trajectory,
    detect_events,
    initial_state,
    integrate,
)
from .potential import PotentialParams
from .quadrature import panel_integrate

__all__ = [
    "SolutionClass",
    "OrbitSummary",
    "classify",
    "turning_points",
    "period_quadrature",
    "energy_per_period",
    "half_period_integrals",
    "soliton_metrics",
    "period_rk",
    "energy_peaks",
    "peak_spacing",
]

SEPARATRIX_TOL = 1e-14
DIVERGENCE_GUARD = 1e-12
QUAD_RTOL = 1e-10


class SolutionClass(enum.Enum):
    STEP_LIKE = "step-like"
    PERIODIC = "periodic"
    SEPARATRIX = "separatrix"
    FORBIDDEN = "forbidden"


@dataclass(frozen=True)
class OrbitSummary:
    """One classified chain solution.

    ``Lambda`` is the full spatial period and ``L`` the inter-soliton
    distance: ``Lambda / 2`` for periodic chains (kink and antikink per
    period), ``Lambda`` for step-like chains (one kink per 2pi winding).
    ``E_sol`` is the energy per soliton and ``rho_bar = E_sol / L``.
    """

    params: PotentialParams
    P: float
    cls: SolutionClass
    phi_turn: float | None
    Lambda: float
    L: float
    E_sol: float
    rho_bar: float

    @property
    def solitons_per_period(self) -> int:
        return 2 if self.cls is SolutionClass.PERIODIC else 1


def _top(params):
    return potential.eval(params, math.pi)


def classify(params: PotentialParams, P: float) -> SolutionClass:
    if not math.isfinite(P):
        raise ValueError(f"P must be finite, got {P!r}")
    if P <= -_top(params):
        return SolutionClass.FORBIDDEN
    if abs(P) <= SEPARATRIX_TOL:
        return SolutionClass.SEPARATRIX
    return SolutionClass.STEP_LIKE if P > 0 else SolutionClass.PERIODIC


def turning_points(params: PotentialParams, P: float, *, top_gap: float | None = None) -> tuple[float, float]:
    """Turning points ``(phi_t, 2pi - phi_t)`` of the orbit through pi.

    ``phi_t`` is the root of ``V(phi) = -P`` closest to pi from below,
    bisected to 1e-14.  ``P = -V(pi)`` is accepted as the degenerate orbit
    collapsed onto pi.  ``top_gap``, if given, is ``P + V(pi)`` known more
    precisely than the rounded ``P`` can carry.
    """
    top = _top(params)
    if not (-top <= P < 0):
        raise NotPeriodic(f"P={P} is outside [-V(pi), 0)")
    if top_gap is None:
        top_gap = P + top
    if top_gap == 0.0:
        return math.pi, math.pi
    if top_gap < 1.0:
        # shallow orbit around pi: measure the level from the top
        def level(phi):
            return top_gap + _drop_from_top(params, phi - math.pi)
    else:
        def level(phi):
            return potential.eval(params, phi) + P

    # march down from pi to the first level crossing (the nearest one)
    grid = np.linspace(math.pi, 0.0, 2049)
    k = int(np.argmax(level(grid) <= 0.0))
    lo, hi = grid[k], grid[k - 1]
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if level(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    phi_t = 0.5 * (lo + hi)
    return phi_t, 2.0 * math.pi - phi_t


def _level_gap(params, phi_t, delta):
    """``V(phi_t + delta) - V(phi_t)`` without cancellation."""
    n, eps = params.n, params.eps
    mid = phi_t + 0.5 * delta
    return 2.0 * np.sin(mid) * np.sin(0.5 * delta) + 2.0 * eps * np.sin(n * mid) * np.sin(
        0.5 * n * delta
    )


def _drop_from_top(params, u):
    """``V(pi + u) - V(pi)`` without cancellation."""
    n, eps = params.n, params.eps
    su, snu = np.sin(0.5 * u), np.sin(0.5 * n * u)
    return -2.0 * su * su + 2.0 * eps * (1.0 if n % 2 == 0 else -1.0) * snu * snu


def _check_bounded(params, P, top_gap=None):
    if top_gap is not None:
        # an exact gap above -V(pi) identifies a periodic orbit even when
        # the rounded P equals -V(pi)
        if not (top_gap > 0.0 and P < 0.0 and abs(P) > DIVERGENCE_GUARD):
            raise NotBounded(f"top_gap={top_gap} with P={P} is not a bounded periodic orbit")
        return SolutionClass.PERIODIC
    cls = classify(params, P)
    if cls is SolutionClass.SEPARATRIX:
        raise NotBounded(f"P={P} sits on the separatrix; the period diverges")
    if cls is SolutionClass.FORBIDDEN:
        raise NotPeriodicOrStepLike(f"P={P} <= -V(pi): no real orbit through pi")
    if abs(P) <= DIVERGENCE_GUARD or abs(P + _top(params)) <= DIVERGENCE_GUARD:
        raise NotBounded(f"P={P} is within {DIVERGENCE_GUARD} of a divergent limit")
    return cls


def half_period_integrals(
    params: PotentialParams, P: float, side: int = -1, rtol: float = QUAD_RTOL, *, top_gap: float | None = None
):
    """Time and energy over one quarter of a periodic orbit.

    Integrates ``dx`` and ``H dx`` from the turning point to pi on the
    ``side = -1`` (phi_t, pi) or ``side = +1`` (pi, 2pi - phi_t) half.
    Returns ``array([x_quarter, energy_quarter])``.
    """
    if top_gap is None:
        if classify(params, P) is not SolutionClass.PERIODIC:
            raise NotPeriodic(f"P={P} is not periodic")
        top_gap = P + _top(params)
    phi_t, _ = turning_points(params, P, top_gap=top_gap)
    width = math.pi - phi_t
    start = phi_t if side < 0 else 2.0 * math.pi - phi_t
    sign = 1.0 if side < 0 else -1.0

    def f(theta):
        s, c = np.sin(theta), np.cos(theta)
        delta = sign * width * s * s
        u = -sign * width * c * c  # offset from pi
        # measure the kinetic term from whichever end is nearer
        kin = 2.0 * np.where(
            s * s < 0.5,
            _level_gap(params, start, delta),
            top_gap + _drop_from_top(params, u),
        )
        jac = width * np.sin(2.0 * theta)
        base = jac / np.sqrt(kin)
        h = P + 2.0 * potential.eval(params, start + delta)
        return np.stack([base, base * h])

    return panel_integrate(f, 0.0, 0.5 * math.pi, grade="both", rtol=rtol)


def _step_integrals(params, P, rtol):
    def f(phi):
        v = potential.eval(params, phi)
        base = 1.0 / np.sqrt(2.0 * (P + v))
        return np.stack([base, base * (P + 2.0 * v)])

    # symmetric about pi: one winding is twice the (0, pi) half
    return 2.0 * panel_integrate(f, 0.0, math.pi, grade="both", rtol=rtol)


def _period_and_energy(params, P, rtol=QUAD_RTOL, top_gap=None):
    cls = _check_bounded(params, P, top_gap)
    if cls is SolutionClass.STEP_LIKE:
        lam, energy = _step_integrals(params, P, rtol)
    else:
        lam, energy = 4.0 * half_period_integrals(params, P, -1, rtol, top_gap=top_gap)
    return cls, float(lam), float(energy)


def period_quadrature(params: PotentialParams, P: float) -> float:
    """Full spatial period Lambda."""
    return _period_and_energy(params, P)[1]


def energy_per_period(params: PotentialParams, P: float) -> float:
    """Integral of the energy density over one period Lambda."""
    return _period_and_energy(params, P)[2]


def soliton_metrics(params: PotentialParams, P: float, *, top_gap: float | None = None) -> OrbitSummary:
    """Period, length, energy per soliton and density of the orbit with first
    integral ``P``.

    Pass ``top_gap = P + V(pi)`` to reach periodic orbits closer to
    ``P = -V(pi)`` than double precision resolves in ``P`` itself (the
    false-vacuum plateau, where L grows only logarithmically in the gap).
    """
    cls, lam, energy = _period_and_energy(params, P, top_gap=top_gap)
    per = 2 if cls is SolutionClass.PERIODIC else 1
    L = lam / per
    E_sol = energy / per
    phi_t = float(turning_points(params, P, top_gap=top_gap)[0]) if cls is SolutionClass.PERIODIC else None
    return OrbitSummary(params, float(P), cls, phi_t, lam, L, E_sol, E_sol / L)


def period_rk(params: PotentialParams, P: float, config: IntegratorConfig | None = None) -> float:
    """Period from the spacing of upward crossings of phi = pi (mod 2pi).

    Without a ``config`` the horizon starts at 20 and is doubled until at
    least three crossings are seen.
    """
    _check_bounded(params, P)
    ic = initial_state(params, P)
    if config is not None:
        horizons = [config]
    else:
        horizons = [IntegratorConfig(x_max=20.0 * 2**k) for k in range(8)]
    for cfg in horizons:
        traj = integrate(ic, params, cfg)
        xs = [e.x for e in detect_events(traj) if e.kind is EventKind.CENTER_CROSSING]
        if len(xs) >= 3 or (config is not None and len(xs) >= 2):
            return (xs[-1] - xs[0]) / (len(xs) - 1)
    raise EventNotFound(f"fewer than two center crossings within x_max={horizons[-1].x_max}")


def energy_peaks(traj: Trajectory, prominence: float = 1e-6) -> np.ndarray:
    """Positions of energy-density maxima, refined by a parabola through
    each sample triple."""
    H = traj.energy_density()
    idx, _ = find_peaks(H, prominence=prominence)
    x = traj.x
    out = []
    for i in idx:
        x0, x1, x2 = x[i - 1], x[i], x[i + 1]
        y0, y1, y2 = H[i - 1], H[i], H[i + 1]
        d01, d12 = (y1 - y0) / (x1 - x0), (y2 - y1) / (x2 - x1)
        curv = (d12 - d01) / (x2 - x0)
        out.append(x1 if curv == 0 else 0.5 * (x0 + x1) - d01 / (2.0 * curv))
    return np.array(out)


def peak_spacing(traj: Trajectory, prominence: float = 1e-6, phase_tol: float = 1e-3) -> float:
    """Mean distance between successive similar energy-density peaks.

    Peaks are similar when they sit at the same field phase (phi mod 2pi)
    and the same sign of dphi, so sub-kink lumps are not mixed up.
    """
    xp = energy_peaks(traj, prominence)
    if len(xp) < 2:
        raise EventNotFound("fewer than two energy-density peaks")
    phi = np.interp(xp, traj.x, traj.phi) % (2.0 * math.pi)
    slope = np.sign(np.interp(xp, traj.x, traj.dphi))
    gaps = []
    for i in range(len(xp)):
        for j in range(i + 1, len(xp)):
            dphase = abs(phi[j] - phi[i])
            dphase = min(dphase, 2.0 * math.pi - dphase)
            if dphase < phase_tol and slope[i] == slope[j]:
                gaps.append(xp[j] - xp[i])
                break
    if not gaps:
        raise EventNotFound("no pair of similar peaks on the trajectory")
    return float(np.mean(gaps))
