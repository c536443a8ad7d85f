"""
Runge-Kutta integration of the static field equation phi'' = dV/dphi.

The second-order equation is integrated as the autonomous system
``(phi, dphi)' = (dphi, V'(phi))``.  The first integral
``P = dphi^2 / 2 - V(phi)`` is tracked on every accepted step, and
crossings of the potential top (phi = pi mod 2pi) and turning points
(dphi = 0) can be located on the resulting trajectory.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import potential
from .errors import InvalidParameters, NonFiniteState, StepLimitExceeded
from .potential import PotentialParams

__all__ = [
    "FieldState",
    "Method",
    "IntegratorConfig",
    "Trajectory",
    "EventKind",
    "EventRecord",
    "derivs",
    "first_integral",
    "initial_state",
    "integrate",
    "detect_events",
]

BLOWUP = 1e6


@dataclass(frozen=True)
class FieldState:
    x: float
    phi: float
    dphi: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.phi, self.dphi)):
            raise NonFiniteState(f"non-finite state {self!r}")


class Method(enum.Enum):
    RK4 = "rk4"
    RKF45 = "rkf45"


@dataclass(frozen=True)
class IntegratorConfig:
    """Integrator settings.

    ``step`` is the fixed step for RK4 and the initial trial step for RKF45,
    whose steps never exceed ``max_step``.  ``max_steps`` defaults to
    enough fixed steps to cover ``x_max``.
    """

    method: Method = Method.RKF45
    step: float = 1e-3
    x_max: float = 200.0
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_steps: int | None = None
    max_step: float = 0.1

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        for name in ("step", "x_max", "abs_tol", "rel_tol", "max_step"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidParameters(f"{name} must be finite and > 0, got {v!r}")
        need = math.ceil(self.x_max / self.step)
        if self.max_steps is None:
            object.__setattr__(self, "max_steps", max(need, 1_000_000))
        elif self.max_steps < need:
            raise InvalidParameters(f"max_steps must be >= x_max/step = {need}")


@dataclass
class Trajectory:
    """Accepted integration samples, stored column-wise."""

    params: PotentialParams
    x: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    P0: float
    max_drift: float

    def __len__(self):
        return len(self.x)

    @property
    def samples(self) -> list[FieldState]:
        return [FieldState(*row) for row in zip(self.x.tolist(), self.phi.tolist(), self.dphi.tolist())]

    @property
    def final(self) -> FieldState:
        return FieldState(float(self.x[-1]), float(self.phi[-1]), float(self.dphi[-1]))

    def first_integral(self) -> np.ndarray:
        return 0.5 * self.dphi**2 - potential.eval(self.params, self.phi)

    def energy_density(self) -> np.ndarray:
        return 0.5 * self.dphi**2 + potential.eval(self.params, self.phi)


class EventKind(enum.Enum):
    CENTER_CROSSING = "center-crossing"
    TURNING_POINT = "turning-point"


@dataclass(frozen=True)
class EventRecord:
    kind: EventKind
    x: float
    state: FieldState = field(repr=False)


def derivs(state: FieldState, params: PotentialParams) -> tuple[float, float]:
    return state.dphi, potential.grad(params, state.phi)


def first_integral(state: FieldState, params: PotentialParams) -> float:
    return 0.5 * state.dphi**2 - potential.eval(params, state.phi)


def initial_state(params: PotentialParams, P: float, x0: float = 0.0) -> FieldState:
    """State at the potential top phi = pi carrying first integral ``P``."""
    kinetic = P + potential.eval(params, math.pi)
    if kinetic < 0:
        raise InvalidParameters(f"P={P} is below -V(pi); no real slope at phi = pi")
    return FieldState(x0, math.pi, math.sqrt(2.0 * kinetic))


# scalar kernels (math instead of numpy: these run once per stage)


def _rhs_factory(params):
    eps, n = params.eps, params.n
    ne = n * eps
    sin = math.sin

    def acc(phi):
        return sin(phi) + ne * sin(n * phi)

    return acc


def _pot_factory(params):
    eps, n = params.eps, params.n
    sin = math.sin

    def V(phi):
        s1 = sin(0.5 * phi)
        sn = sin(0.5 * n * phi)
        return 2.0 * s1 * s1 + 2.0 * eps * sn * sn

    return V


def _rk4_step(acc, y, v, h):
    k1y, k1v = v, acc(y)
    k2y, k2v = v + 0.5 * h * k1v, acc(y + 0.5 * h * k1y)
    k3y, k3v = v + 0.5 * h * k2v, acc(y + 0.5 * h * k2y)
    k4y, k4v = v + h * k3v, acc(y + h * k3y)
    return (
        y + h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y),
        v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v),
    )


# Fehlberg 4(5) pair; the fifth-order solution is propagated
_B5 = (16 / 135, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55)  # stage 2 weight is 0
_E = (1 / 360, -128 / 4275, -2197 / 75240, 1 / 50, 2 / 55)  # B5 - B4, stages 1, 3-6


def _rkf45_step(acc, y, v, h):
    """One Fehlberg step; returns the 5th-order state and the error estimate."""
    k1y, k1v = v, acc(y)
    k2y, k2v = v + h * (k1v / 4), acc(y + h * (k1y / 4))
    k3y = v + h * (3 / 32 * k1v + 9 / 32 * k2v)
    k3v = acc(y + h * (3 / 32 * k1y + 9 / 32 * k2y))
    k4y = v + h * (1932 / 2197 * k1v - 7200 / 2197 * k2v + 7296 / 2197 * k3v)
    k4v = acc(y + h * (1932 / 2197 * k1y - 7200 / 2197 * k2y + 7296 / 2197 * k3y))
    k5y = v + h * (439 / 216 * k1v - 8 * k2v + 3680 / 513 * k3v - 845 / 4104 * k4v)
    k5v = acc(y + h * (439 / 216 * k1y - 8 * k2y + 3680 / 513 * k3y - 845 / 4104 * k4y))
    k6y = v + h * (-8 / 27 * k1v + 2 * k2v - 3544 / 2565 * k3v + 1859 / 4104 * k4v - 11 / 40 * k5v)
    k6v = acc(y + h * (-8 / 27 * k1y + 2 * k2y - 3544 / 2565 * k3y + 1859 / 4104 * k4y - 11 / 40 * k5y))
    b1, b3, b4, b5, b6 = _B5
    e1, e3, e4, e5, e6 = _E
    y5 = y + h * (b1 * k1y + b3 * k3y + b4 * k4y + b5 * k5y + b6 * k6y)
    v5 = v + h * (b1 * k1v + b3 * k3v + b4 * k4v + b5 * k5v + b6 * k6v)
    ey = h * (e1 * k1y + e3 * k3y + e4 * k4y + e5 * k5y + e6 * k6y)
    ev = h * (e1 * k1v + e3 * k3v + e4 * k4v + e5 * k5v + e6 * k6v)
    return y5, v5, ey, ev


def integrate(ic: FieldState, params: PotentialParams, config: IntegratorConfig | None = None) -> Trajectory:
    """Integrate from ``ic.x`` to ``ic.x + config.x_max``.

    Raises
    ------
    NonFiniteState
        If |phi| or |dphi| exceeds 1e6.
    StepLimitExceeded
        If more than ``config.max_steps`` steps are attempted.
    """
    config = config or IntegratorConfig()
    acc = _rhs_factory(params)
    V = _pot_factory(params)
    x0 = ic.x
    x_end = x0 + config.x_max
    y, v = ic.phi, ic.dphi
    P0 = 0.5 * v * v - V(y)
    xs, ys, vs = [x0], [y], [v]
    drift = 0.0
    x = x0
    steps = 0

    if config.method is Method.RK4:
        n_steps = math.ceil(config.x_max / config.step - 1e-9)
        for i in range(1, n_steps + 1):
            x_new = min(x0 + i * config.step, x_end)
            y, v = _rk4_step(acc, y, v, x_new - x)
            x = x_new
            if not (abs(y) <= BLOWUP and abs(v) <= BLOWUP):
                raise NonFiniteState(f"blow-up at x={x}: phi={y}, dphi={v}")
            drift = max(drift, abs(0.5 * v * v - V(y) - P0))
            xs.append(x)
            ys.append(y)
            vs.append(v)
    else:
        h = config.step
        atol, rtol = config.abs_tol, config.rel_tol
        while x_end - x > 1e-12 * max(1.0, abs(x_end)):
            steps += 1
            if steps > config.max_steps:
                raise StepLimitExceeded(f"exceeded {config.max_steps} steps at x={x}")
            h = min(h, config.max_step, x_end - x)
            y5, v5, ey, ev = _rkf45_step(acc, y, v, h)
            # error per unit step keeps the accumulated drift near tol * x_max;
            # phi is an angle, so its error is measured absolutely
            err = max(
                abs(ey) / (h * atol),
                abs(ev) / (h * (atol + rtol * max(abs(v), abs(v5)))),
            )
            if not math.isfinite(err):
                raise NonFiniteState(f"non-finite error estimate at x={x}")
            if err <= 1.0:
                x += h
                y, v = y5, v5
                if not (abs(y) <= BLOWUP and abs(v) <= BLOWUP):
                    raise NonFiniteState(f"blow-up at x={x}: phi={y}, dphi={v}")
                drift = max(drift, abs(0.5 * v * v - V(y) - P0))
                xs.append(x)
                ys.append(y)
                vs.append(v)
            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.8 * err ** -0.2))
            h *= fac

    return Trajectory(params, np.array(xs), np.array(ys), np.array(vs), P0, drift)


# --- events ---------------------------------------------------------------


def _hermite(x0, x1, f0, f1, d0, d1, x):
    h = x1 - x0
    t = (x - x0) / h
    t2, t3 = t * t, t * t * t
    return (
        (2 * t3 - 3 * t2 + 1) * f0
        + (t3 - 2 * t2 + t) * h * d0
        + (-2 * t3 + 3 * t2) * f1
        + (t3 - t2) * h * d1
    )


def _refine(g, a, b, tol=1e-12):
    ga = g(a)
    while b - a > tol:
        m = 0.5 * (a + b)
        gm = g(m)
        if gm == 0.0:
            return m
        if (gm > 0) == (ga > 0):
            a, ga = m, gm
        else:
            b = m
    return 0.5 * (a + b)


def detect_events(traj: Trajectory, *, upward_only: bool = True) -> list[EventRecord]:
    """Center crossings (phi = pi mod 2pi) and turning points (dphi = 0).

    Brackets are found from sign changes between samples; each root is
    located by bisection (to 1e-12 in x) on the cubic Hermite interpolant
    of (phi, dphi) between the bracketing samples.  With ``upward_only``
    only crossings with dphi > 0 are reported.  The starting sample is
    never reported as an event.
    """
    if len(traj) < 2:
        return []
    acc = _rhs_factory(traj.params)
    x, phi, dphi = traj.x, traj.phi, traj.dphi
    ddphi = np.array([acc(p) for p in phi.tolist()])
    # cos(phi/2) vanishes exactly at phi = pi mod 2pi
    center = np.cos(0.5 * phi)
    events = []

    def interp(i, xi):
        p = _hermite(x[i], x[i + 1], phi[i], phi[i + 1], dphi[i], dphi[i + 1], xi)
        d = _hermite(x[i], x[i + 1], dphi[i], dphi[i + 1], ddphi[i], ddphi[i + 1], xi)
        return p, d

    def scan(values, kind):
        v = values.copy()
        if abs(v[0]) < 1e-14:
            v[0] = v[1]  # starting on the surface is not a crossing
        for i in np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]:
            if max(abs(v[i]), abs(v[i + 1])) < 1e-14:
                continue  # rounding noise on a fixed point
            if kind is EventKind.CENTER_CROSSING:
                xe = _refine(lambda s: math.cos(0.5 * interp(i, s)[0]), x[i], x[i + 1])
            else:
                xe = _refine(lambda s: interp(i, s)[1], x[i], x[i + 1])
            p, d = interp(i, xe)
            if kind is EventKind.CENTER_CROSSING and upward_only and d <= 0:
                continue
            events.append(EventRecord(kind, float(xe), FieldState(float(xe), float(p), float(d))))

    scan(center, EventKind.CENTER_CROSSING)
    if np.max(np.abs(dphi)) > 1e-14:
        scan(dphi, EventKind.TURNING_POINT)
    events.sort(key=lambda e: e.x)
    return events
