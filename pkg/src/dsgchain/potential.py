"""
Multi-harmonic double-Sine-Gordon potential.

    V(phi) = (1 - cos phi) + eps * (1 - cos n phi)

For ``n = 2`` this is the usual double-Sine-Gordon potential
``1 + eps - cos phi - eps cos 2 phi``; ``eps = 0`` gives Sine-Gordon.
All functions accept scalars or numpy arrays.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameters

__all__ = [
    "PotentialParams",
    "VacuumKind",
    "VacuumInfo",
    "eval",
    "grad",
    "curvature",
    "classify_vacua",
    "barrier_tops",
]

TWO_PI = 2.0 * math.pi

_SCAN_POINTS = 4096
_ROOT_TOL = 1e-12


@dataclass(frozen=True)
class PotentialParams:
    """Coupling ``eps >= 0`` and harmonic index ``n >= 2``."""

    eps: float
    n: int = 2

    def __post_init__(self):
        eps = float(self.eps)
        if not math.isfinite(eps) or eps < 0:
            raise InvalidParameters(f"eps must be finite and >= 0, got {self.eps!r}")
        if int(self.n) != self.n or self.n < 2:
            raise InvalidParameters(f"n must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "n", int(self.n))


class VacuumKind(enum.Enum):
    TRUE = "true"
    FALSE = "false"


@dataclass(frozen=True)
class VacuumInfo:
    location: float
    kind: VacuumKind
    value: float
    curvature: float


def eval(params: PotentialParams, phi):  # noqa: A001 - mirrors the math name
    # half-angle form: no cancellation near the vacua, exactly >= 0
    s1 = np.sin(0.5 * np.asarray(phi, dtype=float))
    sn = np.sin(0.5 * params.n * np.asarray(phi, dtype=float))
    out = 2.0 * s1 * s1 + 2.0 * params.eps * sn * sn
    return float(out) if np.ndim(out) == 0 else out


def grad(params: PotentialParams, phi):
    """dV/dphi = sin phi + n eps sin(n phi)."""
    phi = np.asarray(phi, dtype=float)
    out = np.sin(phi) + params.n * params.eps * np.sin(params.n * phi)
    return float(out) if np.ndim(out) == 0 else out


def curvature(params: PotentialParams, phi):
    """d2V/dphi2 = cos phi + n^2 eps cos(n phi)."""
    phi = np.asarray(phi, dtype=float)
    out = np.cos(phi) + params.n**2 * params.eps * np.cos(params.n * phi)
    return float(out) if np.ndim(out) == 0 else out


def _bisect_grad(params, a, b):
    ga = grad(params, a)
    while b - a > _ROOT_TOL:
        m = 0.5 * (a + b)
        gm = grad(params, m)
        if gm == 0.0:
            return m
        if (gm > 0) == (ga > 0):
            a, ga = m, gm
        else:
            b = m
    return 0.5 * (a + b)


def _stationary_points(params):
    """Sign changes of grad on [0, 2pi), refined by bisection.

    Returns a list of ``(location, is_minimum)``.
    """
    h = TWO_PI / _SCAN_POINTS
    # half-cell offset keeps the symmetric points 0 and pi off the grid
    grid = (np.arange(_SCAN_POINTS + 1) + 0.5) * h
    g = grad(params, grid)
    out = []
    for i in np.nonzero(np.sign(g[:-1]) != np.sign(g[1:]))[0]:
        loc = _bisect_grad(params, grid[i], grid[i + 1]) % TWO_PI
        if TWO_PI - loc < 1e-9:
            loc = 0.0
        out.append((loc, bool(g[i] < 0 < g[i + 1])))
    return sorted(out)


def classify_vacua(params: PotentialParams) -> list[VacuumInfo]:
    """All local minima of V on [0, 2pi), ordered by location.

    The minimum at phi = 0 is the true vacuum; every other minimum has
    V > 0 and is reported as a false vacuum.  For ``n = 2`` a false vacuum
    sits at pi exactly when ``eps > 1/4``.
    """
    vacua = []
    for loc, is_min in _stationary_points(params):
        if not is_min:
            continue
        value = eval(params, loc)
        curv = curvature(params, loc)
        if curv <= 0:
            # degenerate (flat) stationary point, e.g. eps == 1/4 at pi
            continue
        kind = VacuumKind.TRUE if value < 1e-12 else VacuumKind.FALSE
        if kind is VacuumKind.TRUE:
            loc, value = 0.0, 0.0
        vacua.append(VacuumInfo(loc, kind, value, curv))
    return vacua


def barrier_tops(params: PotentialParams) -> list[tuple[float, float]]:
    """Local maxima ``(location, V)`` of the potential on [0, 2pi)."""
    return [(loc, eval(params, loc)) for loc, is_min in _stationary_points(params) if not is_min]
