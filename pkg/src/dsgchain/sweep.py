"""
Energy and force curves over grids of the first integral P.

For each P the orbit summary gives the inter-soliton distance L(P) and the
energy per soliton E(P); the force ``F = -dE/dL`` is differentiated
parametrically in P, so the two-valued E(L) of the periodic branches never
has to be interpolated.  Periodic chains with a false vacuum have an
interior minimum of L(P) (the joining pressure ``P_star``) that splits
them into a lower (SG-like) and an upper (false-vacuum) branch.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import potential
from .errors import BranchTooSmall, DSGError, MixedClasses
from .orbit import OrbitSummary, SolutionClass, classify, soliton_metrics
from .potential import PotentialParams

__all__ = [
    "SINGLE",
    "LOWER",
    "UPPER",
    "CurvePoint",
    "SweepCurve",
    "default_grid",
    "evaluate_grid",
    "build_curve",
    "locate_pstar",
    "assign_branches",
    "force_curve",
    "sweep",
    "critical_epsilon",
    "golden_section",
    "smooth_coordinate",
    "derivative",
    "upper_end_diverges",
    "tail_curve",
]

SINGLE, LOWER, UPPER = "single", "lower", "upper"
PSTAR_GUARD = 3  # nodes on each side of P_star with undefined force


@dataclass
class CurvePoint:
    P: float
    L: float = math.nan
    E_sol: float = math.nan
    rho_bar: float = math.nan
    F: float = math.nan
    branch: str | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class SweepCurve:
    """Points ordered by increasing P.

    ``P_star`` is set when L(P) has an interior minimum (two branches);
    ``stationary`` lists every interior stationary point of L(P) found on
    the grid (more than one only for exotic harmonic index).
    """

    params: PotentialParams
    cls: SolutionClass
    points: list[CurvePoint]
    P_star: float | None = None
    stationary: list[float] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(p, name) for p in self.points], dtype=float)

    @property
    def P(self) -> np.ndarray:
        return self.column("P")

    def branch_mask(self, label: str) -> np.ndarray:
        return np.array([p.branch == label for p in self.points])


def _false_vacuum_at_top(params):
    return potential.curvature(params, math.pi) > 0.0


def default_grid(
    params: PotentialParams,
    cls: SolutionClass,
    n: int | None = None,
    clip: float = 1e-9,
    p_max: float = 50.0,
) -> np.ndarray:
    """Grid uniform in :func:`smooth_coordinate`, clipped ``clip`` away
    from the divergent ends.

    Periodic grids have 1000 nodes and run from ``-V(pi) + clip`` to
    ``-clip``; with a false vacuum at pi they are log-dense at both ends,
    otherwise only toward P = 0.  Step-like grids have 600 nodes
    geometrically spaced on ``[clip, p_max]``.
    """
    if cls is SolutionClass.PERIODIC:
        top = potential.eval(params, math.pi)
        n = n or 1000
        if _false_vacuum_at_top(params):
            s0 = math.log(clip) - math.log(top - clip)
            s = np.linspace(s0, -s0, n)
            grid = -top / (1.0 + np.exp(-s))
        else:
            grid = -np.exp(np.linspace(math.log(top - clip), math.log(clip), n))
    elif cls is SolutionClass.STEP_LIKE:
        grid = np.geomspace(clip, p_max, n or 600)
    else:
        raise MixedClasses(f"no grid for class {cls.value}")
    return np.sort(grid)


def _safe_metrics(args):
    params, P = args
    try:
        return soliton_metrics(params, P)
    except (DSGError, ArithmeticError) as exc:
        return exc


def evaluate_grid(params: PotentialParams, grid, threads: int = 1) -> list:
    """Orbit summaries (or the raised error) for every P, in grid order."""
    jobs = [(params, float(P)) for P in grid]
    if threads == 1:
        return [_safe_metrics(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=threads or None) as pool:
        return list(pool.map(_safe_metrics, jobs))


def _stationary_points(P, L):
    """Interior stationary points of L(P), refined by a parabola through
    the three nodes around each sign change of the slope."""
    ok = np.isfinite(L)
    P, L = P[ok], L[ok]
    d = np.diff(L)
    # steps at rounding level carry no slope information
    sig = np.nonzero(np.abs(d) > 1e-9 * np.abs(L[1:]))[0]
    out = []
    for a, b in zip(sig[:-1], sig[1:]):
        if np.sign(d[a]) == np.sign(d[b]):
            continue
        i = b - 1 if b - a == 1 else int(np.argmin(L[a : b + 2])) + a - 1
        i = min(max(i, 0), len(P) - 3)
        x0, x1, x2 = P[i : i + 3]
        y0, y1, y2 = L[i : i + 3]
        d01, d12 = (y1 - y0) / (x1 - x0), (y2 - y1) / (x2 - x1)
        curv = (d12 - d01) / (x2 - x0)
        out.append(float(0.5 * (x0 + x1) - d01 / (2.0 * curv)))
    return out


def build_curve(
    params: PotentialParams,
    grid,
    cls: SolutionClass,
    threads: int = 1,
    summaries: list | None = None,
) -> SweepCurve:
    """Per-P metrics over ``grid``; every grid value must belong to ``cls``."""
    grid = np.sort(np.asarray(grid, dtype=float))
    bad = [P for P in grid if classify(params, P) is not cls]
    if bad:
        raise MixedClasses(f"{len(bad)} grid values are not {cls.value}, e.g. P={bad[0]}")
    if summaries is None:
        summaries = evaluate_grid(params, grid, threads)
    points = []
    for P, s in zip(grid, summaries):
        if isinstance(s, OrbitSummary):
            points.append(CurvePoint(float(P), s.L, s.E_sol, s.rho_bar))
        else:
            points.append(CurvePoint(float(P), error=f"{type(s).__name__}: {s}"))
    curve = SweepCurve(params, cls, points)
    if cls is SolutionClass.PERIODIC:
        curve.stationary = _stationary_points(curve.P, curve.column("L"))
        if curve.stationary:
            curve.P_star = locate_pstar(params)
    return curve


def golden_section(f, a: float, b: float, tol: float = 1e-10, max_iter: int = 200) -> float:
    """Minimizer of a unimodal ``f`` on ``[a, b]``."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def upper_end_diverges(params: PotentialParams) -> bool:
    """True when L(P) grows without bound as P -> -V(pi)+.

    A logarithmic divergence adds the same length per decade of
    ``P + V(pi)``; a finite limit is approached with increments shrinking
    tenfold per decade.
    """
    top = potential.eval(params, math.pi)
    L9, L8, L7 = (soliton_metrics(params, -top + 10.0**-k).L for k in (9, 8, 7))
    d_near, d_far = L9 - L8, L8 - L7
    return d_near > 0 and d_far > 0 and d_near > 0.5 * d_far


def locate_pstar(params: PotentialParams, tol: float = 1e-10) -> float | None:
    """Joining pressure of the two periodic branches, or None.

    The joining point is the interior minimizer of L(P) (golden section to
    ``tol``), and exists only if the upper branch reaches arbitrarily
    large L.  For ``1/16 < eps < 1/4`` (n = 2) L(P) has a bounded fold but
    no second branch.
    """
    if not upper_end_diverges(params):
        return None
    top = potential.eval(params, math.pi)
    edge = np.logspace(-9, -1, 41)
    grid = np.unique(np.concatenate([-top + edge, np.linspace(-top + 0.1, -0.1, 41), -edge]))
    L = np.array([soliton_metrics(params, P).L for P in grid])
    i = int(np.argmin(L))
    if i == 0:
        return None
    lo, hi = grid[i - 1], grid[min(i + 1, len(grid) - 1)]
    return golden_section(lambda P: soliton_metrics(params, P).L, lo, hi, tol)


def assign_branches(curve: SweepCurve) -> SweepCurve:
    """Label points: ``single`` without a joining point, else ``lower``
    (P > P_star, true-vacuum separation) and ``upper`` (P < P_star).

    When L(P) has several stationary points as well as a joining point
    (larger harmonic index) the labels are ``branch-0``, ``branch-1``, ...
    counted from P = 0 downward.
    """
    pts = [replace(p) for p in curve.points]
    splits = sorted(curve.stationary, reverse=True)
    for p in pts:
        if curve.cls is not SolutionClass.PERIODIC or curve.P_star is None:
            p.branch = SINGLE
        elif len(splits) <= 1:
            p.branch = LOWER if p.P > curve.P_star else UPPER
        else:
            p.branch = f"branch-{sum(p.P < s for s in splits)}"
    return replace(curve, points=pts)


def smooth_coordinate(params: PotentialParams, cls: SolutionClass, P):
    """Log-type coordinate ``s(P)`` in which L and E are smooth, and ``ds/dP``.

    Step-like: ``s = log P``.  Periodic: ``s = log(-P) - log(P + V(pi))``
    when pi is a false vacuum (L diverges at both ends), else
    ``s = log(-P)``.
    """
    P = np.asarray(P, dtype=float)
    if cls is SolutionClass.PERIODIC:
        if _false_vacuum_at_top(params):
            top = potential.eval(params, math.pi)
            return np.log(-P) - np.log(P + top), 1.0 / P - 1.0 / (P + top)
        return np.log(-P), 1.0 / P
    return np.log(P), 1.0 / P


def derivative(y, s) -> np.ndarray:
    """dy/ds by central differences: fourth order on uniform ``s`` with at
    least five nodes, else second order (one-sided at the ends)."""
    y, s = np.asarray(y, dtype=float), np.asarray(s, dtype=float)
    ds = np.diff(s)
    # P = -V(pi) + delta is stored with absolute rounding, so s recomputed
    # from P jitters slightly near that end
    if len(s) < 5 or np.ptp(ds) > 1e-4 * abs(ds.mean()):
        return np.gradient(y, s, edge_order=2)
    h = ds.mean()
    d = np.empty_like(y)
    d[2:-2] = (y[:-4] - 8.0 * y[1:-3] + 8.0 * y[3:-1] - y[4:]) / (12.0 * h)
    d[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * h)
    d[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * h)
    d[-1] = (25.0 * y[-1] - 48.0 * y[-2] + 36.0 * y[-3] - 16.0 * y[-4] + 3.0 * y[-5]) / (12.0 * h)
    d[-2] = (3.0 * y[-1] + 10.0 * y[-2] - 18.0 * y[-3] + 6.0 * y[-4] - y[-5]) / (12.0 * h)
    return d


def force_curve(curve: SweepCurve) -> SweepCurve:
    """Fill ``F = -dE/dL`` within each branch.

    E and L are differentiated by central differences (:func:`derivative`)
    against the coordinate of :func:`smooth_coordinate`; the ratio is the
    same as with differences in P but far better conditioned near the
    logarithmic ends.  Nodes within three grid points of a stationary point
    of L(P) keep F = NaN: there dL/dP vanishes.
    """
    pts = [replace(p) for p in curve.points]
    labels = []
    for p in pts:
        if p.branch not in labels:
            labels.append(p.branch)
    for label in labels:
        idx = [i for i, p in enumerate(pts) if p.branch == label and p.ok]
        if len(idx) < 3:
            raise BranchTooSmall(f"branch {label!r} has {len(idx)} usable points (need 3)")
        P = np.array([pts[i].P for i in idx])
        E = np.array([pts[i].E_sol for i in idx])
        L = np.array([pts[i].L for i in idx])
        s, _ = smooth_coordinate(curve.params, curve.cls, P)
        F = -derivative(E, s) / derivative(L, s)
        for i, f in zip(idx, F):
            pts[i].F = float(f)
    Ps = [p.P for p in pts]
    marks = list(curve.stationary) + ([curve.P_star] if curve.P_star is not None else [])
    for m in marks:
        j = int(np.searchsorted(Ps, m))
        for i in range(max(0, j - PSTAR_GUARD), min(len(pts), j + PSTAR_GUARD)):
            pts[i].F = math.nan
    return replace(curve, points=pts)


def sweep(
    params: PotentialParams,
    cls: SolutionClass,
    grid=None,
    threads: int = 1,
) -> SweepCurve:
    """``build_curve`` + ``assign_branches`` + ``force_curve`` on one grid."""
    if grid is None:
        grid = default_grid(params, cls)
    return force_curve(assign_branches(build_curve(params, grid, cls, threads)))


def tail_curve(params: PotentialParams, gaps=None, threads: int = 1) -> SweepCurve:
    """Upper-branch points at ``P = -V(pi) + gap`` with the gap held exactly.

    Double precision cannot place P closer than about 1e-16 to -V(pi), yet
    on the false-vacuum plateau L grows only logarithmically in the gap
    (about 1.3 per decade at eps = 1).  Here every orbit is evaluated from
    its exact gap and F is differentiated against ``log(gap)``, reaching
    L of several tens.  The default gaps are 200 points on [1e-36, 1e-9].
    Requires a false vacuum at pi.
    """
    if not _false_vacuum_at_top(params):
        raise MixedClasses("tail_curve needs a false vacuum at pi (an upper branch)")
    gaps = np.geomspace(1e-36, 1e-9, 200) if gaps is None else np.sort(np.asarray(gaps, dtype=float))
    top = potential.eval(params, math.pi)

    def job(gap):
        try:
            return soliton_metrics(params, -top + gap, top_gap=float(gap))
        except (DSGError, ArithmeticError) as exc:
            return exc

    if threads == 1:
        results = [job(g) for g in gaps]
    else:
        with ThreadPoolExecutor(max_workers=threads or None) as pool:
            results = list(pool.map(job, gaps))
    points = []
    for gap, r in zip(gaps, results):
        if isinstance(r, OrbitSummary):
            points.append(CurvePoint(-top + gap, r.L, r.E_sol, r.rho_bar, branch=UPPER))
        else:
            points.append(CurvePoint(-top + gap, branch=UPPER, error=f"{type(r).__name__}: {r}"))
    ok = [i for i, p in enumerate(points) if p.ok]
    if len(ok) < 3:
        raise BranchTooSmall(f"tail has {len(ok)} usable points (need 3)")
    s = np.log(gaps[ok])
    E = np.array([points[i].E_sol for i in ok])
    L = np.array([points[i].L for i in ok])
    F = -derivative(E, s) / derivative(L, s)
    for i, f in zip(ok, F):
        points[i].F = float(f)
    return SweepCurve(params, SolutionClass.PERIODIC, points)


def critical_epsilon(n: int = 2, lo: float = 0.1, hi: float = 1.0, tol: float = 1e-3) -> float | None:
    """Smallest coupling with a second periodic branch, by bisection on
    the presence of ``P_star``.  Returns None if presence does not flip
    across ``[lo, hi]``."""

    def present(eps):
        return locate_pstar(PotentialParams(eps, n)) is not None

    if present(lo) or not present(hi):
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if present(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
