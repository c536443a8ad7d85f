import math

import numpy as np
import pytest

from dsgchain import analytic, orbit, sweep
from dsgchain.errors import BranchTooSmall, MixedClasses
from dsgchain.orbit import SolutionClass
from dsgchain.potential import PotentialParams
from dsgchain.sweep import LOWER, SINGLE, UPPER, CurvePoint, SweepCurve

PER, STEP = SolutionClass.PERIODIC, SolutionClass.STEP_LIKE


@pytest.fixture(scope="module")
def curves():
    cache = {}

    def get(eps, cls):
        key = (eps, cls)
        if key not in cache:
            cache[key] = sweep.sweep(PotentialParams(eps), cls)
        return cache[key]

    return get


def usable(curve):
    F = curve.column("F")
    return np.isfinite(F)


def test_mixed_grid_rejected():
    with pytest.raises(MixedClasses):
        sweep.build_curve(PotentialParams(1.0), [-1.0, 0.5], PER)


def test_default_grid_bounds():
    for eps in (0.0, 1.0):
        g = sweep.default_grid(PotentialParams(eps), PER)
        assert g[0] == pytest.approx(-2 + 1e-9, abs=1e-15) and g[-1] == pytest.approx(-1e-9)
        assert np.all(np.diff(g) > 0)
    g = sweep.default_grid(PotentialParams(1.0), STEP)
    assert g[0] == pytest.approx(1e-9) and g[-1] == pytest.approx(50.0)


@pytest.mark.parametrize("eps", [0.0, 10.0])
def test_step_like_curve(curves, eps):
    c = curves(eps, STEP)
    L, E, F = c.column("L"), c.column("E_sol"), c.column("F")
    order = np.argsort(L)
    assert np.all(np.diff(E[order]) < 0)  # E(L) decreasing
    assert E[order][-1] == pytest.approx(analytic.kink_rest_energy(c.params), abs=1e-3)
    assert np.all(F > 0)
    assert np.all(np.diff(F[order]) < 0) and F[order][-1] < 1e-8
    assert {p.branch for p in c.points} == {SINGLE}


def test_sine_gordon_periodic_curve(curves):
    c = curves(0.0, PER)
    assert c.P_star is None and c.stationary == []
    assert {p.branch for p in c.points} == {SINGLE}
    L, E, F = c.column("L"), c.column("E_sol"), c.column("F")
    order = np.argsort(L)
    assert np.all(np.diff(E[order]) > 0)  # E(L) increasing
    assert E[order][-1] == pytest.approx(8.0, abs=1e-3)
    assert np.all(F < 0)


def test_two_branches_at_eps_one(curves):
    c = curves(1.0, PER)
    assert c.P_star is not None
    lower, upper = c.branch_mask(LOWER), c.branch_mask(UPPER)
    assert lower.sum() > 100 and upper.sum() > 100
    assert np.all(c.P[lower] > c.P_star) and np.all(c.P[upper] < c.P_star)
    for mask in (lower, upper):
        L = c.column("L")[mask]
        P = c.P[mask]
        dL = np.diff(L[np.argsort(P)])
        assert np.all(dL > 0) or np.all(dL < 0)  # monotone on each side


def test_upper_branch_linear_slope(curves):
    # the P grid stops at L ~ 15 on the upper branch; the exact-gap tail
    # continues the same branch to L ~ 50
    c = curves(1.0, PER)
    up = c.branch_mask(UPPER) & usable(c)
    tail = sweep.tail_curve(c.params)
    L, F = tail.column("L"), tail.column("F")
    assert L.max() > 45 and L.min() == pytest.approx(c.column("L")[up].max(), rel=1e-6)
    m = L >= 30
    assert m.sum() > 50
    assert np.all(np.abs(F[m] + 2) < 0.02)
    assert np.all(np.diff(tail.column("E_sol")) < 0)  # E grows as the gap shrinks


def test_tail_needs_false_vacuum():
    with pytest.raises(MixedClasses):
        sweep.tail_curve(PotentialParams(0.2))


def test_lower_branch_limit(curves):
    c = curves(1.0, PER)
    m = c.branch_mask(LOWER) & usable(c)
    F = c.column("F")[m]
    assert np.all(F < 0)
    far = np.argmax(c.column("L")[m])
    assert abs(F[far]) < 1e-6
    assert c.column("E_sol")[m][far] == pytest.approx(analytic.kink_rest_energy(c.params), abs=1e-3)


@pytest.mark.parametrize("eps", [0.0, 1.0])
def test_force_equals_pressure(curves, eps):
    # E_sol and L obey dE_sol/dL = -P along the family, so F = P exactly
    for cls in (PER, STEP):
        c = curves(eps, cls)
        ok = usable(c)
        P, F = c.P[ok], c.column("F")[ok]
        assert np.max(np.abs(F - P) / np.maximum(1.0, np.abs(P))) < 1e-5


def test_force_undefined_near_joining_point(curves):
    c = curves(1.0, PER)
    j = int(np.searchsorted(c.P, c.P_star))
    F = c.column("F")
    assert np.all(np.isnan(F[j - sweep.PSTAR_GUARD : j + sweep.PSTAR_GUARD]))
    assert np.isfinite(F[j - sweep.PSTAR_GUARD - 1]) and np.isfinite(F[j + sweep.PSTAR_GUARD])


def test_branch_continuity(curves):
    c = curves(1.0, PER)
    for name in ("L", "E_sol", "rho_bar"):
        y = c.column(name)
        j = int(np.searchsorted(c.P, c.P_star))
        assert abs(y[j] - y[j - 1]) < 1e-3 * abs(y[j])


def test_locate_pstar():
    assert sweep.locate_pstar(PotentialParams(0.1)) is None
    p = PotentialParams(1.0)
    ps = sweep.locate_pstar(p)
    assert -2 < ps < 0
    Lmin = orbit.soliton_metrics(p, ps).L
    assert Lmin <= 7.798
    for dP in (-1e-3, 1e-3):
        assert orbit.soliton_metrics(p, ps + dP).L > Lmin


def test_pstar_presence_flips_at_quarter():
    assert sweep.locate_pstar(PotentialParams(0.24)) is None
    assert sweep.locate_pstar(PotentialParams(0.26)) is not None


@pytest.mark.parametrize("eps", [0.1, 0.2])
def test_bounded_fold_is_not_a_joining_point(eps):
    # for 1/16 < eps < 1/4 L(P) has an interior minimum but stays bounded
    c = sweep.build_curve(PotentialParams(eps), sweep.default_grid(PotentialParams(eps), PER, 200), PER)
    assert len(c.stationary) == 1 and c.P_star is None
    assert not sweep.upper_end_diverges(PotentialParams(eps))


def test_branch_labels_at_reference_points():
    p = PotentialParams(1.0)
    c = sweep.assign_branches(sweep.build_curve(p, [-1.9996, -1.5, -0.5, -2.14e-5], PER))
    c = sweep.assign_branches(
        SweepCurve(p, PER, c.points, sweep.locate_pstar(p), c.stationary)
    )
    labels = {pt.P: pt.branch for pt in c.points}
    assert labels[-2.14e-5] == LOWER and labels[-1.9996] == UPPER
    c0 = sweep.assign_branches(sweep.build_curve(PotentialParams(0.0), [-1.5, -0.5, -0.1], PER))
    assert {pt.branch for pt in c0.points} == {SINGLE}


def test_many_stationary_points_get_numbered_labels():
    pts = [CurvePoint(P) for P in (-1.9, -1.5, -1.0, -0.5, -0.1)]
    c = sweep.assign_branches(SweepCurve(PotentialParams(1.0, 4), PER, pts, P_star=-1.2, stationary=[-1.2, -0.7]))
    assert [p.branch for p in c.points] == ["branch-2", "branch-2", "branch-1", "branch-0", "branch-0"]


def test_branch_too_small():
    pts = [CurvePoint(P, 1.0, 1.0, 1.0, branch=SINGLE) for P in (-1.0, -0.5)]
    with pytest.raises(BranchTooSmall):
        sweep.force_curve(SweepCurve(PotentialParams(0.0), PER, pts))


def test_failed_rows_are_recorded():
    # a row within the divergence guard fails individually
    c = sweep.build_curve(PotentialParams(1.0), [-1.5, -1.0, -1e-13], PER)
    assert [p.ok for p in c.points] == [True, True, False]
    assert "NotBounded" in c.points[-1].error


def test_threads_give_identical_results():
    p = PotentialParams(1.0)
    grid = sweep.default_grid(p, PER, 120)
    a = sweep.sweep(p, PER, grid, threads=1)
    b = sweep.sweep(p, PER, grid, threads=4)
    assert a.points == b.points and a.P_star == b.P_star


@pytest.mark.parametrize("eps,cls", [(1.0, PER), (10.0, PER), (0.3, PER), (0.0, PER), (10.0, STEP)])
def test_grid_refinement_stability(eps, cls):
    p = PotentialParams(eps)
    n = 300 if cls is PER else 200
    coarse = sweep.sweep(p, cls, sweep.default_grid(p, cls, n))
    fine = sweep.sweep(p, cls, sweep.default_grid(p, cls, 2 * n - 1))
    Fc = coarse.column("F")
    Ff = fine.column("F")[::2]
    assert np.allclose(coarse.P, fine.P[::2], rtol=1e-12, atol=1e-15)
    # at |P| < 1e-6 roundoff in E and L, not the grid, limits F
    m = np.isfinite(Fc) & np.isfinite(Ff) & (np.abs(coarse.P) > 1e-6)
    assert m.sum() > 0.6 * n
    assert np.max(np.abs(Fc[m] - Ff[m]) / np.abs(Ff[m])) < 1e-4


def test_critical_epsilon_n3_is_exploratory():
    # pi is never a false vacuum for odd n, so no flip is found on [0.1, 1]
    assert sweep.critical_epsilon(3) is None


def test_derivative_fourth_order():
    errs = []
    for n in (41, 81):
        s = np.linspace(0, 2, n)
        errs.append(np.max(np.abs(sweep.derivative(np.sin(s), s) - np.cos(s))))
    assert 3.5 < math.log2(errs[0] / errs[1]) < 4.5


def test_golden_section():
    assert sweep.golden_section(lambda x: (x - 0.3) ** 2, -1, 2) == pytest.approx(0.3, abs=1e-9)
