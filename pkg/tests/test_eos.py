import math

import numpy as np
import pytest

from dsgchain import eos, orbit, sweep
from dsgchain.eos import StateDiagram, StateRow
from dsgchain.errors import TooFewRows
from dsgchain.orbit import SolutionClass
from dsgchain.potential import PotentialParams
from dsgchain.sweep import LOWER, UPPER

PER, STEP = SolutionClass.PERIODIC, SolutionClass.STEP_LIKE


@pytest.fixture(scope="module")
def diagrams():
    cache = {}

    def get(eps, cls):
        if (eps, cls) not in cache:
            cache[eps, cls] = eos.state_diagram(PotentialParams(eps), cls=cls)
        return cache[eps, cls]

    return get


def test_false_vacuum_state():
    assert eos.false_vacuum_state() == (-2.0, 2.0)


def test_rows_share_orbit_summaries(diagrams):
    d = diagrams(1.0, PER)
    p = PotentialParams(1.0)
    for row in d.rows[::199]:
        assert row.rho_bar == orbit.soliton_metrics(p, row.P).rho_bar


@pytest.mark.parametrize("eps", [0.0, 1.0, 10.0])
def test_periodic_rows_in_range(diagrams, eps):
    d = diagrams(eps, PER) if eps != 10.0 else eos.state_diagram(PotentialParams(eps), sweep.default_grid(PotentialParams(eps), PER, 200))
    P, rho = d.column("P"), d.column("rho_bar")
    assert np.all((P > -2) & (P < 0)) and np.all(rho > 0)
    assert np.all(P >= eos.false_vacuum_state()[0])


@pytest.mark.parametrize("eps", [0.0, 1.0])
def test_chi_times_inverse(diagrams, eps):
    d = diagrams(eps, PER)
    chi, inv = d.column("chi"), d.column("inv_chi")
    m = np.isfinite(chi) & np.isfinite(inv) & (chi != 0)
    assert np.allclose(chi[m] * inv[m], 1.0, rtol=1e-14)


def test_chi_matches_direct_difference(diagrams):
    d = diagrams(1.0, PER)
    p = PotentialParams(1.0)
    for row in d.rows[100:900:100]:
        h = 1e-5 * min(abs(row.P), row.P + 2)
        direct = (orbit.soliton_metrics(p, row.P + h).rho_bar - orbit.soliton_metrics(p, row.P - h).rho_bar) / (2 * h)
        assert row.chi == pytest.approx(direct, rel=1e-4, abs=1e-8)


def test_maximum_density(diagrams):
    d = diagrams(1.0, PER)
    assert d.rho_max == pytest.approx(3.385, rel=1e-2)
    assert d.rho_max >= d.column("rho_bar").max()


def test_density_maximum_is_the_joining_point(diagrams):
    # d rho / dP = -L'(P) (P + rho) / L vanishes with L'(P)
    d = diagrams(1.0, PER)
    ps = sweep.locate_pstar(PotentialParams(1.0))
    assert d.P_at_max == pytest.approx(ps, abs=1e-3)


def test_single_sign_change_at_maximum(diagrams):
    d = diagrams(1.0, PER)
    prof = eos.compressibility_profile(d)
    assert len(prof.sign_changes) == 1
    spacing = np.max(np.diff(d.column("P")))
    assert abs(prof.sign_changes[0] - d.P_at_max) < spacing


def test_chi_sign_by_branch(diagrams):
    # chi = -L'(P) (P + rho) / L with P + rho = <phi'^2> > 0: chi has the
    # sign of -L'(P), negative on the SG-like lower branch and positive on
    # the new upper branch
    d = diagrams(1.0, PER)
    ps = sweep.locate_pstar(PotentialParams(1.0))
    for r in d.rows:
        if abs(r.P - ps) < 5e-3:
            continue
        if r.branch == LOWER:
            assert r.chi < 0
        else:
            assert r.branch == UPPER and r.chi > 0


def test_sine_gordon_periodic_is_one_signed(diagrams):
    d = diagrams(0.0, PER)
    prof = eos.compressibility_profile(d)
    assert prof.sign_changes == []
    chi = d.column("chi")
    assert np.all(chi < 0)
    # the fluid becomes inexpandable at the (-2, 2) end point
    assert abs(chi[0]) < 1e-6
    assert d.rows[0].rho_bar == pytest.approx(2.0, abs=1e-6)


@pytest.mark.parametrize("eps", [0.0, 10.0])
def test_step_like_positive_compressibility(diagrams, eps):
    d = diagrams(eps, STEP)
    assert np.all(d.column("chi") > 0)
    assert eos.compressibility_profile(d).sign_changes == []
    P, rho = d.column("P"), d.column("rho_bar")
    assert np.all(np.diff(rho) > 0)
    # linear regime: dP / d rho climbs toward 1 at large P
    slope = np.diff(P[-20:]) / np.diff(rho[-20:])
    assert np.all(np.diff(slope) > 0) and abs(slope[-1] - 1) < 0.02


@pytest.mark.parametrize("eps", [0.0, 0.3, 1.0, 10.0])
def test_traversal_connected(diagrams, eps):
    rho = diagrams(eps, PER).column("rho_bar")
    assert np.max(np.abs(np.diff(rho))) < 0.05


def test_too_few_rows():
    d = StateDiagram(PotentialParams(0.0), PER, [StateRow(-1.0, 1.0, -1.0, -1.0, "single")] * 4, 1.0, -1.0)
    with pytest.raises(TooFewRows):
        eos.compressibility_profile(d)


def test_endpoint_limit_sine_gordon():
    lim = eos.endpoint_limit(PotentialParams(0.0))
    assert abs(lim["P"] + 2) < 1e-12
    assert abs(lim["rho_bar"] - 2) < 1e-3
    assert abs(lim["L"] - math.pi) < 1e-3


def test_sine_gordon_row_near_end():
    m = orbit.soliton_metrics(PotentialParams(0.0), -2 + 1e-8)
    assert abs(m.rho_bar - 2) < 1e-3
