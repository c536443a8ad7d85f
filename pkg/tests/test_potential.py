import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dsgchain import potential
from dsgchain.errors import InvalidParameters
from dsgchain.potential import PotentialParams, VacuumKind

eps_st = st.floats(0.0, 50.0)
phi_st = st.floats(-20.0, 20.0)


@pytest.mark.parametrize(
    "eps,phi,expected",
    [(1.0, 0.0, 0.0), (0.3, math.pi, 2.0), (1.0, math.pi / 2, 3.0)],
)
def test_eval_examples(eps, phi, expected):
    assert potential.eval(PotentialParams(eps), phi) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize(
    "eps,phi,expected",
    [(1.0, 0.0, 0.0), (5.0, math.pi, 0.0), (1.0, math.pi / 2, 1.0)],
)
def test_grad_examples(eps, phi, expected):
    assert potential.grad(PotentialParams(eps), phi) == pytest.approx(expected, abs=1e-13)


@pytest.mark.parametrize("eps", [0.0, 0.25, 0.7, 3.0])
def test_curvature_at_pi(eps):
    assert potential.curvature(PotentialParams(eps), math.pi) == pytest.approx(-1 + 4 * eps, abs=1e-13)


def test_curvature_at_origin():
    assert potential.curvature(PotentialParams(1.0), 0.0) == pytest.approx(5.0)


def test_vectorized_and_scalar_types():
    p = PotentialParams(1.0)
    assert isinstance(potential.eval(p, 0.3), float)
    out = potential.eval(p, np.linspace(0, 1, 4))
    assert out.shape == (4,)


@pytest.mark.parametrize("eps,n", [(-0.1, 2), (math.nan, 2), (math.inf, 2), (1.0, 1), (1.0, 2.5)])
def test_invalid_params(eps, n):
    with pytest.raises(InvalidParameters):
        PotentialParams(eps, n)


def test_vacua_eps_one():
    vac = potential.classify_vacua(PotentialParams(1.0))
    assert [v.kind for v in vac] == [VacuumKind.TRUE, VacuumKind.FALSE]
    true, false = vac
    assert true.location == 0.0 and true.value == 0.0 and true.curvature > 0
    assert false.location == pytest.approx(math.pi, abs=1e-11)
    assert false.value == pytest.approx(2.0, abs=1e-12)
    assert false.curvature == pytest.approx(3.0, abs=1e-9)


def test_vacua_small_eps_true_only():
    vac = potential.classify_vacua(PotentialParams(0.1))
    assert len(vac) == 1 and vac[0].kind is VacuumKind.TRUE


def test_barrier_top_closed_form():
    # sin(phi) (1 + 4 eps cos(phi)) = 0 gives cos(phi*) = -1/4 at eps = 1
    tops = potential.barrier_tops(PotentialParams(1.0))
    star = math.acos(-0.25)
    locs = [t[0] for t in tops]
    assert any(abs(l - star) < 1e-10 for l in locs)
    assert any(abs(l - (2 * math.pi - star)) < 1e-10 for l in locs)
    for loc, v in tops:
        assert v == pytest.approx(3.125, abs=1e-12)


@pytest.mark.parametrize("eps", [0.24, 0.26, 0.5, 2.0])
def test_false_vacuum_iff_eps_above_quarter(eps):
    kinds = [v.kind for v in potential.classify_vacua(PotentialParams(eps))]
    assert (VacuumKind.FALSE in kinds) == (eps > 0.25)


@pytest.mark.parametrize("eps,n", [(1.0, 3), (0.5, 4), (2.0, 5)])
def test_vacua_are_stationary_minima(eps, n):
    p = PotentialParams(eps, n)
    for v in potential.classify_vacua(p):
        assert abs(potential.grad(p, v.location)) < 1e-9
        assert v.curvature > 0
        if v.kind is VacuumKind.FALSE:
            assert v.value > 0
        else:
            assert v.value == 0


@pytest.mark.parametrize("n", [3, 5])
def test_odd_n_pi_is_not_a_false_vacuum(n):
    p = PotentialParams(1.0, n)
    assert potential.curvature(p, math.pi) < 0
    assert all(abs(v.location - math.pi) > 1e-6 for v in potential.classify_vacua(p))


@given(eps_st, phi_st)
def test_nonnegative(eps, phi):
    assert potential.eval(PotentialParams(eps), phi) >= 0.0


@given(eps_st, st.floats(1e-3, 2 * math.pi - 1e-3))
def test_zero_only_at_true_vacuum(eps, phi):
    assert potential.eval(PotentialParams(eps), phi) > 0.0


@given(eps_st, st.integers(2, 6), phi_st)
def test_periodic_and_symmetric(eps, n, phi):
    p = PotentialParams(eps, n)
    v = potential.eval(p, phi)
    assert potential.eval(p, phi + 2 * math.pi) == pytest.approx(v, rel=1e-12, abs=1e-12)
    assert potential.eval(p, 2 * math.pi - phi) == pytest.approx(v, rel=1e-12, abs=1e-12)


@given(st.floats(0.0, 10.0), st.integers(2, 4), st.floats(-6.0, 6.0))
def test_derivatives_match_finite_differences(eps, n, phi):
    p = PotentialParams(eps, n)
    h = 1e-5
    fd1 = (potential.eval(p, phi + h) - potential.eval(p, phi - h)) / (2 * h)
    fd2 = (potential.grad(p, phi + h) - potential.grad(p, phi - h)) / (2 * h)
    scale = 1 + n * n * eps
    assert abs(fd1 - potential.grad(p, phi)) < 1e-7 * scale
    assert abs(fd2 - potential.curvature(p, phi)) < 1e-7 * scale


@given(phi_st)
def test_sine_gordon_reduction(phi):
    assert potential.eval(PotentialParams(0.0), phi) == pytest.approx(1 - math.cos(phi), abs=1e-14)
