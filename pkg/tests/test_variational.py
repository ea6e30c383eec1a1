import numpy as np
import pytest

from eigenbounds.bounds.variational import (
    TempleInput, TrialParams, apply_hamiltonian, apply_hamiltonian_cartesian, lcao_upper_bound,
    optimize_temple_bound, optimize_upper_bound, rayleigh, second_moment, temple_bound, trial_moments,
    trial_value, trial_value_cartesian,
)
from eigenbounds.data.models import NuclearGeometry
from eigenbounds.exceptions import DomainError, GeometryError, TempleError
from eigenbounds.integrals.becke import becke_grid

from oracles import H2_PLUS_R2_ENERGY, fd_laplacian, h2_plus_ritz_energy

# H2+ electronic ground state at R = 1 bohr
H2_PLUS_R1_ENERGY = -1.4517863


@pytest.fixture(scope='module')
def upper_r1():
    return optimize_upper_bound(1.0)


def _points_off_nuclei(rng, R, count=50):
    points = rng.normal(size=(400, 3)) * 1.5
    nuclei = np.array([[0.0, 0.0, -R / 2.0], [0.0, 0.0, R / 2.0]])
    distance = np.min(np.linalg.norm(points[:, None, :] - nuclei[None], axis=-1), axis=1)
    return points[distance > 0.5][:count]


@pytest.mark.parametrize("alpha,beta,R", [(1.2, 0.3, 1.5), (0.9, -0.2, 3.0), (1.6, 0.0, 0.4)])
def test_hamiltonian_matches_finite_differences(alpha, beta, R, rng):
    params = TrialParams(alpha, beta, R)
    points = _points_off_nuclei(rng, R)
    assert len(points) == 50
    psi = trial_value_cartesian(params, points)
    r_a = np.linalg.norm(points - np.array([0.0, 0.0, -R / 2.0]), axis=1)
    r_b = np.linalg.norm(points - np.array([0.0, 0.0, R / 2.0]), axis=1)
    expected = -0.5 * fd_laplacian(lambda x: trial_value_cartesian(params, x), points) - (1.0 / r_a + 1.0 / r_b) * psi
    actual = apply_hamiltonian_cartesian(params, points)
    scale = np.maximum(np.abs(actual), np.abs(psi))
    assert np.all(np.abs(actual - expected) <= 1e-6 * scale)


def test_trial_function_shape():
    params = TrialParams(1.0, 0.5, 2.0)
    assert params.p == pytest.approx(1.0)
    assert params.q == pytest.approx(0.5)
    assert trial_value(params, 1.0, 0.0) == pytest.approx(np.exp(-1.0))
    assert trial_value(params, 1.0, 1.0) == pytest.approx(1.5 * np.exp(-1.0))
    # symmetric under exchange of the nuclei
    assert apply_hamiltonian(params, 2.0, 0.3) == pytest.approx(apply_hamiltonian(params, 2.0, -0.3))


def test_invalid_parameters():
    with pytest.raises(DomainError):
        rayleigh(TrialParams(0.0, 0.1, 1.0))
    with pytest.raises(DomainError):
        second_moment(TrialParams(-1.0, 0.0, 1.0))
    with pytest.raises(DomainError):
        TrialParams(float('nan'), 0.0, 1.0)
    with pytest.raises(GeometryError):
        TrialParams(1.0, 0.0, 0.0)
    with pytest.raises(GeometryError):
        optimize_upper_bound(-1.0)


@pytest.mark.parametrize("alpha,beta", [(1.0, 0.0), (1.3, 0.2), (0.8, -0.3), (2.0, 1.0)])
def test_rayleigh_quotient_above_ground_state(alpha, beta):
    norm2, mean = rayleigh(TrialParams(alpha, beta, 1.0))
    assert norm2 > 0
    assert mean >= H2_PLUS_R1_ENERGY - 1e-8


def test_moments_agree_across_grids():
    params = TrialParams(1.25, 0.15, 1.0)
    norm2, mean = rayleigh(params)
    moments = trial_moments(params)
    assert moments.norm2 == pytest.approx(norm2, rel=1e-10)
    assert moments.mean == pytest.approx(mean, abs=1e-10)
    assert moments.second_moment == pytest.approx(second_moment(params), rel=1e-14)
    assert moments.variance >= 0


def test_second_moment_matches_becke_integration():
    R = 1.0
    params = TrialParams(1.3, 0.2, R)
    grid = becke_grid(np.array([[0.0, 0.0, -R / 2.0], [0.0, 0.0, R / 2.0]]), 120, 40, 80)
    psi = trial_value_cartesian(params, grid.points)
    h_psi = apply_hamiltonian_cartesian(params, grid.points)
    norm2 = grid.integrate(psi * psi)
    moments = trial_moments(params)
    assert moments.norm2 == pytest.approx(norm2, rel=1e-7)
    assert moments.mean == pytest.approx(grid.integrate(psi * h_psi) / norm2, rel=1e-7)
    assert moments.second_moment == pytest.approx(grid.integrate(h_psi * h_psi) / norm2, rel=1e-5)


def test_upper_bound_unit_distance(upper_r1):
    assert upper_r1.method == 'trial'
    assert upper_r1.alpha > 0
    assert upper_r1.value == pytest.approx(-1.4515, abs=2e-3)
    assert upper_r1.value >= H2_PLUS_R1_ENERGY - 1e-8
    assert upper_r1.evaluations > 0
    assert rayleigh(TrialParams(upper_r1.alpha, upper_r1.beta, 1.0))[1] == pytest.approx(upper_r1.value)


def test_upper_bound_near_united_atom():
    result = optimize_upper_bound(0.2)
    assert result.value >= -2.0
    assert result.value == pytest.approx(-1.9285, abs=2e-3)


def test_temple_formula():
    assert temple_bound(TempleInput(mean=-1.0, second_moment=1.01, mu2_lb=-0.5)) == pytest.approx(-1.02)
    # an eigenfunction has zero variance and the bound is its eigenvalue
    assert temple_bound(TempleInput(mean=-1.0, second_moment=1.0, mu2_lb=-0.5)) == pytest.approx(-1.0)


def test_temple_monotone_in_second_threshold():
    values = [temple_bound(TempleInput(-1.0, 1.05, mu2)) for mu2 in (-0.9, -0.7, -0.5, -0.2)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert all(v <= -1.0 for v in values)


def test_temple_preconditions():
    with pytest.raises(TempleError):
        temple_bound(TempleInput(mean=-0.4, second_moment=0.2, mu2_lb=-0.5))
    with pytest.raises(TempleError):
        temple_bound(TempleInput(mean=-0.5, second_moment=0.3, mu2_lb=-0.5))
    with pytest.raises(TempleError):
        temple_bound(TempleInput(mean=-1.0, second_moment=0.9, mu2_lb=-0.5))


def test_temple_bound_unit_distance(upper_r1):
    result = optimize_temple_bound(1.0, -0.4807, start=upper_r1)
    assert result.method == 'temple'
    assert result.value == pytest.approx(-1.4522, abs=2e-3)
    assert result.value <= upper_r1.value
    assert result.value <= H2_PLUS_R1_ENERGY + 1e-8
    with pytest.raises(TempleError):
        optimize_temple_bound(1.0, -2.0, start=upper_r1)


def test_ritz_oracle_reaches_exact_energy():
    value = h2_plus_ritz_energy(2.0)
    assert value >= H2_PLUS_R2_ENERGY - 1e-9
    assert value == pytest.approx(H2_PLUS_R2_ENERGY, abs=1e-5)


def test_lcao_upper_bound_h2():
    result = lcao_upper_bound(NuclearGeometry.h2_plus(2.0))
    assert result.method == 'lcao'
    assert result.beta is None
    assert H2_PLUS_R2_ENERGY < result.value < -1.08
    assert 1.0 < result.alpha < 1.5


def test_lcao_upper_bound_h3_is_above_lower_bound():
    result = lcao_upper_bound(NuclearGeometry.h3_equilateral(1.0))
    # j = 3 lower bound at R = 1
    assert -2.8558 - 5e-4 < result.value < 0.0
