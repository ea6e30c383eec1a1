import numpy as np
import pytest

from eigenbounds.bounds.lowerbound import (
    build_A, build_B, build_window, compute_bounds, lower_bounds, whitened_matrix, window_at,
)
from eigenbounds.data.models import BoundReport, NuclearGeometry, SpectralWindow
from eigenbounds.exceptions import DomainError, NumericalError, SingularGramError
from eigenbounds.integrals.twocenter import gram_matrix
from eigenbounds.numerics.linalg import solve_spd

from oracles import overlap_1s1s


def test_window_h2_j1(h2_geometry):
    window = build_window(h2_geometry, 1)
    assert window.size == 2
    assert window.lam == pytest.approx(-1.0)
    assert window.lambda_tilde == (pytest.approx(-0.25), pytest.approx(-0.25))
    assert window.shift == pytest.approx(-0.5)
    np.testing.assert_allclose(window.row_scaling(), [-0.75, -0.75])


def test_window_h3_j1(h3_geometry):
    window = build_window(h3_geometry, 1)
    assert window.size == 3
    assert window.shift == pytest.approx(-9.0 / 8.0)


def test_window_h2_j2(h2_geometry):
    window = build_window(h2_geometry, 2)
    assert window.size == 10
    assert window.shells == (2, 2)
    assert window.shift == pytest.approx(-2.0 / 9.0)
    labels = [orb.key for orb in window.basis[:5]]
    assert labels == [(0, 1, 0, 0), (0, 2, 0, 0), (0, 2, 1, -1), (0, 2, 1, 0), (0, 2, 1, 1)]


def test_window_mixed_charges():
    geometry = NuclearGeometry(np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 2.0]]), (1, 2))
    window = build_window(geometry, 1)
    # lambda = -1 selects j <= 1 on the proton and j <= 2 on the helium nucleus
    assert window.shells == (1, 2)
    assert window.size == 1 + 5
    assert window.lambda_tilde[0] == pytest.approx(-0.25)
    assert window.lambda_tilde[1] == pytest.approx(-2.0 * 4.0 / 18.0)


def test_window_rejects_bad_thresholds(h2_geometry):
    with pytest.raises(DomainError):
        build_window(h2_geometry, 0)
    with pytest.raises(DomainError):
        window_at(h2_geometry, 0.0)
    with pytest.raises(DomainError):
        window_at(h2_geometry, -5.0)
    with pytest.raises(DomainError):
        build_window(h2_geometry, 9)


def test_B_and_A(h2_geometry):
    window = build_window(h2_geometry, 2)
    gram = gram_matrix(list(window.basis), h2_geometry)
    b = build_B(window, gram)
    np.testing.assert_allclose(b, window.row_scaling()[:, None] * gram)
    a = build_A(window, gram)
    np.testing.assert_allclose(a, a.T, atol=1e-14)
    np.testing.assert_allclose(solve_spd(gram, a), b, atol=1e-10)
    with pytest.raises(DomainError):
        build_B(window, gram[:3, :3])


@pytest.mark.parametrize("R", [0.2, 1.0, 2.2, 6.0])
def test_h2_j1_closed_form(R):
    geometry = NuclearGeometry.h2_plus(R)
    _, _, report = compute_bounds(geometry, 1, R=R)
    s = overlap_1s1s(2.0 * R)
    assert report.bounds[0] == pytest.approx(-0.75 * (1.0 + s) - 0.5, abs=1e-10)
    assert report.bounds[1] == pytest.approx(-0.75 * (1.0 - s) - 0.5, abs=1e-10)


@pytest.mark.parametrize("R,expected", [(0.2, -1.9807), (1.0, -1.6898), (3.0, -1.2853)])
def test_h2_j1_matches_published_values(R, expected):
    _, _, report = compute_bounds(NuclearGeometry.h2_plus(R), 1)
    assert report.bounds[0] == pytest.approx(expected, abs=6e-5)


def test_h2_j2_at_unit_distance(h2_geometry):
    _, _, report = compute_bounds(h2_geometry, 2, R=1.0)
    assert report.bounds[0] == pytest.approx(-1.6520, abs=2e-4)
    assert report.bounds[1] == pytest.approx(-0.6954, abs=2e-4)
    assert report.R == 1.0
    assert report.label == h2_geometry.label


@pytest.mark.parametrize("R", [0.2, 1.0, 3.0])
def test_h3_j1_closed_form(R):
    _, _, report = compute_bounds(NuclearGeometry.h3_equilateral(R), 1)
    s = overlap_1s1s(3.0 * R)
    assert report.bounds[0] == pytest.approx(-(9.0 / 8.0) * (1.0 + 2.0 * s) - 9.0 / 8.0, abs=1e-10)
    # the two remaining levels are degenerate
    assert report.bounds[1] == pytest.approx(report.bounds[2], abs=1e-10)


def test_h3_j1_published_value():
    _, _, report = compute_bounds(NuclearGeometry.h3_equilateral(0.2), 1)
    assert report.bounds[0] == pytest.approx(-4.3739, abs=6e-5)


def test_single_center_bounds_are_exact():
    geometry = NuclearGeometry(np.zeros((1, 3)), (1,))
    _, gram, report = compute_bounds(geometry, 2)
    np.testing.assert_allclose(gram, np.eye(5), atol=1e-14)
    np.testing.assert_allclose(report.bounds, [-0.5] + [-0.125] * 4, atol=1e-13)


def test_bounds_are_eigenvalues_of_B(h2_geometry):
    window, gram, report = compute_bounds(h2_geometry, 2)
    direct = np.sort(np.linalg.eigvals(build_B(window, gram)).real)
    np.testing.assert_allclose(np.asarray(report.bounds) - window.shift, direct, atol=1e-10)
    h = whitened_matrix(window, gram)
    np.testing.assert_allclose(h, h.T, atol=0)


def test_bounds_invariant_under_basis_reordering(h2_geometry, rng):
    window, gram, report = compute_bounds(h2_geometry, 2)
    order = rng.permutation(window.size)
    shuffled = SpectralWindow(j_cut=window.j_cut, lam=window.lam, basis=tuple(window.basis[i] for i in order),
                              shells=window.shells, lambda_tilde=window.lambda_tilde)
    again = lower_bounds(shuffled, gram[np.ix_(order, order)])
    np.testing.assert_allclose(again.bounds, report.bounds, atol=1e-12)


def test_bounds_below_separated_limit():
    # far apart the bound stays below the electronic energy, which is close to -1/2 - 1/R
    _, _, report = compute_bounds(NuclearGeometry.h2_plus(12.0), 2)
    assert report.bounds[0] <= -0.5 - 1.0 / 12.0


def test_report_dictionary(h2_geometry):
    _, _, report = compute_bounds(h2_geometry, 1, R=1.0)
    record = report.to_dict()
    assert record['j_cut'] == 1
    assert record['basis_size'] == 2
    assert record['mu1_lb'] == report.bounds[0]
    assert record['mu2_lb'] == report.bounds[1]
    assert record['mu1_lb_sym'] is None
    assert record['restricted_bounds'] is None


def test_report_rejects_unordered_bounds(h2_geometry):
    window, _, report = compute_bounds(h2_geometry, 1, R=1.0)
    with pytest.raises(NumericalError):
        BoundReport(bounds=report.bounds[::-1], window=window, gram_condition=report.gram_condition)


def test_nearly_coincident_nuclei_raise_singular_gram():
    geometry = NuclearGeometry(np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 1e-8]]), (1, 1))
    with pytest.raises(SingularGramError):
        compute_bounds(geometry, 1)
