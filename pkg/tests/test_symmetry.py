import numpy as np
import pytest

from eigenbounds.bounds.lowerbound import build_B, build_window, compute_bounds
from eigenbounds.bounds.symmetry import (
    D2H_SIGNS, GroupSpec, RepMatrix, d2h_group, harmonic_parity, rep_matrix, representation, restricted_basis,
    symmetric_lower_bounds, trivial_projector,
)
from eigenbounds.data.models import NuclearGeometry
from eigenbounds.exceptions import SymmetryError
from eigenbounds.numerics.specfun import real_sph_harm_cartesian

Z_AXIS = (0.0, 0.0, 1.0)
ORIGIN = (0.0, 0.0, 0.0)


@pytest.fixture
def h2_d2h():
    return d2h_group(Z_AXIS, ORIGIN)


@pytest.fixture
def h2_j2(h2_geometry):
    window, gram, _ = compute_bounds(h2_geometry, 2)
    return window, gram


def test_d2h_elements(h2_d2h):
    assert h2_d2h.order == 8
    for index, signs in enumerate(D2H_SIGNS):
        np.testing.assert_allclose(h2_d2h.elements[index], np.diag(signs), atol=1e-15)
        np.testing.assert_allclose(h2_d2h.elements[index] @ h2_d2h.elements[index], np.eye(3), atol=1e-15)
    h2_d2h.validate()
    # C2(z) C2(y) = C2(x), i sigma(xy) = C2(z)
    assert h2_d2h.product_index(1, 2) == 3
    assert h2_d2h.product_index(4, 5) == 1


def test_d2h_on_tilted_axis_is_a_group():
    group = d2h_group((1.0, 2.0, -0.5), (0.1, 0.2, 0.3))
    group.validate()
    assert group.find(-np.eye(3)) >= 0
    axis = np.array([1.0, 2.0, -0.5]) / np.linalg.norm([1.0, 2.0, -0.5])
    # every element maps the axis onto +-axis
    for q in group.elements:
        assert abs(abs(float(axis @ q @ axis)) - 1.0) < 1e-12


@pytest.mark.parametrize("signs", D2H_SIGNS)
def test_harmonic_parity_matches_reflection(signs, rng):
    points = rng.normal(size=(10, 3))
    for l in range(4):
        for m in range(-l, l + 1):
            moved = real_sph_harm_cartesian(l, m, points * np.array(signs))
            np.testing.assert_allclose(moved, harmonic_parity(l, m, signs) * real_sph_harm_cartesian(l, m, points),
                                       atol=1e-13)


def test_nuclear_permutations(h2_geometry, h2_d2h):
    perms = h2_d2h.permutations(h2_geometry)
    assert perms[0] == (0, 1)
    assert perms[1] == (0, 1)  # C2(z) keeps both nuclei
    assert perms[3] == (1, 0)  # C2(x) swaps them
    assert perms[4] == (1, 0)


def test_swap_representation(h2_geometry, h2_d2h, h2_j2):
    window, gram = h2_j2
    index = window.index()
    rep = rep_matrix(h2_d2h, 4, window, gram, h2_geometry)  # inversion
    assert rep.method == 'signed-permutation'
    assert rep.permutation == (1, 0)
    assert rep.matrix[index[(1, 1, 0, 0)], index[(0, 1, 0, 0)]] == pytest.approx(1.0)
    assert rep.matrix[index[(1, 2, 1, 0)], index[(0, 2, 1, 0)]] == pytest.approx(-1.0)
    assert rep.matrix[index[(0, 2, 1, 1)], index[(1, 2, 1, 1)]] == pytest.approx(-1.0)
    np.testing.assert_allclose(rep.matrix @ rep.matrix, np.eye(window.size), atol=1e-14)


def test_representation_is_a_homomorphism(h2_geometry, h2_d2h, h2_j2):
    window, gram = h2_j2
    reps = representation(h2_d2h, window, gram, h2_geometry)
    assert len(reps) == 8
    for a in range(8):
        for b in range(8):
            product = h2_d2h.product_index(a, b)
            np.testing.assert_allclose(reps[a].matrix @ reps[b].matrix, reps[product].matrix, atol=1e-10)


def test_general_path_agrees_with_closed_form(h2_geometry, h2_d2h, h2_j2):
    window, gram = h2_j2
    for element in range(8):
        # raises SymmetryError if the two constructions differ
        rep_matrix(h2_d2h, element, window, gram, h2_geometry, cross_check=True)


def test_projector(h2_geometry, h2_d2h, h2_j2):
    window, gram = h2_j2
    projector = trivial_projector(representation(h2_d2h, window, gram, h2_geometry))
    np.testing.assert_allclose(projector @ projector, projector, atol=1e-12)
    # invariant functions: 1s and 2s gerade combinations and the 2p_z combination with the same parity
    assert np.trace(projector) == pytest.approx(3.0, abs=1e-12)
    assert restricted_basis(gram, projector).shape[1] == 3
    np.testing.assert_allclose(build_B(window, gram) @ projector, projector @ build_B(window, gram), atol=1e-10)


def test_projector_j1_has_rank_one(h2_geometry, h2_d2h):
    window, gram, _ = compute_bounds(h2_geometry, 1)
    projector = trivial_projector(representation(h2_d2h, window, gram, h2_geometry))
    np.testing.assert_allclose(projector, np.full((2, 2), 0.5), atol=1e-14)


def test_restricted_bounds_unit_distance(h2_geometry, h2_d2h, h2_j2):
    window, gram = h2_j2
    projector = trivial_projector(representation(h2_d2h, window, gram, h2_geometry))
    report = symmetric_lower_bounds(window, gram, projector, R=1.0)
    assert len(report.restricted_bounds) == 3
    assert report.restricted_bounds[0] == pytest.approx(report.bounds[0], abs=1e-10)
    for restricted, full in zip(report.restricted_bounds, report.bounds):
        assert restricted >= full - 1e-10
    assert report.bounds[1] == pytest.approx(-0.6954, abs=2e-4)
    assert report.restricted_bounds[1] == pytest.approx(-0.4807, abs=2e-4)
    record = report.to_dict()
    assert record['mu2_lb_sym'] == report.restricted_bounds[1]


def test_restricted_bounds_are_a_subset(h2_geometry, h2_d2h, h2_j2):
    window, gram = h2_j2
    projector = trivial_projector(representation(h2_d2h, window, gram, h2_geometry))
    report = symmetric_lower_bounds(window, gram, projector)
    full = np.asarray(report.bounds)
    for value in report.restricted_bounds:
        assert np.min(np.abs(full - value)) < 1e-9


def test_trivial_group_restricts_nothing(h2_geometry, h2_j2):
    window, gram = h2_j2
    projector = trivial_projector(representation(GroupSpec.trivial(), window, gram, h2_geometry))
    np.testing.assert_allclose(projector, np.eye(window.size), atol=1e-14)
    report = symmetric_lower_bounds(window, gram, projector)
    np.testing.assert_allclose(report.restricted_bounds, report.bounds, atol=1e-12)


def test_tilted_molecule_gives_same_bounds(h2_d2h, h2_j2, h2_geometry):
    axis = np.array([1.0, 1.0, 1.0]) / np.sqrt(3.0)
    center = np.array([0.3, -0.2, 0.5])
    tilted = NuclearGeometry(np.array([center - 0.5 * axis, center + 0.5 * axis]), (1, 1))
    group = d2h_group(axis, center)
    window, gram, _ = compute_bounds(tilted, 2)
    reps = representation(group, window, gram, tilted)
    assert {rep.method for rep in reps} == {'signed-permutation', 'rotation'}
    report = symmetric_lower_bounds(window, gram, trivial_projector(reps))

    window_z, gram_z = h2_j2
    reference = symmetric_lower_bounds(window_z, gram_z,
                                       trivial_projector(representation(h2_d2h, window_z, gram_z, h2_geometry)))
    np.testing.assert_allclose(report.bounds, reference.bounds, atol=1e-9)
    np.testing.assert_allclose(report.restricted_bounds, reference.restricted_bounds, atol=1e-9)


def test_h3_cyclic_group_projector(h3_geometry):
    angle = 2.0 * np.pi / 3.0
    c, s = np.cos(angle), np.sin(angle)
    turn = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    group = GroupSpec.from_matrices('C3', [np.eye(3), turn, turn @ turn], h3_geometry.centroid())
    window, gram, _ = compute_bounds(h3_geometry, 1)
    reps = representation(group, window, gram, h3_geometry)
    assert {rep.method for rep in reps} == {'signed-permutation', 'rotation'}
    projector = trivial_projector(reps)
    np.testing.assert_allclose(projector, np.full((3, 3), 1.0 / 3.0), atol=1e-12)
    report = symmetric_lower_bounds(window, gram, projector)
    assert len(report.restricted_bounds) == 1
    assert report.restricted_bounds[0] == pytest.approx(report.bounds[0], abs=1e-10)


def test_group_not_matching_geometry(h2_geometry, h2_j2):
    shifted = d2h_group(Z_AXIS, (0.4, 0.0, 0.0))
    with pytest.raises(SymmetryError):
        shifted.permutations(h2_geometry)
    mixed = NuclearGeometry(np.array([[0.0, 0.0, -0.5], [0.0, 0.0, 0.5]]), (1, 2))
    with pytest.raises(SymmetryError):
        d2h_group(Z_AXIS, ORIGIN).permutations(mixed)


def test_invalid_groups_are_rejected():
    with pytest.raises(SymmetryError):
        GroupSpec.from_matrices('broken', [np.eye(3), np.diag([1.0, 2.0, 1.0])], ORIGIN)
    with pytest.raises(SymmetryError):
        GroupSpec.from_matrices('open', [np.eye(3), np.diag([-1.0, -1.0, 1.0]), np.diag([-1.0, 1.0, -1.0])], ORIGIN)
    with pytest.raises(SymmetryError):
        GroupSpec.from_matrices('no identity', [np.diag([-1.0, -1.0, 1.0])], ORIGIN)
    with pytest.raises(SymmetryError):
        trivial_projector([])
    with pytest.raises(SymmetryError):
        trivial_projector([RepMatrix(element=0, matrix=2.0 * np.eye(2), permutation=(0, 1))])


def test_non_commuting_projector_is_rejected(h2_j2):
    window, gram = h2_j2
    projector = np.zeros_like(gram)
    projector[0, 0] = 1.0
    with pytest.raises(SymmetryError):
        symmetric_lower_bounds(window, gram, projector)


def test_window_basis_is_group_closed(h3_geometry):
    window = build_window(h3_geometry, 2)
    keys = set(window.index())
    for key in keys:
        for target in range(3):
            assert (target,) + key[1:] in keys
