
import numpy as np
import pytest

from cascade_photons.dynamics import PRESETS, steady_state
from cascade_photons.entanglement import (
    invariants_from_state,
    nested_weights,
    plane_basis,
    plane_extremes,
    plane_parameters,
    projector_resolution,
)
from cascade_photons.errors import ValidationError
from cascade_photons.qmath import hermitian_eig, random_density_matrix, random_unitary
from cascade_photons.tomography import atomic_to_photon


def random_xyz(rng):
    v = np.abs(rng.normal(size=3))
    return tuple(v / np.linalg.norm(v))


def state_on_plane(x, y, z, lams, rng, local=True):
    """Density matrix whose top two eigenvectors span the (x, y, z) plane."""
    b = plane_basis(x, y, z)
    q, _ = np.linalg.qr(np.column_stack([b, rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))]))
    q[:, :2] = b @ random_unitary(2, rng)
    if local:
        q = np.kron(random_unitary(2, rng), random_unitary(2, rng)) @ q
    return q @ np.diag(lams) @ q.conj().T


def brute_force_extremes(x, y, z, n=1501):
    theta = np.linspace(0, np.pi, n)[:, None]
    phi = np.linspace(0, 2 * np.pi, 721)[None, :]
    c = np.abs(z * np.sin(theta) - np.exp(1j * phi) * (1 - np.cos(theta)) * x * y)
    return c.max(), c.min(axis=1)


class TestNestedWeights:
    def test_example(self):
        np.testing.assert_allclose(nested_weights([0.6, 0.3, 0.1, 0.0]), [0.5, 1 / 3, 1 / 6, 0], atol=1e-15)

    def test_pure(self):
        assert nested_weights([1, 0, 0, 0]) == (1, 0, 0, 0)

    def test_maximally_mixed(self):
        assert nested_weights([0.25] * 4) == (0, 0, 0, 1)

    @pytest.mark.parametrize("lam", [[0.5, 0.5, 0.1, -0.1], [0.1, 0.2, 0.3, 0.4], [0.5, 0.3, 0.1]])
    def test_invalid(self, lam):
        with pytest.raises(ValidationError):
            nested_weights(lam)

    def test_resolution(self, rng):
        for _ in range(200):
            rho = random_density_matrix(4, rng=rng)
            s = hermitian_eig(rho)
            w = nested_weights(s.eigenvalues)
            assert abs(sum(w) - 1) < 1e-12
            np.testing.assert_allclose(projector_resolution(s.eigenvectors, w, s.eigenvalues[0]), rho, atol=1e-12)


class TestPlane:
    def test_example(self):
        x, y, z = plane_parameters(0.36 * (1 - 0.48**2), 0.48**2 * (1 - 0.36))
        assert (x, y, z) == pytest.approx((0.6, 0.48, 0.64), abs=1e-12)

    def test_product_plane(self):
        assert plane_parameters(0.0, 0.0) == (0.0, 0.0, 1.0)
        assert plane_extremes(0, 0, 1) == (1.0, 1.0)

    def test_separable_plane(self):
        assert plane_extremes(1, 0, 0) == (0.0, 0.0)

    def test_inversion_under_local_unitaries(self, rng):
        for _ in range(200):
            x, y, z = random_xyz(rng)
            inv = invariants_from_state(state_on_plane(x, y, z, [0.5, 0.3, 0.2, 0.0], rng))
            assert (inv.x, inv.y, inv.z) == pytest.approx((x, y, z), abs=1e-7)

    def test_extremes_against_brute_force(self, rng):
        for _ in range(30):
            x, y, z = random_xyz(rng)
            e_max, _ = plane_extremes(x, y, z)
            sup, _ = brute_force_extremes(x, y, z)
            assert abs(e_max - sup) < 1e-4

    def test_cusp_is_interior_maximum_of_lower_bound(self, rng):
        # e_cusp is where the lower envelope turns over before theta = pi
        for _ in range(30):
            x, y, z = random_xyz(rng)
            _, e_cusp = plane_extremes(x, y, z)
            _, low = brute_force_extremes(x, y, z)
            interior = low[1:-1]
            peaks = interior[(interior > low[:-2]) & (interior >= low[2:])]
            assert peaks.size and abs(peaks.max() - e_cusp) < 1e-4


class TestInvariants:
    def test_local_unitary_invariance(self, rng):
        keys = ("w1", "w2", "w3", "w4", "e1", "x", "y", "z", "e_cusp", "e_max", "e_perp")
        for _ in range(200):
            rho = random_density_matrix(4, rng=rng)
            u = np.kron(random_unitary(2, rng), random_unitary(2, rng))
            a = invariants_from_state(rho).as_dict()
            b = invariants_from_state(u @ rho @ u.conj().T).as_dict()
            for k in keys:
                assert abs(a[k] - b[k]) < 1e-8, k

    def test_vacuum(self):
        inv = invariants_from_state(atomic_to_photon(np.diag([1, 0, 0])))
        assert inv.weights == (1, 0, 0, 0)
        assert inv.e1 == 0

    def test_photon_states_have_no_fourth_component(self, rng):
        for _ in range(100):
            inv = invariants_from_state(atomic_to_photon(random_density_matrix(3, rng=rng)))
            assert inv.w4 < 1e-12 and inv.e_perp < 1e-12

    @pytest.mark.parametrize("name,w1,e1,e_max", [
        ("pure", 0.9604, 0.7724, 0.98354),
        ("bell", 0.8209, 0.9852, 0.99541),
        ("mixed", 0.4325, 0.7320, 0.84936),
    ])
    def test_presets(self, name, w1, e1, e_max):
        inv = invariants_from_state(atomic_to_photon(steady_state(PRESETS[name])))
        assert inv.w1 == pytest.approx(w1, abs=1e-4)
        assert inv.e1 == pytest.approx(e1, abs=1e-4)
        assert inv.e_max == pytest.approx(e_max, abs=1e-5)

    def test_rejects_wrong_size(self):
        with pytest.raises(ValidationError):
            invariants_from_state(np.eye(3) / 3)
