import math
import warnings

import numpy as np
import pytest

from cascade_photons.dynamics import (
    GROUND,
    PRESETS,
    SystemParams,
    build_hamiltonian,
    evolve,
    lindblad_rhs,
    liouvillian,
    nullspace_steady_state,
    rk4_propagator,
    rk4_step,
    steady_state,
    two_level_excited_population,
)
from cascade_photons.errors import ConvergenceError, IntegrationError, ValidationError
from cascade_photons.qmath import random_density_matrix


def lab_frame_hamiltonian(t, w1, w2, wl1, wl2, o1, o2):
    """Explicitly time-dependent ladder Hamiltonian with laser phases."""
    h = np.diag([0.0, w1, w1 + w2]).astype(complex)
    h[1, 0] = o1 * np.exp(-1j * wl1 * t)
    h[0, 1] = np.conj(h[1, 0])
    h[2, 1] = o2 * np.exp(-1j * wl2 * t)
    h[1, 2] = np.conj(h[2, 1])
    return h


@pytest.mark.parametrize("o1,o2,d1,d2", [(3, 6, 0, 0), (1.5, 0.7, 0.3, -1.1)])
def test_hamiltonian_matches_frame_change(o1, o2, d1, d2):
    w1, w2 = 40.0, 55.0
    wl1, wl2 = w1 + d1, w2 + d2
    u = lambda t: np.diag(np.exp(1j * t * np.array([0, wl1, wl1 + wl2])))
    expected = build_hamiltonian(SystemParams(o1, o2, d1, d2))
    for t in (0.0, 0.37, 1.9):
        eps = 1e-6
        udot = (u(t + eps) - u(t - eps)) / (2 * eps)
        rot = u(t) @ lab_frame_hamiltonian(t, w1, w2, wl1, wl2, o1, o2) @ u(t).conj().T
        rot += 1j * udot @ u(t).conj().T
        np.testing.assert_allclose(rot, expected, atol=1e-6)


def test_hamiltonian_examples():
    np.testing.assert_array_equal(
        build_hamiltonian(SystemParams(3, 6, 0, 0)).real, [[0, 3, 0], [3, 0, 6], [0, 6, 0]]
    )
    np.testing.assert_array_equal(build_hamiltonian(SystemParams(0, 0, 1, 2)), np.diag([0, -1, -3]))
    np.testing.assert_array_equal(
        build_hamiltonian(SystemParams(1, 0)).real, [[0, 1, 0], [1, 0, 0], [0, 0, 0]]
    )


def test_params_validation():
    with pytest.raises(ValidationError):
        SystemParams(gamma2=-1)
    with pytest.raises(ValidationError):
        SystemParams(omega1=float("nan"))


class TestRhs:
    def test_ground_is_stationary(self):
        assert np.all(lindblad_rhs(GROUND, SystemParams()) == 0)

    def test_decay_of_level_two(self):
        d = lindblad_rhs(np.diag([0, 1, 0]), SystemParams(gamma2=6, gamma3=1))
        np.testing.assert_allclose(d, np.diag([6, -6, 0]), atol=1e-15)

    def test_traceless_hermitian(self, rng):
        for _ in range(200):
            p = SystemParams(*rng.uniform(-5, 5, 4), *rng.uniform(0, 10, 2))
            d = lindblad_rhs(random_density_matrix(3, rng=rng), p)
            assert abs(np.trace(d)) < 1e-12
            assert np.max(np.abs(d - d.conj().T)) < 1e-12

    def test_superoperator_agrees(self, rng):
        p = PRESETS["mixed"].replace(delta1=0.4, delta2=-0.2)
        rho = random_density_matrix(3, rng=rng)
        np.testing.assert_allclose(liouvillian(p) @ rho.reshape(9), lindblad_rhs(rho, p).reshape(9), atol=1e-12)


def test_propagator_is_classical_rk4(rng):
    p = PRESETS["bell"]
    rho = random_density_matrix(3, rng=rng)
    dt = 0.013
    stepped = rk4_step(lambda r: lindblad_rhs(r, p), rho, dt)
    np.testing.assert_allclose(rk4_propagator(liouvillian(p), dt) @ rho.reshape(9), stepped.reshape(9), atol=1e-14)


class TestEvolve:
    def test_stationary_ground(self):
        tr = evolve(GROUND, SystemParams(), t_max=5, dt=1e-2, sample_every=50)
        assert np.all(tr.rho == GROUND)
        assert tr.t[-1] == 5

    def test_exponential_decay(self):
        tr = evolve(np.diag([0, 1, 0]), SystemParams(gamma2=6), t_max=0.5, dt=1e-3, sample_every=10)
        assert abs(tr.populations[-1, 1] - math.exp(-3)) < 1e-6

    def test_final_sample_included(self):
        tr = evolve(GROUND, PRESETS["pure"], t_max=0.1005, dt=0.01, sample_every=3)
        assert tr.t[-1] == pytest.approx(0.1005)
        assert np.all(np.diff(tr.t) > 0)

    def test_invariants_along_trace(self):
        tr = evolve(GROUND, PRESETS["bell"], t_max=3, dt=1e-3, sample_every=20)
        for r in tr.rho:
            assert abs(np.trace(r) - 1) < 1e-9
            assert np.max(np.abs(r - r.conj().T)) < 1e-10
            assert np.linalg.eigvalsh(r)[0] > -1e-7

    def test_pure_preset_regression(self):
        tr = evolve(GROUND, PRESETS["pure"], t_max=10, dt=1e-3, sample_every=1000)
        assert tr.purity[-1] == pytest.approx(0.8647125, abs=1e-6)

    def test_unstable_step_aborts(self):
        with pytest.raises(IntegrationError, match="positivity"):
            evolve(GROUND, PRESETS["pure"], t_max=5, dt=0.6, sample_every=1)

    def test_bad_arguments(self):
        with pytest.raises(ValidationError):
            evolve(GROUND, SystemParams(), t_max=1, dt=0)

    def test_fourth_order(self):
        p = PRESETS["pure"]
        final = lambda dt: evolve(GROUND, p, t_max=2, dt=dt, sample_every=10**6).rho[-1]
        dt = 0.04
        ref = final(dt / 8)
        e1 = np.max(np.abs(final(dt) - ref))
        e2 = np.max(np.abs(final(dt / 2) - ref))
        assert math.log2(e1 / e2) > 3.7


class TestSteadyState:
    def test_undriven(self):
        np.testing.assert_allclose(steady_state(SystemParams()), GROUND, atol=1e-12)

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_presets_match_kernel(self, name):
        p = PRESETS[name]
        assert np.max(np.abs(steady_state(p) - nullspace_steady_state(p))) < 1e-7

    @pytest.mark.parametrize("o1,d1,g2,g3", [(1.0, 0.0, 6.0, 1.0), (2.5, 1.5, 4.0, 7.0), (0.3, -2.0, 1.0, 0.5)])
    def test_two_level_limit(self, o1, d1, g2, g3):
        p = SystemParams(omega1=o1, delta1=d1, gamma2=g2, gamma3=g3)
        rho = steady_state(p)
        assert abs(rho[1, 1].real - two_level_excited_population(o1, d1, g2)) < 1e-6

    def test_pure_preset_shape(self):
        rho = steady_state(PRESETS["pure"])
        assert rho[1, 1].real < 0.05
        assert rho[0, 0].real > 0.5

    def test_no_convergence(self):
        with pytest.raises(ConvergenceError) as info:
            steady_state(PRESETS["pure"], t_cap=0.05)
        assert info.value.residual > 1e-9

    def test_strong_drive_warns(self):
        with pytest.warns(RuntimeWarning):
            steady_state(SystemParams(omega1=8, omega2=3))
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            steady_state(PRESETS["bell"])
