"""Driven, damped three-level ladder atom.

Levels are ``|1>, |2>, |3>`` (indices 0, 1, 2).  All rates and frequencies
are in units of the scaling rate gamma, times in units of 1/gamma.  The
Hamiltonian is written in the frame rotating with both lasers, so it is
time independent.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, asdict

import numpy as np

from .errors import ConvergenceError, IntegrationError, ValidationError
from .qmath import check_density_matrix, symmetrize

LOWER_12 = np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]], dtype=complex)  # |1><2|
LOWER_23 = np.array([[0, 0, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)  # |2><3|
GROUND = np.diag([1.0, 0.0, 0.0]).astype(complex)


@dataclass(frozen=True)
class SystemParams:
    omega1: float = 0.0
    omega2: float = 0.0
    delta1: float = 0.0
    delta2: float = 0.0
    gamma2: float = 6.0
    gamma3: float = 1.0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value}")
        if self.gamma2 < 0 or self.gamma3 < 0:
            raise ValidationError("decay constants must be non-negative")

    def replace(self, **changes) -> "SystemParams":
        return SystemParams(**{**asdict(self), **changes})

    def max_rate(self) -> float:
        return max(1.0, abs(self.omega1), abs(self.omega2), self.gamma2, self.gamma3)


PRESETS = {
    "pure": SystemParams(omega1=3.0, omega2=6.0, gamma2=6.0, gamma3=1.0),
    "bell": SystemParams(omega1=6.0, omega2=6.0, gamma2=6.0, gamma3=1.0),
    "mixed": SystemParams(omega1=6.0, omega2=3.0, gamma2=6.0, gamma3=1.0),
}


@dataclass
class EvolutionTrace:
    t: np.ndarray          # (n,)
    rho: np.ndarray        # (n, 3, 3)
    populations: np.ndarray  # (n, 3) diagonal of rho
    purity: np.ndarray     # (n,)

    def __len__(self) -> int:
        return len(self.t)


def build_hamiltonian(p: SystemParams) -> np.ndarray:
    h = np.zeros((3, 3), dtype=complex)
    h[1, 1] = -p.delta1
    h[2, 2] = -(p.delta1 + p.delta2)
    h[0, 1] = h[1, 0] = p.omega1
    h[1, 2] = h[2, 1] = p.omega2
    return h


def _dissipator(c: np.ndarray, rho: np.ndarray) -> np.ndarray:
    cd = c.conj().T
    cdc = cd @ c
    return c @ rho @ cd - 0.5 * (cdc @ rho + rho @ cdc)


def lindblad_rhs(rho, p: SystemParams) -> np.ndarray:
    """Time derivative of the atomic density matrix."""
    rho = np.asarray(rho, dtype=complex)
    h = build_hamiltonian(p)
    out = -1j * (h @ rho - rho @ h)
    out += p.gamma2 * _dissipator(LOWER_12, rho)
    out += p.gamma3 * _dissipator(LOWER_23, rho)
    return out


def liouvillian(p: SystemParams) -> np.ndarray:
    """9x9 generator acting on the row-major vectorization of rho."""
    h = build_hamiltonian(p)
    eye = np.eye(3)
    gen = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for rate, c in ((p.gamma2, LOWER_12), (p.gamma3, LOWER_23)):
        cdc = c.conj().T @ c
        gen += rate * (np.kron(c, c.conj()) - 0.5 * np.kron(cdc, eye) - 0.5 * np.kron(eye, cdc.T))
    return gen


def rk4_step(f, y, dt):
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def rk4_propagator(gen: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step for ``y' = gen @ y`` as a matrix.

    For a linear autonomous system the four stages collapse to the degree-4
    Taylor polynomial of ``exp(dt * gen)``.
    """
    a = dt * gen
    eye = np.eye(gen.shape[0], dtype=complex)
    a2 = a @ a
    a3 = a2 @ a
    return eye + a + a2 / 2 + a3 / 6 + a2 @ a2 / 24


def _warn_strong_drive(p: SystemParams) -> None:
    if max(abs(p.omega1), abs(p.omega2)) > max(p.gamma2, p.gamma3):
        warnings.warn(
            "driving exceeds the decay constants; the single-photon picture is marginal",
            RuntimeWarning,
            stacklevel=3,
        )


def _renormalize(rho: np.ndarray) -> np.ndarray:
    rho = symmetrize(rho)
    return rho / np.trace(rho).real


def evolve(rho0, p: SystemParams, t_max: float, dt: float, sample_every: int = 1) -> EvolutionTrace:
    """Fixed-step RK4 integration from ``rho0`` up to ``t_max``.

    Samples are taken every ``sample_every`` steps, plus t=0 and t=t_max.
    The state is re-symmetrized and trace-renormalized after each step.
    Raises IntegrationError if a sample has an eigenvalue below -1e-6.
    """
    if not dt > 0 or not t_max > 0:
        raise ValidationError("dt and t_max must be positive")
    if sample_every < 1:
        raise ValidationError("sample_every must be >= 1")
    rho = check_density_matrix(rho0, "rho0").astype(complex)
    _warn_strong_drive(p)

    n_steps = max(1, math.ceil(t_max / dt - 1e-9))
    step = rk4_propagator(liouvillian(p), dt)
    last = step
    last_dt = t_max - (n_steps - 1) * dt
    if abs(last_dt - dt) > 1e-12:
        last = rk4_propagator(liouvillian(p), last_dt)

    times = [0.0]
    states = [rho]
    vec = rho.reshape(9)
    for k in range(1, n_steps + 1):
        vec = (last if k == n_steps else step) @ vec
        r = _renormalize(vec.reshape(3, 3))
        vec = r.reshape(9)
        if k % sample_every == 0 or k == n_steps:
            lo = np.linalg.eigvalsh(r)[0]
            if lo < -1e-6:
                raise IntegrationError(
                    f"state lost positivity at t={min(k * dt, t_max):.6g} "
                    f"(min eigenvalue {lo:.3e}); reduce dt"
                )
            times.append(t_max if k == n_steps else k * dt)
            states.append(r)

    rhos = np.array(states)
    pops = np.real(np.einsum("nii->ni", rhos))
    pur = np.real(np.einsum("nij,nji->n", rhos, rhos))
    return EvolutionTrace(np.array(times), rhos, pops, pur)


def nullspace_steady_state(p: SystemParams) -> np.ndarray:
    """Algebraic steady state: kernel of the Liouvillian with unit trace."""
    gen = liouvillian(p)
    trace_row = np.eye(3).reshape(9).astype(complex)
    a = np.vstack([gen, trace_row])
    b = np.zeros(10, dtype=complex)
    b[-1] = 1
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    return symmetrize(sol.reshape(3, 3))


def steady_state(p: SystemParams, tol: float = 1e-9, t_cap: float = 50.0,
                 dt: float | None = None, check_every: int = 50) -> np.ndarray:
    """Integrate from the ground state until ``max|drho/dt| < tol``.

    The converged state is cross-checked against the Liouvillian kernel;
    a disagreement larger than ``10 * tol`` is reported as a ConvergenceError.
    """
    if not tol > 0:
        raise ValidationError("tol must be positive")
    _warn_strong_drive(p)
    if dt is None:
        dt = 0.01 / p.max_rate()
    gen = liouvillian(p)
    step = rk4_propagator(gen, dt)
    vec = GROUND.reshape(9).copy()
    t = 0.0
    residual = float(np.max(np.abs(gen @ vec)))
    while residual >= tol:
        if t >= t_cap:
            raise ConvergenceError(
                f"no steady state by t={t_cap} (residual {residual:.3e})", residual
            )
        for _ in range(check_every):
            vec = step @ vec
        vec = _renormalize(vec.reshape(3, 3)).reshape(9)
        t += check_every * dt
        residual = float(np.max(np.abs(gen @ vec)))

    rho = vec.reshape(3, 3)
    algebraic = nullspace_steady_state(p)
    gap = float(np.max(np.abs(rho - algebraic)))
    if gap > 10 * tol * max(1.0, 1.0 / _slowest_rate(gen)):
        raise ConvergenceError(f"integrated state disagrees with kernel solution by {gap:.3e}", gap)
    return rho


def _slowest_rate(gen: np.ndarray) -> float:
    rates = np.sort(np.abs(np.linalg.eigvals(gen).real))
    nonzero = rates[rates > 1e-10]
    return float(nonzero[0]) if len(nonzero) else 1.0


def two_level_excited_population(omega1: float, delta1: float, gamma2: float) -> float:
    """Resonance-fluorescence steady population of ``|2>`` when ``omega2 = 0``."""
    return omega1**2 / (gamma2**2 / 4 + delta1**2 + 2 * omega1**2)
