"""Atomic <-> two-photon state map and the eight-number tomography.

Photon kets are ``|g2 g1>`` with index ``2*g2 + g1``: ``|00>, |01>, |10>, |11>``.
The emitted state never populates ``|10>``; the remaining block
``{|00>, |01>, |11>}`` is the atomic density matrix at the retarded time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .qmath import as_square, check_density_matrix, symmetrize

PHOTON_INDEX = (0, 1, 3)  # |00>, |01>, |11>  <->  |1>, |2>, |3>
EMPTY_INDEX = 2           # |10>

_a = np.array([[0, 1], [0, 0]], dtype=complex)
A1 = np.kron(np.eye(2), _a)  # lowers g1
A2 = np.kron(_a, np.eye(2))  # lowers g2

_BOUND_TOL = 1e-12


@dataclass(frozen=True)
class ObservableSet:
    """Eight real numbers measured on the atom.

    ``p2 = <s1+ s1->``, ``p3 = <s2+ s2->``, ``s1 = <s1->``, ``s2 = <s2->``,
    ``c13 = <s2+ s1+>``, with ``<O> = Tr(rho O)``, ``s1- = |1><2|`` and
    ``s2- = |2><3|``.  Hence ``s1 = rho21``, ``s2 = rho32`` and ``c13 = rho13``.
    The fourth-order correlator equals ``p3`` and is not stored.
    """

    p2: float
    p3: float
    s1: complex
    s2: complex
    c13: complex

    def as_reals(self) -> list[float]:
        return [self.p2, self.p3, self.s1.real, self.s1.imag,
                self.s2.real, self.s2.imag, self.c13.real, self.c13.imag]


@dataclass(frozen=True)
class FieldObservableSet:
    """Normal-ordered moments of the two emitted modes."""

    a1: complex     # <a1>
    a2: complex     # <a2>, zero on the emitted manifold
    n1: float       # <a1+ a1>
    n2: float       # <a2+ a2>
    anom: complex   # <a2+ a1+>
    g2: float       # <a2+ a1+ a1 a2>


def atomic_to_photon(rho_a) -> np.ndarray:
    rho_a = check_density_matrix(rho_a, "atomic state")
    if rho_a.shape != (3, 3):
        raise ValidationError("atomic state must be 3x3")
    out = np.zeros((4, 4), dtype=complex)
    out[np.ix_(PHOTON_INDEX, PHOTON_INDEX)] = rho_a
    return out


def photon_to_atomic(rho_g) -> np.ndarray:
    rho_g = as_square(rho_g, "photon state")
    if rho_g.shape != (4, 4):
        raise ValidationError("photon state must be 4x4")
    leak = max(np.max(np.abs(rho_g[EMPTY_INDEX, :])), np.max(np.abs(rho_g[:, EMPTY_INDEX])))
    if leak > 1e-10:
        raise ValidationError(f"photon state has weight {leak:.3e} in the |10> sector")
    return rho_g[np.ix_(PHOTON_INDEX, PHOTON_INDEX)].copy()


def check_photon_state(rho_g) -> np.ndarray:
    rho_g = check_density_matrix(rho_g, "photon state")
    photon_to_atomic(rho_g)
    return rho_g


def atomic_observables(rho_a) -> ObservableSet:
    rho_a = check_density_matrix(rho_a, "atomic state")
    return ObservableSet(
        p2=float(rho_a[1, 1].real),
        p3=float(rho_a[2, 2].real),
        s1=complex(rho_a[1, 0]),
        s2=complex(rho_a[2, 1]),
        c13=complex(rho_a[0, 2]),
    )


def field_observables(rho_g) -> FieldObservableSet:
    rho_g = check_photon_state(rho_g)

    def ev(op):
        return complex(np.trace(rho_g @ op))

    a1d, a2d = A1.conj().T, A2.conj().T
    return FieldObservableSet(
        a1=ev(A1),
        a2=ev(A2),
        n1=ev(a1d @ A1).real,
        n2=ev(a2d @ A2).real,
        anom=ev(a2d @ a1d),
        g2=ev(a2d @ a1d @ A1 @ A2).real,
    )


def _physical_check(obs: ObservableSet) -> float:
    p1 = 1 - obs.p2 - obs.p3
    if obs.p2 < -_BOUND_TOL or obs.p3 < -_BOUND_TOL:
        raise ValidationError("populations p2, p3 must be non-negative")
    if p1 < -_BOUND_TOL:
        raise ValidationError(f"p2 + p3 = {obs.p2 + obs.p3:.12g} exceeds 1")
    bounds = (
        ("|s1|^2 <= p1*p2", abs(obs.s1) ** 2, p1 * obs.p2),
        ("|s2|^2 <= p2*p3", abs(obs.s2) ** 2, obs.p2 * obs.p3),
        ("|c13|^2 <= p1*p3", abs(obs.c13) ** 2, p1 * obs.p3),
    )
    for label, lhs, rhs in bounds:
        if lhs > rhs + _BOUND_TOL:
            raise ValidationError(f"Cauchy-Schwarz bound violated: {label} ({lhs:.6g} > {rhs:.6g})")
    return p1


def reconstruct(obs: ObservableSet) -> np.ndarray:
    """Photon density matrix from the eight atomic numbers."""
    p1 = _physical_check(obs)
    rho_a = np.array(
        [
            [p1, np.conj(obs.s1), obs.c13],
            [obs.s1, obs.p2, np.conj(obs.s2)],
            [np.conj(obs.c13), obs.s2, obs.p3],
        ],
        dtype=complex,
    )
    lo = np.linalg.eigvalsh(symmetrize(rho_a))[0]
    if lo < -1e-9:
        raise ValidationError(f"observables do not describe a positive state (eigenvalue {lo:.3e})")
    return atomic_to_photon(rho_a)
