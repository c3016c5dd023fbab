"""Nested-projector weights and the local-unitary invariants of a two-qubit state."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from ..errors import ValidationError
from ..qmath import check_density_matrix, concurrence_pure, hermitian_eig, partial_trace


@dataclass(frozen=True)
class EntanglementInvariants:
    w1: float
    w2: float
    w3: float
    w4: float
    e1: float       # concurrence of the top eigenvector
    x: float        # canonical form of the top-two plane:
    y: float        #   span{|00>, x|01> + y|10> + z|11>}
    z: float
    e_cusp: float
    e_max: float
    e_perp: float   # concurrence of the eigenvector outside the rank-3 support
    p_a2: float     # squared polarizations of the two reduced states of P2/2
    p_b2: float

    @property
    def weights(self) -> tuple[float, float, float, float]:
        return (self.w1, self.w2, self.w3, self.w4)

    def as_dict(self) -> dict:
        return asdict(self)


def nested_weights(eigenvalues) -> tuple[float, float, float, float]:
    """Weights of the nested projectors ``P_d`` built from the top ``d`` eigenvectors.

    ``w_d = (lambda_d - lambda_{d+1}) / lambda_1`` with ``lambda_5 = 0``.  They
    sum to one and satisfy ``rho = lambda_1 * sum_d w_d P_d``.
    """
    lam = np.asarray(eigenvalues, dtype=float).ravel()
    if lam.shape != (4,):
        raise ValidationError("expected four eigenvalues")
    if lam[-1] < -1e-9:
        raise ValidationError(f"negative eigenvalue {lam[-1]:.3e}")
    if np.any(np.diff(lam) > 1e-12):
        raise ValidationError("eigenvalues must be sorted non-increasing")
    if abs(lam.sum() - 1) > 1e-9:
        raise ValidationError(f"eigenvalues sum to {lam.sum():.12g}, expected 1")
    lam = np.clip(lam, 0, None)
    gaps = lam - np.append(lam[1:], 0.0)
    w = np.clip(gaps, 0, None) / lam[0]
    return tuple(float(v) for v in w)


def projector_resolution(eigenvectors, weights, lambda1: float) -> np.ndarray:
    """Rebuild ``rho`` as ``lambda_1 * sum_d w_d P_d``."""
    v = np.asarray(eigenvectors)
    out = np.zeros((v.shape[0], v.shape[0]), dtype=complex)
    for d, w in enumerate(weights, start=1):
        p = v[:, :d] @ v[:, :d].conj().T
        out += w * p
    return lambda1 * out


def plane_parameters(p_a2: float, p_b2: float) -> tuple[float, float, float]:
    """Canonical ``(x, y, z)`` of a two-dimensional subspace from its polarizations.

    For the plane ``span{|00>, x|01> + y|10> + z|11>}`` the reduced states of
    ``P2/2`` have ``P_A^2 = x^2 (1 - y^2)`` and ``P_B^2 = y^2 (1 - x^2)``; this
    inverts those two relations.
    """
    p_a2 = min(max(p_a2, 0.0), 1.0)
    p_b2 = min(max(p_b2, 0.0), 1.0)
    disc = (1 - p_a2 - p_b2) ** 2 - 4 * p_a2 * p_b2
    z2 = math.sqrt(max(disc, 0.0))
    s = 1 - z2
    d = p_a2 - p_b2
    x2 = min(max((s + d) / 2, 0.0), 1.0)
    y2 = min(max((s - d) / 2, 0.0), 1.0)
    return math.sqrt(x2), math.sqrt(y2), math.sqrt(z2)


def plane_extremes(x: float, y: float, z: float) -> tuple[float, float]:
    """``(e_max, e_cusp)`` of the rank-2 distribution; ``e_cusp = 0`` for a separable plane."""
    q = x * y
    e_max = q + math.sqrt(z * z + q * q)
    e_cusp = z * z / e_max if e_max > 1e-15 else 0.0
    return e_max, e_cusp


def _polarization2(rho2: np.ndarray, keep: str) -> float:
    red = partial_trace(rho2, keep)
    return float(1 - 4 * np.linalg.det(red).real)


def invariants_from_state(rho) -> EntanglementInvariants:
    """All distribution parameters of a two-qubit density matrix."""
    rho = check_density_matrix(rho)
    if rho.shape != (4, 4):
        raise ValidationError("expected a 4x4 two-qubit density matrix")
    spec = hermitian_eig(rho)
    lam, vec = spec.eigenvalues, spec.eigenvectors
    w = nested_weights(lam)

    rho2 = 0.5 * vec[:, :2] @ vec[:, :2].conj().T
    p_a2 = _polarization2(rho2, "A")
    p_b2 = _polarization2(rho2, "B")
    x, y, z = plane_parameters(p_a2, p_b2)
    e_max, e_cusp = plane_extremes(x, y, z)

    return EntanglementInvariants(
        w1=w[0], w2=w[1], w3=w[2], w4=w[3],
        e1=concurrence_pure(vec[:, 0]),
        x=x, y=y, z=z,
        e_cusp=e_cusp, e_max=e_max,
        e_perp=concurrence_pure(vec[:, 3]),
        p_a2=p_a2, p_b2=p_b2,
    )
