"""Dense linear algebra and two-qubit entanglement scalars.

Everything here works on plain ``numpy`` arrays of at most 4x4.  Two-qubit
matrices use the ket ordering ``|ab>`` with index ``2*a + b``; qubit ``A`` is
the left label and qubit ``B`` the right one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-9
DEGENERACY_GAP = 1e-12

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
_YY = np.kron(SIGMA_Y, SIGMA_Y)


@dataclass(frozen=True)
class HermitianSpectrum:
    """Eigenvalues (non-increasing) and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_square(m, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} has non-finite entries")
    return m


def hermiticity_residual(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T)))


def symmetrize(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    return 0.5 * (m + m.conj().T)


def _check_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    diff = np.abs(m - m.conj().T)
    worst = np.unravel_index(np.argmax(diff), diff.shape)
    if diff[worst] > tol:
        i, j = (int(k) for k in worst)
        raise ValidationError(
            f"matrix is not Hermitian: |M[{i},{j}] - conj(M[{j},{i}])| = {diff[worst]:.3e}"
        )


def _fix_phase(v: np.ndarray) -> np.ndarray:
    mags = np.abs(v)
    k = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    return v * (np.conj(v[k]) / mags[k])


def _canonical_block(vecs: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of the span of ``vecs`` (columns)."""
    n, dim = vecs.shape
    proj = vecs @ vecs.conj().T
    chosen: list[np.ndarray] = []
    # project the standard basis, strongest overlap first
    order = sorted(range(n), key=lambda k: (-round(proj[k, k].real, 12), k))
    for k in order:
        u = proj[:, k].copy()
        for c in chosen:
            u -= c * np.vdot(c, u)
        norm = np.linalg.norm(u)
        if norm > 1e-6:
            chosen.append(u / norm)
        if len(chosen) == dim:
            break
    block = [_fix_phase(c) for c in chosen]
    block.sort(key=lambda c: tuple(-round(abs(x), 12) for x in c))
    return np.column_stack(block)


def hermitian_eig(m) -> HermitianSpectrum:
    """Eigen-decomposition with a deterministic ordering and phase convention.

    Eigenvalues come out non-increasing.  Each eigenvector has its
    largest-magnitude component real and positive; inside a degenerate block
    (gap < 1e-12) a canonical basis is built from the projected standard basis
    and ordered lexicographically by component magnitude.
    """
    m = as_square(m)
    _check_hermitian(m)
    vals, vecs = np.linalg.eigh(symmetrize(m))
    vals = vals[::-1].copy()
    vecs = vecs[:, ::-1].copy()

    out = np.empty_like(vecs)
    start = 0
    n = len(vals)
    while start < n:
        stop = start + 1
        while stop < n and vals[stop - 1] - vals[stop] < DEGENERACY_GAP:
            stop += 1
        if stop - start == 1:
            out[:, start] = _fix_phase(vecs[:, start])
        else:
            out[:, start:stop] = _canonical_block(vecs[:, start:stop])
            vals[start:stop] = vals[start:stop].mean()
        start = stop
    return HermitianSpectrum(vals, out)


def check_density_matrix(rho, name: str = "rho") -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity; return the array."""
    rho = as_square(rho, name)
    _check_hermitian(rho)
    tr = np.trace(rho)
    if abs(tr - 1) > TRACE_TOL:
        raise ValidationError(f"{name} has trace {tr.real:.12g}, expected 1")
    lo = np.linalg.eigvalsh(symmetrize(rho))[0]
    if lo < -POSITIVITY_TOL:
        raise ValidationError(f"{name} has negative eigenvalue {lo:.3e}")
    return rho


def partial_trace(rho, keep: str) -> np.ndarray:
    """Reduced 2x2 state of qubit ``"A"`` (left label) or ``"B"`` (right label)."""
    rho = as_square(rho)
    if rho.shape != (4, 4):
        raise ValidationError("partial_trace expects a 4x4 two-qubit matrix")
    r = rho.reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ijkj->ik", r)
    if keep == "B":
        return np.einsum("ijil->jl", r)
    raise ValidationError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_transpose(rho) -> np.ndarray:
    """Partial transpose over qubit B."""
    r = as_square(rho).reshape(2, 2, 2, 2)
    return r.transpose(0, 3, 2, 1).reshape(4, 4)


def purity(rho) -> float:
    rho = as_square(rho)
    return float(np.real(np.einsum("ij,ji->", rho, rho)))


def concurrence_pure(psi) -> float:
    """Pure-state concurrence ``2|psi00 psi11 - psi01 psi10|``."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.shape != (4,):
        raise ValidationError("concurrence_pure expects a 4-component vector")
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > 1e-10:
        raise ValidationError(f"state is not normalized (norm {norm:.12g})")
    return float(2 * abs(psi[0] * psi[3] - psi[1] * psi[2]))


def concurrence_many(psis: np.ndarray) -> np.ndarray:
    """Vectorized pure-state concurrence over the last axis; no norm check."""
    return 2 * np.abs(psis[..., 0] * psis[..., 3] - psis[..., 1] * psis[..., 2])


def concurrence_wootters(rho) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    rho = check_density_matrix(rho)
    vals, vecs = np.linalg.eigh(symmetrize(rho))
    vals = np.clip(vals, 0, None)
    sqrt_rho = (vecs * np.sqrt(vals)) @ vecs.conj().T
    # sqrt(rho) rho~ sqrt(rho) = M M^+ with M = sqrt(rho) YY sqrt(rho)*; singular
    # values of M avoid the square roots of tiny eigenvalues
    s = np.linalg.svd(sqrt_rho @ _YY @ sqrt_rho.conj(), compute_uv=False)
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def negativity(rho) -> float:
    """Sum of the magnitudes of the negative eigenvalues of the partial transpose."""
    rho = check_density_matrix(rho)
    vals = np.linalg.eigvalsh(symmetrize(partial_transpose(rho)))
    return float(-vals[vals < 0].sum())


def random_density_matrix(n: int, rank: int | None = None, rng=None) -> np.ndarray:
    """Ginibre-distributed density matrix of the given rank."""
    rng = np.random.default_rng(rng)
    k = n if rank is None else rank
    g = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    rho = g @ g.conj().T
    return symmetrize(rho / np.trace(rho).real)


def random_pure_state(n: int, rng=None) -> np.ndarray:
    rng = np.random.default_rng(rng)
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def random_unitary(n: int, rng=None) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    rng = np.random.default_rng(rng)
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
