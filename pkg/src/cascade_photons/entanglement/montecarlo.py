"""Haar-uniform sampling of pure states inside a subspace."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ValidationError
from ..qmath import concurrence_many
from .distributions import PdfCurve, make_grid

CHUNK = 1 << 17


def _check_basis(basis) -> np.ndarray:
    b = np.asarray(basis, dtype=complex)
    if b.ndim == 1:
        b = b[:, None]
    if b.shape[0] != 4:
        raise ValidationError("basis vectors must have 4 components (columns)")
    gram = b.conj().T @ b
    err = np.max(np.abs(gram - np.eye(b.shape[1])))
    if err > 1e-10:
        raise ValidationError(f"basis is not orthonormal (deviation {err:.3e})")
    return b


def haar_concurrences(basis, n_samples: int, seed: int = 42) -> np.ndarray:
    """Concurrence of ``n_samples`` Haar-random states in the span of ``basis`` columns.

    Each chunk draws from its own Philox stream spawned from ``seed``, so the
    result does not depend on how chunks are scheduled.
    """
    b = _check_basis(basis)
    dim = b.shape[1]
    n_chunks = max(1, math.ceil(n_samples / CHUNK))
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    out = np.empty(n_samples)
    for k, child in enumerate(children):
        lo = k * CHUNK
        hi = min(n_samples, lo + CHUNK)
        rng = np.random.Generator(np.random.Philox(child))
        c = rng.standard_normal((hi - lo, dim)) + 1j * rng.standard_normal((hi - lo, dim))
        c /= np.linalg.norm(c, axis=1, keepdims=True)
        out[lo:hi] = concurrence_many(c @ b.T)
    return out


def histogram_pdf(samples, n_bins: int) -> PdfCurve:
    """Empirical PdfCurve: histogram density on the grid plus the exact ECDF."""
    grid = make_grid(n_bins)
    samples = np.sort(np.asarray(samples, dtype=float))
    n = len(samples)
    ecdf = np.searchsorted(samples, grid, side="right") / n
    if samples[-1] - samples[0] < 1e-12:
        loc = float(samples.mean())
        return PdfCurve([(loc, 1.0)], grid, np.zeros_like(grid), np.zeros_like(grid))
    edges = np.concatenate([[0.0], 0.5 * (grid[1:] + grid[:-1]), [1.0]])
    counts, _ = np.histogram(samples, bins=edges)
    density = counts / (n * np.diff(edges))
    return PdfCurve([], grid, density, ecdf)


def mc_pdf_oracle(basis, n_samples: int, seed: int = 42, n_bins: int = 400) -> PdfCurve:
    if n_samples < 10_000:
        raise ValidationError("n_samples must be at least 1e4")
    return histogram_pdf(haar_concurrences(basis, n_samples, seed), n_bins)


def ks_distance(samples, cdf, n_points: int = 4000) -> float:
    """Upper bound on the Kolmogorov-Smirnov distance between samples and ``cdf``.

    ``cdf`` is evaluated at ``n_points + 1`` sample quantiles; monotonicity of
    both functions bounds the gap between evaluation points, so the returned
    value never underestimates the true statistic and exceeds it by at most
    about ``1 / n_points``.
    """
    s = np.sort(np.asarray(samples, dtype=float))
    n = len(s)
    idx = np.unique(np.linspace(0, n - 1, n_points + 1).round().astype(int))
    pts = np.unique(np.concatenate([[s[0] - 1e-12], s[idx], [s[-1]]]))
    f = np.asarray(cdf(pts), dtype=float)
    right = np.searchsorted(s, pts, side="right") / n
    left = np.searchsorted(s, pts, side="left") / n
    on_points = np.max(np.maximum(np.abs(f - right), np.abs(f - left)))
    between = np.maximum(left[1:] - f[:-1], f[1:] - right[:-1])
    return float(max(on_points, between.max(initial=0.0)))


def plane_basis(x: float, y: float, z: float) -> np.ndarray:
    """Orthonormal basis ``{|00>, x|01> + y|10> + z|11>}`` as columns."""
    return np.array([[1, 0], [0, x], [0, y], [0, z]], dtype=complex)


def complement_basis(e_perp: float) -> np.ndarray:
    """Three-dimensional subspace orthogonal to ``cos a|00> + sin a|11>`` with concurrence ``e_perp``."""
    a = 0.5 * math.asin(e_perp)
    return np.array(
        [[0, 0, -math.sin(a)], [1, 0, 0], [0, 1, 0], [0, 0, math.cos(a)]],
        dtype=complex,
    )
