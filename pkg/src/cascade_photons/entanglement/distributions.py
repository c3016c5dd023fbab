"""Analytic entanglement distributions of uniform mixtures over subspaces.

Rank 2: states ``cos(t/2) e^{ip/2}|00> + sin(t/2) e^{-ip/2}(x|01> + y|10> + z|11>)``
have concurrence ``|z sin t - (1 - cos t) x y e^{-ip}|``.  For fixed ``t`` it
sweeps ``[L(t), U(t)]`` with

    U(t) = z sin t + (1 - cos t) x y,      L(t) = |z sin t - (1 - cos t) x y|,

and ``cos t`` is uniform under the Haar measure.  Writing
``q = xy``, ``R = sqrt(z^2 + q^2)`` and ``d = atan2(q, z)`` these become
``U = q + R sin(t - d)`` and ``L = |R sin(t + d) - q|``, so every level
crossing ``U = E`` or ``L = E`` is available in closed form.

Rank 3: the density depends only on the concurrence of the orthogonal state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError
from .invariants import EntanglementInvariants, plane_extremes

DEFAULT_BINS = 400
DEFAULT_NODES = 64
SEPARABLE_EMAX = 1e-12


@dataclass
class PdfCurve:
    """Point masses plus a continuous density sampled on a uniform grid.

    ``cumulative`` (optional) holds the exactly integrated continuous mass up
    to each grid point; ``defect`` is how far the trapezoid mass of the raw
    density was from its target before renormalization.
    """

    deltas: list[tuple[float, float]]
    grid: np.ndarray
    density: np.ndarray
    cumulative: np.ndarray | None = None
    defect: float = 0.0
    meta: dict = field(default_factory=dict)

    def total_mass(self) -> float:
        return sum(w for _, w in self.deltas) + float(np.trapezoid(self.density, self.grid))


@dataclass
class CdfCurve:
    grid: np.ndarray
    values: np.ndarray


def make_grid(n_bins: int) -> np.ndarray:
    if n_bins < 16:
        raise ValidationError(f"n_bins must be at least 16, got {n_bins}")
    return np.linspace(0.0, 1.0, n_bins)


def _check_xyz(x: float, y: float, z: float) -> None:
    if min(x, y, z) < 0:
        raise ValidationError("x, y, z must be non-negative")
    if abs(x * x + y * y + z * z - 1) > 1e-9:
        raise ValidationError(f"x^2 + y^2 + z^2 = {x*x + y*y + z*z:.12g}, expected 1")


def rank2_bounds(theta, x: float, y: float, z: float):
    """``(U(theta), L(theta))`` for the rank-2 plane with parameters ``x, y, z``."""
    theta = np.asarray(theta, dtype=float)
    a = z * np.sin(theta)
    b = (1 - np.cos(theta)) * x * y
    return a + b, np.abs(a - b)


def _arcsin_roots(s: float, shift: float) -> list[float]:
    if abs(s) > 1:
        return []
    u = math.asin(s)
    return [u + shift, math.pi - u + shift]


def _breakpoints(e: float, x: float, y: float, z: float) -> np.ndarray:
    q = x * y
    r = math.hypot(z, q)
    d = math.atan2(q, z)
    cands = [0.0, math.pi]
    cands += _arcsin_roots((e - q) / r, d)       # U = E
    cands += _arcsin_roots((q + e) / r, -d)      # L = E, branch R sin - q = E
    cands += _arcsin_roots((q - e) / r, -d)      # L = E, branch R sin - q = -E
    pts = np.unique(np.clip([c for c in cands if -1e-15 <= c <= math.pi + 1e-15], 0, math.pi))
    return pts


_gl_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _cos_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes in ``s`` on [0, pi] for the map ``theta = m - h cos s``.

    Returns ``(-cos s_k, w_k sin s_k)``: the map puts an inverse-square-root
    endpoint singularity in ``theta`` onto a smooth integrand in ``s``.
    """
    if n not in _gl_cache:
        s, w = np.polynomial.legendre.leggauss(n)
        s = 0.5 * math.pi * (s + 1)
        w = 0.5 * math.pi * w
        _gl_cache[n] = (-np.cos(s), w * np.sin(s))
    return _gl_cache[n]


def _subintervals(e, x, y, z):
    pts = _breakpoints(e, x, y, z)
    for lo, hi in zip(pts[:-1], pts[1:]):
        if hi - lo > 1e-15:
            yield lo, hi


def rank2_density(e_values, x: float, y: float, z: float, nodes: int = DEFAULT_NODES) -> np.ndarray:
    """Continuous density of concurrence for the uniform mixture over the plane."""
    _check_xyz(x, y, z)
    e_values = np.atleast_1d(np.asarray(e_values, dtype=float))
    out = np.zeros_like(e_values)
    q = x * y
    r = math.hypot(z, q)
    if q + r <= SEPARABLE_EMAX:
        return out
    degenerate = q * z < 1e-14
    cx, cw = _cos_nodes(nodes)
    for i, e in enumerate(e_values):
        if e <= 0:
            continue
        if degenerate:
            out[i] = _degenerate_density(e, x, y, z)
            continue
        total = 0.0
        for lo, hi in _subintervals(e, x, y, z):
            mid = 0.5 * (lo + hi)
            u, l = rank2_bounds(mid, x, y, z)
            if not (l < e < u):
                continue
            h = 0.5 * (hi - lo)
            th = mid + h * cx
            u, l = rank2_bounds(th, x, y, z)
            prod = np.clip((e * e - l * l) * (u * u - e * e), 1e-300, None)
            total += h * np.sum(cw * np.sin(th) / np.sqrt(prod))
        out[i] = e / math.pi * total
    return out


def _degenerate_density(e: float, x: float, y: float, z: float) -> float:
    # U == L: concurrence is a deterministic function of theta
    q = x * y
    r = math.hypot(z, q)
    d = math.atan2(q, z)
    total = 0.0
    for th in _arcsin_roots((e - q) / r, d):
        if 0 < th < math.pi:
            slope = abs(r * math.cos(th - d))
            if slope > 1e-12:
                total += 0.5 * math.sin(th) / slope
    return total


def rank2_cdf(e_values, x: float, y: float, z: float, nodes: int = DEFAULT_NODES) -> np.ndarray:
    """Cumulative distribution of concurrence for the uniform mixture over the plane.

    The uniform phase is integrated in closed form, leaving a bounded
    integrand in ``theta``.
    """
    _check_xyz(x, y, z)
    e_values = np.atleast_1d(np.asarray(e_values, dtype=float))
    out = np.zeros_like(e_values)
    q = x * y
    if q + math.hypot(z, q) <= SEPARABLE_EMAX:
        out[e_values >= 0] = 1.0
        return out
    cx, cw = _cos_nodes(nodes)
    for i, e in enumerate(e_values):
        if e < 0:
            continue
        total = 0.0
        for lo, hi in _subintervals(e, x, y, z):
            mid = 0.5 * (lo + hi)
            u, l = rank2_bounds(mid, x, y, z)
            if e >= u:
                total += 0.5 * (math.cos(lo) - math.cos(hi))
            elif e > l:
                h = 0.5 * (hi - lo)
                th = mid + h * cx
                a = z * np.sin(th)
                b = (1 - np.cos(th)) * q
                c = np.clip((a * a + b * b - e * e) / np.maximum(2 * a * b, 1e-300), -1, 1)
                total += h * np.sum(cw * 0.5 * np.sin(th) * np.arccos(c)) / math.pi
        out[i] = total
    return np.clip(out, 0.0, 1.0)


def _finish(grid, density, cumulative, target, deltas, meta) -> PdfCurve:
    mass = float(np.trapezoid(density, grid))
    defect = abs(mass - target)
    if mass > 0 and target > 0:
        density = density * (target / mass)
    return PdfCurve(list(deltas), grid, density, cumulative, defect, meta)


def pdf_rho2(x: float, y: float, z: float, n_bins: int = DEFAULT_BINS,
             nodes: int = DEFAULT_NODES) -> PdfCurve:
    """Unit-mass distribution for the uniform mixture over a two-dimensional subspace."""
    grid = make_grid(n_bins)
    _check_xyz(x, y, z)
    e_max, e_cusp = plane_extremes(x, y, z)
    meta = {"x": x, "y": y, "z": z, "e_max": e_max, "e_cusp": e_cusp}
    if e_max <= SEPARABLE_EMAX:
        return PdfCurve([(0.0, 1.0)], grid, np.zeros_like(grid), np.zeros_like(grid), 0.0, meta)
    dens = rank2_density(grid, x, y, z, nodes)
    cum = rank2_cdf(grid, x, y, z, nodes)
    return _finish(grid, dens, cum, 1.0, [], meta)


def _check_eperp(e_perp: float) -> None:
    if not 0 <= e_perp <= 1:
        raise ValidationError(f"e_perp must lie in [0, 1], got {e_perp}")
    if e_perp >= 1:
        raise ValidationError("e_perp = 1 makes the rank-3 density degenerate")


def rank3_density(e_values, e_perp: float) -> np.ndarray:
    _check_eperp(e_perp)
    e = np.atleast_1d(np.asarray(e_values, dtype=float))
    big = np.maximum(e, e_perp)
    out = np.zeros_like(e)
    ok = (e > 0) & (e <= 1)
    out[ok] = 2 * e[ok] * np.arccosh(1 / big[ok]) / math.sqrt(1 - e_perp**2)
    return out


def rank3_cdf(e_values, e_perp: float) -> np.ndarray:
    """Closed-form integral of the rank-3 density (integration by parts)."""
    _check_eperp(e_perp)
    e = np.clip(np.atleast_1d(np.asarray(e_values, dtype=float)), 0, 1)
    s = math.sqrt(1 - e_perp**2)
    out = np.zeros_like(e)
    low = (e > 0) & (e <= e_perp)
    out[low] = e[low] ** 2 * math.acosh(1 / e_perp) / s if e_perp > 0 else 0.0
    high = (e > e_perp) & (e > 0)
    eh = e[high]
    out[high] = (eh**2 * np.arccosh(1 / eh) + s - np.sqrt(1 - eh**2)) / s
    return out


def pdf_rho3(e_perp: float, n_bins: int = DEFAULT_BINS) -> PdfCurve:
    """Unit-mass distribution for the uniform mixture over a three-dimensional subspace."""
    grid = make_grid(n_bins)
    dens = rank3_density(grid, e_perp)
    cum = rank3_cdf(grid, e_perp)
    return _finish(grid, dens, cum, 1.0, [], {"e_perp": e_perp})


def assemble_pdf(inv: EntanglementInvariants, n_bins: int = DEFAULT_BINS,
                 nodes: int = DEFAULT_NODES) -> PdfCurve:
    """Weighted sum of the rank-1, rank-2 and rank-3 distributions."""
    if inv.w4 >= 1e-6:
        raise ValidationError(
            f"four-dimensional component unsupported (w4 = {inv.w4:.3e})"
        )
    grid = make_grid(n_bins)
    deltas = [(inv.e1, inv.w1)]
    density = np.zeros_like(grid)
    cumulative = np.zeros_like(grid)
    parts = {}

    if inv.w2 > 0:
        c2 = pdf_rho2(inv.x, inv.y, inv.z, n_bins, nodes)
        deltas += [(loc, inv.w2 * w) for loc, w in c2.deltas]
        density += inv.w2 * c2.density
        cumulative += inv.w2 * c2.cumulative
        parts["rho2"] = c2
    if inv.w3 > 0:
        c3 = pdf_rho3(inv.e_perp, n_bins)
        density += inv.w3 * c3.density
        cumulative += inv.w3 * c3.cumulative
        parts["rho3"] = c3
    defect = max((c.defect for c in parts.values()), default=0.0)
    return PdfCurve(deltas, grid, density, cumulative, defect, {"parts": parts})


def cdf(pdf: PdfCurve) -> CdfCurve:
    """Cumulative distribution: continuous mass plus steps at each point mass."""
    grid = pdf.grid
    if pdf.cumulative is not None:
        values = np.array(pdf.cumulative, dtype=float)
    else:
        steps = 0.5 * (pdf.density[1:] + pdf.density[:-1]) * np.diff(grid)
        values = np.concatenate([[0.0], np.cumsum(steps)])
    for loc, w in pdf.deltas:
        values = values + w * (grid >= loc - 1e-12)
    # quadrature round-off can make flat stretches wobble at the 1e-15 level
    values = np.maximum.accumulate(values)
    return CdfCurve(grid, values)


def cdf_function(inv: EntanglementInvariants, nodes: int = DEFAULT_NODES):
    """Callable exact CDF of the assembled distribution, for off-grid evaluation."""
    def f(e):
        e = np.atleast_1d(np.asarray(e, dtype=float))
        out = np.zeros_like(e)
        out += inv.w1 * (e >= inv.e1)
        if inv.w2 > 0:
            out += inv.w2 * rank2_cdf(e, inv.x, inv.y, inv.z, nodes)
        if inv.w3 > 0:
            out += inv.w3 * rank3_cdf(e, inv.e_perp)
        return out
    return f
