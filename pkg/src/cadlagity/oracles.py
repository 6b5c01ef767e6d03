"""Brute-force grid references for the exact functionals.

These sample the path on a fine time grid and take maxima / sums over the
samples directly, without any of the piece-level reasoning used by the exact
code.  They are slow (cubic in the number of samples) and exist to validate
the exact algorithms.

Sided sampling adds the left limit ``f(tau-)`` next to every breakpoint.
Without it a grid sup misses suprema that are only approached, such as the
Hoelder quotient of a path whose two jumps sit at the ends of an open piece.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .moduli import as_window
from .paths import CadlagStep, as_params, check_mu, distance_matrix


@dataclass(frozen=True)
class GridSpec:
    G: int = 512
    sided: bool = True
    # Gauss-Legendre points per cell side for the integral oracle; 1 is the midpoint rule
    order: int = 3

    def __post_init__(self):
        if int(self.G) != self.G or self.G < 2:
            raise ValueError(f"grid resolution must be an integer >= 2, got {self.G}")
        if int(self.order) != self.order or self.order < 1:
            raise ValueError(f"quadrature order must be a positive integer, got {self.order}")
        object.__setattr__(self, "G", int(self.G))
        object.__setattr__(self, "order", int(self.order))


def as_grid(g) -> GridSpec:
    if isinstance(g, GridSpec):
        return g
    return GridSpec(int(g))


def _samples(f: CadlagStep, g: GridSpec, lo=None, hi=None):
    """Sorted sample times with their sides, clipped to keys in [lo, hi].

    Returns (times, is_at, values).
    """
    keys = {(k / g.G, 1) for k in range(g.G + 1)}
    for b in f.breakpoints:
        keys.add((float(b), 1))
        if g.sided:
            keys.add((float(b), 0))
    if lo is not None:
        keys = {k for k in keys if lo < k < hi}
        keys.update((lo, hi))
    keys = sorted(keys)
    ts = np.array([k[0] for k in keys])
    at = np.array([k[1] == 1 for k in keys])
    bp = f.breakpoints
    idx = np.where(
        at, np.searchsorted(bp, ts, side="right"), np.searchsorted(bp, ts, side="left")
    )
    return ts, at, f.values[idx]


def grid_sup_oracle(f: CadlagStep, mu: float, g=GridSpec(2048)) -> float:
    """Max of ``Delta / (u - s)^mu`` over ordered sample triples."""
    mu = check_mu(mu)
    g = as_grid(g)
    if f.n_pieces < 3:
        return 0.0
    ts, _, vals = _samples(f, g)
    return float(K.sample_triple_sup(distance_matrix(vals), ts, mu))


def _cell_nodes(f: CadlagStep, G: int) -> np.ndarray:
    # uniform nodes too close to a breakpoint are dropped so that no cell is tiny
    uni = np.linspace(0.0, 1.0, G + 1)
    bp = f.breakpoints
    if bp.size:
        near = np.min(np.abs(uni[:, None] - bp[None, :]), axis=1) < 0.25 / G
        near[0] = near[-1] = False
        uni = uni[~near]
    return np.unique(np.concatenate((uni, bp)))


def _pair_kernel(nodes: np.ndarray, e: float, order: int) -> np.ndarray:
    """``KQ[i, k]`` ~ integral of ``(u - s)^-e`` over cell i x cell k, for k >= i + 2."""
    xi, wi = np.polynomial.legendre.leggauss(order)
    a = nodes[:-1]
    h = np.diff(nodes)
    pts = a[:, None] + 0.5 * h[:, None] * (xi[None, :] + 1.0)
    wts = 0.5 * h[:, None] * wi[None, :]
    n = h.size
    KQ = np.zeros((n, n))
    far = np.triu(np.ones((n, n), dtype=bool), 2)
    for qa in range(order):
        for qb in range(order):
            diff = pts[None, :, qb] - pts[:, qa, None]
            safe = np.where(far, diff, 1.0)
            KQ += np.where(far, wts[:, qa, None] * wts[None, :, qb] * safe ** -e, 0.0)
    return KQ


def grid_integral_oracle(f: CadlagStep, params, g=GridSpec(512)) -> float:
    """Cell sum approximating ``[[f]]_{mu,p}^p``.

    Cells come from the uniform grid of resolution G refined by the
    breakpoints, so the path is constant on each cell and the integrand of a
    cell triple ``i < j < k`` factors into ``min(d_ij, d_jk)^p * |cell j|``
    times the double integral of ``(u - s)^-(mu p + 3)`` over cells i and k,
    which is evaluated by tensor Gauss-Legendre quadrature.  Triples with
    repeated cells contribute nothing: there ``Delta`` vanishes.
    """
    params = as_params(params)
    g = as_grid(g)
    if f.n_pieces < 3:
        return 0.0
    nodes = _cell_nodes(f, g.G)
    h = np.diff(nodes)
    mids = 0.5 * (nodes[:-1] + nodes[1:])
    vals = f.values[np.searchsorted(f.breakpoints, mids, side="right")]
    KQ = _pair_kernel(nodes, params.mu * params.p + 3.0, g.order)
    return float(K.cell_triple_sum(distance_matrix(vals), h, KQ, params.p))


def _window_n_samples(DS: np.ndarray, at: np.ndarray) -> float:
    n = DS.shape[0]
    pre = np.maximum.accumulate(DS[0])
    suf = np.maximum.accumulate(DS[::-1, -1])[::-1]
    # cut in front of sample j (an `at` sample) or after everything
    best = pre[-1]
    for j in range(1, n):
        if at[j]:
            best = min(best, max(pre[j - 1], suf[j]))
    return float(best)


def n_grid_oracle(f: CadlagStep, w, g=GridSpec(2048)) -> float:
    """Window modulus N from samples: min over sampled cuts of the two one-sided maxima."""
    w = as_window(w)
    g = as_grid(g)
    ts, at, vals = _samples(f, g, w.sigma.key, w.tau.key)
    return _window_n_samples(distance_matrix(vals), at)


def eta_grid_oracle(f: CadlagStep, mu: float, g=GridSpec(512)) -> float:
    """``sup_eta N(f; eta) / eta^mu`` from all sample windows."""
    mu = check_mu(mu)
    g = as_grid(g)
    if f.n_pieces < 3:
        return 0.0
    ts, at, vals = _samples(f, g)
    return float(K.sample_eta_sup(distance_matrix(vals), ts, at, mu))


def hat_grid_oracle(f: CadlagStep, mu: float, g=GridSpec(1024)) -> float:
    """Midpoint seminorm from real sample pairs ``s < u`` with ``f((s + u) / 2)``.

    Only actual points are used (no left limits), so the value is a lower
    bound; with ``sided`` each breakpoint also contributes a point just
    below it.
    """
    mu = check_mu(mu)
    g = as_grid(g)
    if f.n_pieces < 3:
        return 0.0
    pts = [np.linspace(0.0, 1.0, g.G + 1), f.breakpoints]
    if g.sided:
        pts.append(f.breakpoints - 1e-9)
    ts = np.unique(np.concatenate(pts))
    bp = f.breakpoints
    vals = f.values[np.searchsorted(bp, ts, side="right")]
    best = 0.0
    for i in range(ts.size - 1):
        u = ts[i + 1:]
        mid = f.values[np.searchsorted(bp, 0.5 * (ts[i] + u), side="right")]
        d1 = np.sqrt(np.sum((vals[i] - mid) ** 2, axis=1))
        d2 = np.sqrt(np.sum((mid - vals[i + 1:]) ** 2, axis=1))
        r = np.minimum(d1, d2) / (u - ts[i]) ** mu
        best = max(best, float(r.max()))
    return best


__all__ = [
    "GridSpec",
    "grid_sup_oracle",
    "grid_integral_oracle",
    "n_grid_oracle",
    "eta_grid_oracle",
    "hat_grid_oracle",
]
