"""Exact sup-type functionals of step paths.

All of them reduce to maxima over piece indices.  For pieces ``a < b < c``
the triple value ``min(d(v_a, v_b), d(v_b, v_c))`` is constant while
``s``, ``t``, ``u`` move inside their pieces, so a supremum of
``value / (u - s)^mu`` is reached by pushing ``s`` to the right end of its
piece (a left limit) and ``u`` to the left end of its piece, giving the
infimum span ``knots[c] - knots[a + 1]``.

The N modulus of a window depends only on the range of pieces the window
meets.  Between cut points ``theta`` the objective is constant, so only the
cuts at piece boundaries need to be scanned.  A range ``lo..hi`` is met by
some window of length at most ``eta`` iff ``knots[hi] - knots[lo + 1] < eta``
(strict: the left end can only approach ``knots[lo + 1]`` from below).  That
turns ``N(f; eta)`` into a maximum over ranges, and ``sup_eta N(f; eta)/eta^mu``
into a maximum of ``N(range) / gap(range)^mu``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import EmptyWindow, NonpositiveEta, UnorderedTriple
from .paths import (
    CadlagStep,
    FunctionalParams,
    SidedTime,
    as_params,
    as_sided,
    check_mu,
    distance_matrix,
    dist,
)


@dataclass(frozen=True)
class Window:
    """Time window ``(sigma, tau)``; endpoints may be left limits."""

    sigma: SidedTime
    tau: SidedTime

    def __post_init__(self):
        s, t = as_sided(self.sigma), as_sided(self.tau)
        object.__setattr__(self, "sigma", s)
        object.__setattr__(self, "tau", t)
        if not s.t < t.t:
            raise EmptyWindow(f"window needs sigma < tau, got ({s.t}, {t.t})")

    @property
    def length(self) -> float:
        return self.tau.t - self.sigma.t

    def contains(self, other: "Window") -> bool:
        return self.sigma.key <= other.sigma.key and other.tau.key <= self.tau.key


def as_window(w) -> Window:
    if isinstance(w, Window):
        return w
    sigma, tau = w
    return Window(sigma, tau)


@dataclass(frozen=True)
class SeminormReport:
    holder: float
    left_end: float
    right_end: float
    tilde: float
    hat: float
    params: FunctionalParams

    def as_dict(self) -> dict:
        return {
            "holder": self.holder,
            "left_end": self.left_end,
            "right_end": self.right_end,
            "tilde": self.tilde,
            "hat": self.hat,
        }


def _dmat(f: CadlagStep) -> np.ndarray:
    return distance_matrix(f.values)


def _window_range(f: CadlagStep, w: Window) -> tuple[int, int]:
    return f.piece_index(w.sigma), f.piece_index(w.tau)


def delta_triple(f: CadlagStep, s, t, u) -> float:
    """``min(d(f(s), f(t)), d(f(t), f(u)))`` for ordered sided times."""
    s, t, u = as_sided(s), as_sided(t), as_sided(u)
    if not (s.key <= t.key <= u.key):
        raise UnorderedTriple(f"need s <= t <= u, got {s}, {t}, {u}")
    ft = f(t)
    return min(dist(f(s), ft), dist(ft, f(u)))


def delta_window(f: CadlagStep, w) -> float:
    """Modulus of cadlaguity: sup of the triple value over the window."""
    lo, hi = _window_range(f, as_window(w))
    if hi - lo < 2:
        return 0.0
    return float(K.window_delta(_dmat(f), lo, hi))


def n_window(f: CadlagStep, w) -> float:
    """Fernique's modulus: best cut of the window into two near-constant halves."""
    lo, hi = _window_range(f, as_window(w))
    if hi - lo < 2:
        return 0.0
    return float(K.window_n(_dmat(f), lo, hi))


def n_range_table(f: CadlagStep) -> np.ndarray:
    """``table[lo, hi]`` = N of any window meeting exactly pieces lo..hi."""
    return K.range_n_table(_dmat(f))


def _range_gaps(f: CadlagStep) -> np.ndarray:
    """``gaps[lo, hi] = knots[hi] - knots[lo + 1]``: infimum window length."""
    T = f.knots
    m = f.n_pieces
    lo = np.arange(m)[:, None]
    hi = np.arange(m)[None, :]
    return np.where(hi > lo, T[np.minimum(hi, m)] - T[lo + 1], np.inf)


def n_eta(f: CadlagStep, eta: float) -> float:
    """``N(f; eta)``: sup of the window modulus over windows of length <= eta."""
    eta = float(eta)
    if not eta > 0:
        raise NonpositiveEta(f"eta must be positive, got {eta}")
    if f.n_pieces < 3:
        return 0.0
    table = n_range_table(f)
    ok = _range_gaps(f) < eta
    return float(table[ok].max()) if ok.any() else 0.0


def holder_seminorm(f: CadlagStep, mu: float, max_span: float = np.inf) -> float:
    """Hoelder-cadlag seminorm ``sup Delta(f; s, t, u) / (u - s)^mu``.

    ``max_span`` restricts to triples with ``u - s <= max_span``; a piece
    triple qualifies when its infimum span is strictly below the cap.
    """
    mu = check_mu(mu)
    if f.n_pieces < 3:
        return 0.0
    return float(K.holder_max(_dmat(f), f.knots, mu, float(max_span)))


def endpoint_seminorms(f: CadlagStep, mu: float) -> tuple[float, float]:
    """``(|f]_mu, [f|_mu)``: Hoelder quotients against f(0) and f(1)."""
    mu = check_mu(mu)
    if f.n_pieces < 2:
        return 0.0, 0.0
    T = f.knots
    V = f.values
    d0 = np.sqrt(np.sum((V[1:] - V[0]) ** 2, axis=1))
    d1 = np.sqrt(np.sum((V[:-1] - V[-1]) ** 2, axis=1))
    # attained at t = knots[k] for pieces k >= 1
    left = float(np.max(d0 / T[1:-1] ** mu))
    # approached as t -> knots[k + 1]- for pieces k < J
    right = float(np.max(d1 / (1.0 - T[1:-1]) ** mu))
    return left, right


def tilde_seminorm(f: CadlagStep, mu: float) -> float:
    """``sup_eta N(f; eta) / eta^mu``, exact over piece ranges."""
    mu = check_mu(mu)
    if f.n_pieces < 3:
        return 0.0
    table = n_range_table(f)
    gaps = _range_gaps(f)
    m = f.n_pieces
    lo, hi = np.triu_indices(m, 2)
    vals = table[lo, hi]
    ok = vals > 0.0
    if not ok.any():
        return 0.0
    return float(np.max(vals[ok] / gaps[lo, hi][ok] ** mu))


def hat_seminorm(f: CadlagStep, mu: float) -> float:
    """Midpoint variant: ``sup Delta(f; s, (s+u)/2, u) / (u - s)^mu`` over 0 < s < u <= 1.

    For pieces a < b < c the feasible (s, u) set is a rectangle cut by a
    strip on ``s + u``; it is nonempty iff the open versions intersect, and
    the smallest span on it is ``max(C0 - A1, 2 (B0 - A1), 2 (C0 - B1))``.
    """
    mu = check_mu(mu)
    if f.n_pieces < 3:
        return 0.0
    return float(K.hat_max(_dmat(f), f.knots, mu))


def seminorm_report(f: CadlagStep, params) -> SeminormReport:
    params = as_params(params)
    mu = params.mu
    left, right = endpoint_seminorms(f, mu)
    return SeminormReport(
        holder=holder_seminorm(f, mu),
        left_end=left,
        right_end=right,
        tilde=tilde_seminorm(f, mu),
        hat=hat_seminorm(f, mu),
        params=params,
    )
