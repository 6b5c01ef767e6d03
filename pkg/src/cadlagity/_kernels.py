"""Hot loops: piece-triple maxima and sums, window moduli, grid oracles.

Each kernel is written twice, as a numba ``@njit`` loop nest (``*_nb``) and
as a vectorized numpy routine (``*_np``) with the same signature and result.
The module-level names dispatch to one family, chosen at import time:
numba unless it is missing or ``CADLAGITY_NO_NUMBA`` is set to a true value.

Conventions: ``D`` is the piece distance matrix (m x m, m = J + 1 pieces),
``T`` the knot vector of length m + 1 with ``T[0] = 0`` and ``T[m] = 1``.
"""
import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_FLAG = os.environ.get("CADLAGITY_NO_NUMBA", "").strip().lower()
USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")
BACKEND = "numba" if USE_NUMBA else "numpy"


def _njit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# ---------------------------------------------------------------------------
# sup-type seminorms over piece triples a < b < c
# ---------------------------------------------------------------------------

@_njit
def holder_max_nb(D, T, mu, cap):
    m = D.shape[0]
    best = 0.0
    for a in range(m - 2):
        for c in range(a + 2, m):
            span = T[c] - T[a + 1]
            if span >= cap:
                break
            top = 0.0
            for b in range(a + 1, c):
                v = min(D[a, b], D[b, c])
                if v > top:
                    top = v
            if top > 0.0:
                r = top / span ** mu
                if r > best:
                    best = r
    return best


def holder_max_np(D, T, mu, cap):
    m = D.shape[0]
    best = 0.0
    for a in range(m - 2):
        # rows: b = a+1 .., cols: c = a+1 ..; keep c > b
        inner = np.triu(np.minimum(D[a, a + 1:, None], D[a + 1:, a + 1:]), 1)
        top = inner.max(axis=0)[1:]
        span = T[a + 2:m] - T[a + 1]
        ok = (span < cap) & (top > 0.0)
        if ok.any():
            best = max(best, float(np.max(top[ok] / span[ok] ** mu)))
    return best


@_njit
def hat_max_nb(D, T, mu):
    m = D.shape[0]
    best = 0.0
    for a in range(m - 2):
        a0 = T[a]
        a1 = T[a + 1]
        for c in range(a + 2, m):
            c0 = T[c]
            c1 = T[c + 1]
            for b in range(a + 1, c):
                v = min(D[a, b], D[b, c])
                if v <= 0.0:
                    continue
                b0 = T[b]
                b1 = T[b + 1]
                if not (a0 + c0 < 2.0 * b1 and 2.0 * b0 < a1 + c1):
                    continue
                span = max(c0 - a1, 2.0 * (b0 - a1), 2.0 * (c0 - b1))
                r = v / span ** mu
                if r > best:
                    best = r
    return best


def hat_max_np(D, T, mu):
    m = D.shape[0]
    best = 0.0
    for a in range(m - 2):
        b = np.arange(a + 1, m)[:, None]
        c = np.arange(a + 1, m)[None, :]
        v = np.minimum(D[a, a + 1:, None], D[a + 1:, a + 1:])
        a0, a1 = T[a], T[a + 1]
        b0, b1 = T[b], T[b + 1]
        c0, c1 = T[c], T[c + 1]
        ok = (c > b) & (v > 0.0) & (a0 + c0 < 2.0 * b1) & (2.0 * b0 < a1 + c1)
        if not ok.any():
            continue
        span = np.maximum(np.maximum(c0 - a1, 2.0 * (b0 - a1)), 2.0 * (c0 - b1))
        best = max(best, float(np.max(v[ok] / span[ok] ** mu)))
    return best


# ---------------------------------------------------------------------------
# triple integral over pieces with the (u - s)^-(mu p + 3) kernel
# ---------------------------------------------------------------------------

@_njit
def _g(w, e, norm):
    return w ** (-e) / norm


@_njit
def triple_sum_nb(D, T, mu, p, product, a_lo, a_hi):
    """Kahan-summed sum over a in [a_lo, a_hi), a < b < c.

    product=False: weight min(D_ab, D_bc)^p; product=True: D_ab^(p/2) D_bc^(p/2).
    """
    m = D.shape[0]
    e = mu * p + 1.0
    norm = e * (e + 1.0)
    # x -> x^q is increasing, so min(x, y)^p = min(x^p, y^p)
    W = D ** (0.5 * p) if product else D ** p
    s = 0.0
    comp = 0.0
    for a in range(a_lo, min(a_hi, m - 2)):
        for c in range(a + 2, m):
            inner = 0.0
            for b in range(a + 1, c):
                if product:
                    w = W[a, b] * W[b, c]
                else:
                    w = min(W[a, b], W[b, c])
                inner += w * (T[b + 1] - T[b])
            if inner == 0.0:
                continue
            k = (_g(T[c + 1] - T[a], e, norm) - _g(T[c + 1] - T[a + 1], e, norm)
                 - _g(T[c] - T[a], e, norm) + _g(T[c] - T[a + 1], e, norm))
            y = inner * k - comp
            t = s + y
            comp = (t - s) - y
            s = t
    return s


def triple_sum_np(D, T, mu, p, product, a_lo, a_hi):
    m = D.shape[0]
    e = mu * p + 1.0
    norm = e * (e + 1.0)

    def g(w):
        return w ** (-e) / norm

    lengths = np.diff(T)
    parts = []
    for a in range(a_lo, min(a_hi, m - 2)):
        c = np.arange(a + 2, m)
        k = g(T[c + 1] - T[a]) - g(T[c + 1] - T[a + 1]) - g(T[c] - T[a]) + g(T[c] - T[a + 1])
        dab = D[a, a + 1:, None]
        dbc = D[a + 1:, a + 2:]
        if product:
            w = dab ** (0.5 * p) * dbc ** (0.5 * p)
        else:
            w = np.minimum(dab, dbc) ** p
        # rows b = a+1 .., cols c = a+2 ..; keep b < c
        w = np.triu(w, 0)
        terms = w * lengths[a + 1:, None] * k[None, :]
        parts.append(math.fsum(terms[terms != 0.0]))
    return math.fsum(parts)


# ---------------------------------------------------------------------------
# window moduli on piece index ranges [lo, hi]
# ---------------------------------------------------------------------------

@_njit
def window_delta_nb(D, lo, hi):
    best = 0.0
    for b in range(lo + 1, hi):
        left = 0.0
        for a in range(lo, b):
            if D[a, b] > left:
                left = D[a, b]
        right = 0.0
        for c in range(b + 1, hi + 1):
            if D[b, c] > right:
                right = D[b, c]
        v = min(left, right)
        if v > best:
            best = v
    return best


def window_delta_np(D, lo, hi):
    if hi - lo < 2:
        return 0.0
    sub = np.triu(D[lo:hi + 1, lo:hi + 1], 1)
    left = sub.max(axis=0)   # max over a < b
    right = sub.max(axis=1)  # max over c > b
    return float(np.max(np.minimum(left, right)))


@_njit
def window_n_nb(D, lo, hi):
    if hi <= lo:
        return 0.0
    n = hi - lo + 1
    pre = np.empty(n)
    run = 0.0
    for k in range(n):
        if D[lo, lo + k] > run:
            run = D[lo, lo + k]
        pre[k] = run
    # cut after piece lo + k: left pieces lo..lo+k, right pieces lo+k+1..hi
    best = pre[n - 1]
    suf = 0.0
    for k in range(n - 2, -1, -1):
        if D[lo + k + 1, hi] > suf:
            suf = D[lo + k + 1, hi]
        v = max(pre[k], suf)
        if v < best:
            best = v
    return best


def window_n_np(D, lo, hi):
    if hi <= lo:
        return 0.0
    pre = np.maximum.accumulate(D[lo, lo:hi + 1])
    col = D[lo + 1:hi + 1, hi]
    suf = np.maximum.accumulate(col[::-1])[::-1]
    cuts = np.maximum(pre[:-1], suf)
    return float(min(cuts.min(), pre[-1]))


@_njit
def range_n_table_nb(D):
    """N over every piece index range: out[lo, hi] (zero when hi <= lo + 1)."""
    m = D.shape[0]
    out = np.zeros((m, m))
    pre = np.empty(m)
    for lo in range(m):
        run = 0.0
        for k in range(lo, m):
            if D[lo, k] > run:
                run = D[lo, k]
            pre[k] = run
        for hi in range(lo + 2, m):
            best = pre[hi]
            suf = 0.0
            for k in range(hi - 1, lo - 1, -1):
                if D[k + 1, hi] > suf:
                    suf = D[k + 1, hi]
                v = max(pre[k], suf)
                if v < best:
                    best = v
            out[lo, hi] = best
    return out


def range_n_table_np(D):
    m = D.shape[0]
    out = np.zeros((m, m))
    # R[k, hi] = max_{k < j <= hi} D[j, hi]
    E = np.triu(D)  # E[j, hi] = D[j, hi] for j <= hi
    rev = np.maximum.accumulate(E[::-1], axis=0)[::-1]
    R = np.zeros_like(D)
    R[:-1] = rev[1:]
    for lo in range(m - 2):
        pre = np.maximum.accumulate(D[lo, lo:])          # pre[k - lo]
        cand = np.maximum(pre[:, None], R[lo:, lo:])      # rows k, cols hi
        ks = np.arange(lo, m)[:, None]
        his = np.arange(lo, m)[None, :]
        cand = np.where(ks < his, cand, np.inf)
        best = np.minimum(cand.min(axis=0), pre)
        out[lo, lo + 2:] = best[2:]
    return out


# ---------------------------------------------------------------------------
# brute-force oracles on sample sets
# ---------------------------------------------------------------------------

@_njit
def sample_triple_sup_nb(DS, ts, mu):
    n = ts.shape[0]
    best = 0.0
    for i in range(n):
        # every triple value starting at i is at most the row maximum, and the
        # span only grows with k, so the k loop can stop once that bound loses
        row_max = 0.0
        for j in range(i + 1, n):
            if DS[i, j] > row_max:
                row_max = DS[i, j]
        for k in range(i + 2, n):
            span = ts[k] - ts[i]
            if span <= 0.0:
                continue
            if row_max <= best * span ** mu:
                break
            top = 0.0
            for j in range(i + 1, k):
                v = min(DS[i, j], DS[j, k])
                if v > top:
                    top = v
            if top > 0.0:
                r = top / span ** mu
                if r > best:
                    best = r
    return best


def sample_triple_sup_np(DS, ts, mu):
    n = ts.shape[0]
    best = 0.0
    for i in range(n - 2):
        inner = np.triu(np.minimum(DS[i, i + 1:, None], DS[i + 1:, i + 1:]), 1)
        top = inner.max(axis=0)
        span = ts[i + 1:] - ts[i]
        ok = (span > 0.0) & (top > 0.0)
        if ok.any():
            best = max(best, float(np.max(top[ok] / span[ok] ** mu)))
    return best


@_njit
def cell_triple_sum_nb(DC, h, KQ, p):
    """sum_{i<j<k} min(DC_ij, DC_jk)^p h_j KQ_ik, Kahan-summed."""
    n = h.shape[0]
    W = DC ** p
    s = 0.0
    comp = 0.0
    for i in range(n):
        for k in range(i + 2, n):
            inner = 0.0
            for j in range(i + 1, k):
                inner += min(W[i, j], W[j, k]) * h[j]
            if inner == 0.0:
                continue
            y = inner * KQ[i, k] - comp
            t = s + y
            comp = (t - s) - y
            s = t
    return s


def cell_triple_sum_np(DC, h, KQ, p):
    n = h.shape[0]
    parts = []
    for i in range(n - 2):
        w = np.triu(np.minimum(DC[i, i + 1:, None], DC[i + 1:, i + 1:]), 1) ** p
        inner = (w * h[i + 1:, None]).sum(axis=0)
        terms = inner * KQ[i, i + 1:]
        parts.append(math.fsum(terms[terms != 0.0]))
    return math.fsum(parts)


@_njit
def sample_eta_sup_nb(DS, ts, at_mask, mu):
    """max over sample windows [i, k] of N(window) / (ts[k] - ts[i])^mu.

    Cuts are placed in front of ``at`` samples only, plus the trivial cut at
    the window end.
    """
    n = ts.shape[0]
    best = 0.0
    pre = np.empty(n)
    for i in range(n):
        run = 0.0
        for j in range(i, n):
            if DS[i, j] > run:
                run = DS[i, j]
            pre[j] = run
        for k in range(i + 1, n):
            span = ts[k] - ts[i]
            if span <= 0.0:
                continue
            nval = pre[k]
            suf = 0.0
            for j in range(k, i, -1):
                if DS[j, k] > suf:
                    suf = DS[j, k]
                if at_mask[j]:
                    v = max(pre[j - 1], suf)
                    if v < nval:
                        nval = v
            if nval > 0.0:
                r = nval / span ** mu
                if r > best:
                    best = r
    return best


def sample_eta_sup_np(DS, ts, at_mask, mu):
    n = ts.shape[0]
    best = 0.0
    E = np.triu(DS)
    # suf[j, k] = max_{j <= l <= k} DS[l, k]
    suf = np.maximum.accumulate(E[::-1], axis=0)[::-1]
    for i in range(n - 1):
        pre = np.maximum.accumulate(DS[i, i:])       # pre[j - i]
        js = np.arange(i + 1, n)[:, None]
        ks = np.arange(i + 1, n)[None, :]
        cand = np.maximum(pre[:-1][:, None], suf[i + 1:, i + 1:])
        valid = (js <= ks) & at_mask[i + 1:][:, None]
        cand = np.where(valid, cand, np.inf)
        nval = np.minimum(cand.min(axis=0), pre[1:])
        span = ts[i + 1:] - ts[i]
        ok = (span > 0.0) & (nval > 0.0)
        if ok.any():
            best = max(best, float(np.max(nval[ok] / span[ok] ** mu)))
    return best


_FAMILIES = {
    "numba": dict(
        holder_max=holder_max_nb, hat_max=hat_max_nb, triple_sum=triple_sum_nb,
        window_delta=window_delta_nb, window_n=window_n_nb, range_n_table=range_n_table_nb,
        sample_triple_sup=sample_triple_sup_nb, cell_triple_sum=cell_triple_sum_nb,
        sample_eta_sup=sample_eta_sup_nb,
    ),
    "numpy": dict(
        holder_max=holder_max_np, hat_max=hat_max_np, triple_sum=triple_sum_np,
        window_delta=window_delta_np, window_n=window_n_np, range_n_table=range_n_table_np,
        sample_triple_sup=sample_triple_sup_np, cell_triple_sum=cell_triple_sum_np,
        sample_eta_sup=sample_eta_sup_np,
    ),
}


def family(name):
    """Kernel table for ``"numba"`` or ``"numpy"``."""
    return _FAMILIES[name]


_active = _FAMILIES[BACKEND]
holder_max = _active["holder_max"]
hat_max = _active["hat_max"]
triple_sum = _active["triple_sum"]
window_delta = _active["window_delta"]
window_n = _active["window_n"]
range_n_table = _active["range_n_table"]
sample_triple_sup = _active["sample_triple_sup"]
cell_triple_sum = _active["cell_triple_sum"]
sample_eta_sup = _active["sample_eta_sup"]
