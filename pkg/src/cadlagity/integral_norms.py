"""Closed-form Besov-type integral functionals of step paths.

On a piece triple ``a < b < c`` the integrand of the triple functional is
``Delta_abc^p / (u - s)^(mu p + 3)``, free of ``t``.  The ``t`` integral
contributes the middle piece length and the ``(s, u)`` integral over the
rectangle ``[s1, s2) x [u1, u2)`` is an inclusion-exclusion of the second
antiderivative ``G(w) = w^-(mu p + 1) / ((mu p + 1)(mu p + 2))``:

    G(u2 - s1) - G(u2 - s2) - G(u1 - s1) + G(u1 - s2).

Since ``u1 - s2 >= |P_b| > 0`` no singular value is ever evaluated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .paths import CadlagStep, FunctionalParams, as_params, check_p, distance_matrix


@dataclass(frozen=True)
class BesovReport:
    triple: float
    left: float
    right: float
    lp: float
    sup: float
    params: FunctionalParams

    def as_dict(self) -> dict:
        return {
            "triple": self.triple,
            "left": self.left,
            "right": self.right,
            "lp": self.lp,
            "sup": self.sup,
        }


def triple_besov_power(f: CadlagStep, params) -> float:
    """``[[f]]_{mu,p}^p`` (the integral itself)."""
    params = as_params(params)
    if f.n_pieces < 3:
        return 0.0
    D = distance_matrix(f.values)
    return float(K.triple_sum(D, f.knots, params.mu, params.p, False, 0, f.n_pieces))


def triple_besov(f: CadlagStep, params) -> float:
    params = as_params(params)
    return triple_besov_power(f, params) ** (1.0 / params.p)


def endpoint_besov_power(f: CadlagStep, params) -> tuple[float, float]:
    """``(||f]]^p, [[f||^p)``, integrals against ``t^-(mu p+1)`` and ``(1-t)^-(mu p+1)``."""
    params = as_params(params)
    if f.n_pieces < 2:
        return 0.0, 0.0
    mp = params.mu * params.p
    T = f.knots
    V = f.values
    # first piece (left) and last piece (right) have zero distance: no singular term
    d0 = np.sum((V[1:] - V[0]) ** 2, axis=1) ** (0.5 * params.p)
    left_int = (T[1:-1] ** -mp - T[2:] ** -mp) / mp
    d1 = np.sum((V[:-1] - V[-1]) ** 2, axis=1) ** (0.5 * params.p)
    right_int = ((1.0 - T[1:-1]) ** -mp - (1.0 - T[:-2]) ** -mp) / mp
    return math.fsum(d0 * left_int), math.fsum(d1 * right_int)


def endpoint_besov(f: CadlagStep, params) -> tuple[float, float]:
    params = as_params(params)
    left, right = endpoint_besov_power(f, params)
    return left ** (1.0 / params.p), right ** (1.0 / params.p)


def lp_sup_norms(f: CadlagStep, p: float) -> tuple[float, float]:
    """``(|f|_{L_p[0,1]}, sup_t |f(t)|)`` with Euclidean norms of the values."""
    p = check_p(p)
    norms = np.sqrt(np.sum(f.values ** 2, axis=1))
    lp = math.fsum(norms ** p * f.piece_lengths) ** (1.0 / p)
    return lp, float(norms.max())


def remark22_product_bound(f: CadlagStep, params) -> float:
    """Triple integral with ``d(f(s),f(t))^(p/2) d(f(t),f(u))^(p/2)`` in place of ``Delta^p``.

    Returned on the p-th power scale, to compare with :func:`triple_besov_power`.
    """
    params = as_params(params)
    if f.n_pieces < 3:
        return 0.0
    D = distance_matrix(f.values)
    return float(K.triple_sum(D, f.knots, params.mu, params.p, True, 0, f.n_pieces))


def besov_report(f: CadlagStep, params) -> BesovReport:
    params = as_params(params)
    left, right = endpoint_besov(f, params)
    lp, sup = lp_sup_norms(f, params.p)
    return BesovReport(
        triple=triple_besov(f, params),
        left=left,
        right=right,
        lp=lp,
        sup=sup,
        params=params,
    )
