"""Audits of the inequalities relating the moduli, seminorms and integral functionals.

Every check returns :class:`AuditReport` objects holding both sides of one
inequality ``lhs <= rhs`` computed with the exact routines.  A report passes
when ``lhs <= rhs * (1 + 1e-9) + 1e-12``.

The constants of the main estimate and of its intermediate steps are not
given numerically in the source argument; explicit admissible values are
derived in :func:`derive_constants` and shipped, frozen, in
``data/derived_constants.json``.

Derivation of the constants (``H = [f]_mu``, ``L = ||f]]``, ``R = [[f||``,
``T = [[f]]``, all functionals on their natural scale, not p-th powers):

* Start bound.  For ``t <= 3/4`` and ``0 < delta < 1`` put ``eps = delta t / 4``.
  For ``t' < t < t''`` within ``eps`` of ``t``,
  ``d(f(0), f(t)) <= Delta(f; t', t, t'') + d(f(0), f(t')) + d(f(0), f(t''))``;
  averaging over ``t'`` and ``t''`` and applying Hoelder's inequality with
  exponent ``mu + 1/p`` gives
  ``d(f(0), f(t)) <= t^mu (2^-mu delta^mu H + K delta^(-1/p) L)`` with
  ``K = 4^(1/p) (1 + (5/4)^(mu + 1/p))``, hence the constant ``max(2^-mu, K)``.
  The mirrored bound holds at the right end for ``t >= 1/4``.
* Endpoint seminorms.  For ``t > 3/4`` the distance ``d(f(0), f(t))`` goes
  through ``f(1)`` and ``f(1/2)``, using the start bound at both ends; this
  costs the factors ``cP = max(1, (4/3)^mu (2^(1-mu) + 4^-mu))``, ``cL = 1`` and
  ``cR = (4/3)^mu (2^-mu + 4^-mu)``.
* Midpoint seminorm.  A midpoint triple ``(s, (s+u)/2, u)`` is compared with
  the average over neighbourhoods of relative size ``delta`` of all three
  points, which produces the triple functional with weight
  ``cT = 8 * 4^(3/p) (3/2)^(mu + 3/p)`` and ``delta^(-3/p)``; neighbourhoods
  touching an end are handled with the start bound, weight
  ``cE = ((1/4)^mu + (3/4)^mu) K``.  The literal two-term form of this step
  (without endpoint terms) fails for paths with a very short first piece, so
  the audited form carries ``delta^(-1/p) (L + R)``.
* Main estimate.  With ``lambda = 2 / (1 - 2^-mu)`` the chain
  ``H <= 2 tilde <= lambda * hat`` and the midpoint step at
  ``delta_1 = (2^mu / (6 lambda))^(1/mu)`` absorb ``H`` on the left; the
  endpoint step at ``delta_2 = 1/2`` then adds ``|f]`` and ``[f|``.
* Sup bound.  ``sup |f| <= 2 |f] + |f|_Lp`` exactly, so ``max(1, 2 C)`` bounds sup |f| by
  ``|f|_Lp`` plus the integral functionals.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import (
    ExponentNotIntegrable,
    MalformedInput,
    MissingConstants,
    UnorderedTriple,
    WindowNotNested,
)
from .integral_norms import (
    endpoint_besov,
    lp_sup_norms,
    remark22_product_bound,
    triple_besov,
    triple_besov_power,
)
from .moduli import (
    as_window,
    delta_triple,
    delta_window,
    endpoint_seminorms,
    hat_seminorm,
    holder_seminorm,
    n_window,
    tilde_seminorm,
)
from .paths import LEFT, CadlagStep, FunctionalParams, SidedTime, as_params, check_mu, check_p, dist

REL_TOL = 1e-9
ABS_TOL = 1e-12

CONSTANTS_VERSION = 1
DEFAULT_DELTA = 0.5
TABLE_MUS = tuple(sorted({round(0.1 * k, 1) for k in range(1, 10)} | {0.25, 0.75}))
TABLE_PS = (1.5, 2.0, 4.0)


@dataclass(frozen=True)
class AuditReport:
    check_name: str
    lhs: float
    rhs: float
    params: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def ratio(self) -> float:
        if self.rhs == 0.0:
            return 0.0 if self.lhs == 0.0 else math.inf
        return self.lhs / self.rhs

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs * (1.0 + REL_TOL) + ABS_TOL


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DerivedConstants:
    mu: float
    p: float
    delta: float
    theorem1_C: float
    theorem1_sup_C: float
    chain_fo1_C: float
    chain_fo2_C: float
    chain_f51_C: float
    chain_f52_C: float
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "mu": self.mu,
            "p": self.p,
            "delta": self.delta,
            "theorem1_C": self.theorem1_C,
            "theorem1_sup_C": self.theorem1_sup_C,
            "chain_fo1_C": self.chain_fo1_C,
            "chain_fo2_C": self.chain_fo2_C,
            "chain_f51_C": self.chain_f51_C,
            "chain_f52_C": self.chain_f52_C,
            "note": self.note,
        }


def _start_factor(mu, p):
    return 4.0 ** (1.0 / p) * (1.0 + 1.25 ** (mu + 1.0 / p))


def derive_constants(mu: float, p: float, delta: float = DEFAULT_DELTA) -> DerivedConstants:
    """Admissible constants for the audited estimates, see the module docstring."""
    mu, p = check_mu(mu), check_p(p)
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    K = _start_factor(mu, p)
    fo1 = max(2.0 ** -mu, K)
    cP = max(1.0, (4.0 / 3.0) ** mu * (2.0 ** (1.0 - mu) + 4.0 ** -mu))
    cL = 1.0
    cR = (4.0 / 3.0) ** mu * (2.0 ** -mu + 4.0 ** -mu)
    f51 = max(2.0 * cP * 2.0 ** -mu, (cL + cR) * K)
    cT = 8.0 * 4.0 ** (3.0 / p) * 1.5 ** (mu + 3.0 / p)
    cE = (0.25 ** mu + 0.75 ** mu) * K
    f52 = max(3.0 * 2.0 ** -mu, cT, cE)

    lam = 2.0 / (1.0 - 2.0 ** -mu)
    d1 = (2.0 ** mu / (6.0 * lam)) ** (1.0 / mu)
    d2 = 0.5
    absorb = 1.0 + 2.0 * cP * 2.0 ** -mu * d2 ** mu
    coef_t = absorb * 2.0 * lam * cT * d1 ** (-3.0 / p)
    coef_lr = absorb * 2.0 * lam * cE * d1 ** (-1.0 / p) + (cL + cR) * K * d2 ** (-1.0 / p)
    th1 = max(coef_t, coef_lr)
    return DerivedConstants(
        mu=mu,
        p=p,
        delta=float(delta),
        theorem1_C=th1,
        theorem1_sup_C=max(1.0, 2.0 * th1),
        chain_fo1_C=fo1,
        chain_fo2_C=fo1,
        chain_f51_C=f51,
        chain_f52_C=f52,
        note=(
            f"K={K!r} cP={cP!r} cR={cR!r} cT={cT!r} cE={cE!r} "
            f"lambda={lam!r} delta1={d1!r} delta2={d2!r}"
        ),
    )


def build_constants_table(delta: float = DEFAULT_DELTA) -> dict:
    return {
        "version": CONSTANTS_VERSION,
        "delta": delta,
        "derivation": (
            "start bound K=4^(1/p)(1+(5/4)^(mu+1/p)); endpoint factors cP, cL=1, cR; "
            "midpoint step cT=8*4^(3/p)(3/2)^(mu+3/p), cE=((1/4)^mu+(3/4)^mu)K; "
            "main estimate via lambda=2/(1-2^-mu), delta1=(2^mu/(6 lambda))^(1/mu), delta2=1/2; "
            "sup constant max(1, 2C) from sup|f| <= 2|f] + |f|_Lp"
        ),
        "entries": [derive_constants(mu, p, delta).as_dict() for mu in TABLE_MUS for p in TABLE_PS],
    }


class ConstantsTable:
    """Frozen per-(mu, p) constants loaded from JSON."""

    def __init__(self, entries: dict, delta: float, version: int):
        self._entries = entries
        self.delta = delta
        self.version = version

    def get(self, mu: float, p: float) -> DerivedConstants:
        key = (round(float(mu), 12), round(float(p), 12))
        try:
            return self._entries[key]
        except KeyError:
            raise MissingConstants(f"no derived constants for mu={mu}, p={p}") from None

    def __contains__(self, key) -> bool:
        mu, p = key
        return (round(float(mu), 12), round(float(p), 12)) in self._entries

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries.values())


_FIELDS = (
    "mu", "p", "delta", "theorem1_C", "theorem1_sup_C",
    "chain_fo1_C", "chain_fo2_C", "chain_f51_C", "chain_f52_C",
)


def _parse_table(obj) -> ConstantsTable:
    if not isinstance(obj, dict) or not isinstance(obj.get("entries"), list):
        raise MalformedInput("constants file needs an 'entries' list", "entries")
    for key in ("version", "delta"):
        if key not in obj:
            raise MalformedInput("missing field", key)
    entries = {}
    for i, e in enumerate(obj["entries"]):
        if not isinstance(e, dict):
            raise MalformedInput("entry must be an object", "entries", i)
        vals = {}
        for name in _FIELDS:
            v = e.get(name)
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
                raise MalformedInput(f"entry field {name!r} missing or not a finite number", "entries", i)
            vals[name] = float(v)
        if not all(vals[n] > 0 for n in _FIELDS):
            raise MalformedInput("constants must be positive", "entries", i)
        c = DerivedConstants(note=str(e.get("note", "")), **vals)
        entries[(round(c.mu, 12), round(c.p, 12))] = c
    return ConstantsTable(entries, float(obj["delta"]), int(obj["version"]))


def load_constants(path=None) -> ConstantsTable:
    """Load the constants table; the packaged file when ``path`` is None."""
    try:
        if path is None:
            text = resources.files("cadlagity").joinpath("data/derived_constants.json").read_text()
        else:
            text = Path(path).read_text()
    except OSError as exc:
        raise MalformedInput(f"cannot read constants file: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"constants file is not valid JSON: {exc.msg} at line {exc.lineno}") from exc
    return _parse_table(obj)


@dataclass(frozen=True)
class CorollaryConstants:
    mu: float
    r: float
    p: float
    c_triple: float
    c_left: float
    c_right: float


def corollary1_constants(mu: float, r: float, p: float) -> CorollaryConstants:
    """Integrals of ``(u - s)^(r - mu p - 1)`` turning moment bounds into functional bounds.

    ``c_triple`` is the double integral over ``0 < s < u < 1``; the endpoint
    constants are the single integrals against ``t^(r - mu p - 1)``.
    """
    mu, p = check_mu(mu), check_p(p)
    r = float(r)
    e = r - mu * p
    if not e > 0:
        raise ExponentNotIntegrable(f"need r > mu p, got r={r}, mu p={mu * p}")
    return CorollaryConstants(mu, r, p, 1.0 / (e * (e + 1.0)), 1.0 / e, 1.0 / e)


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def check_remark31(f: CadlagStep, w, sub) -> list[AuditReport]:
    """``N/2 <= Delta <= 2N`` on ``w``, and monotonicity under ``sub`` inside ``w``."""
    w, sub = as_window(w), as_window(sub)
    if not w.contains(sub):
        raise WindowNotNested(f"window {sub} is not inside {w}")
    dw, nw = delta_window(f, w), n_window(f, w)
    ds, ns = delta_window(f, sub), n_window(f, sub)
    info = {"window": (w.sigma.t, w.tau.t), "sub": (sub.sigma.t, sub.tau.t)}
    return [
        AuditReport("remark31a_lower", 0.5 * nw, dw, info),
        AuditReport("remark31a_upper", dw, 2.0 * nw, info),
        AuditReport("remark31b_n", ns, 2.0 * nw, info),
        AuditReport("remark31b_delta", ds, dw, info),
    ]


def check_lemma_f2(f: CadlagStep, sigma: float, t: float, tau: float, reading: str = "pointwise") -> AuditReport:
    """``N(sigma, tau) <= max(N(sigma, t), N(t, tau)) + Delta``.

    ``reading="pointwise"`` uses ``Delta(f; sigma, t, tau)``; ``"window"``
    uses the window modulus ``Delta(f; (sigma, tau))``, which is never smaller.
    """
    sigma, t, tau = float(sigma), float(t), float(tau)
    if not sigma < t < tau:
        raise UnorderedTriple(f"need sigma < t < tau, got {sigma}, {t}, {tau}")
    if reading == "pointwise":
        d = delta_triple(f, sigma, t, tau)
    elif reading == "window":
        d = delta_window(f, (sigma, tau))
    else:
        raise ValueError(f"reading must be 'pointwise' or 'window', got {reading!r}")
    lhs = n_window(f, (sigma, tau))
    rhs = max(n_window(f, (sigma, t)), n_window(f, (t, tau))) + d
    return AuditReport("lemma34_f2", lhs, rhs, {"sigma": sigma, "t": t, "tau": tau, "reading": reading})


def check_equivalences(f: CadlagStep, mu: float) -> list[AuditReport]:
    mu = check_mu(mu)
    h, ti, ha = holder_seminorm(f, mu), tilde_seminorm(f, mu), hat_seminorm(f, mu)
    lam = 2.0 / (1.0 - 2.0 ** -mu)
    info = {"mu": mu}
    return [
        AuditReport("lemma33_lower", 0.5 * ti, h, info),
        AuditReport("lemma33_upper", h, 2.0 * ti, info),
        AuditReport("lemma35_hat_le_holder", ha, h, info),
        AuditReport("lemma35_holder_le_2tilde", h, 2.0 * ti, info),
        AuditReport("lemma35_2tilde_le_hat", 2.0 * ti, lam * ha, info),
    ]


def check_eq10(f: CadlagStep, mu: float) -> AuditReport:
    """Full seminorm against the short-span seminorm plus ``2^mu Delta(f; (0, 1))``."""
    mu = check_mu(mu)
    lhs = holder_seminorm(f, mu)
    short = holder_seminorm(f, mu, max_span=0.5)
    rhs = short + 2.0 ** mu * delta_window(f, (0.0, 1.0))
    return AuditReport("remark32_eq10", lhs, rhs, {"mu": mu, "short_span_sup": short})


def check_remark22(f: CadlagStep, params) -> AuditReport:
    """``[[f]]^p`` against the product-form integral."""
    params = as_params(params)
    return AuditReport(
        "remark22_product",
        triple_besov_power(f, params),
        remark22_product_bound(f, params),
        {"mu": params.mu, "p": params.p},
    )


def _constants_for(params: FunctionalParams, consts) -> DerivedConstants:
    if isinstance(consts, DerivedConstants):
        return consts
    if consts is None:
        consts = load_constants()
    return consts.get(params.mu, params.p)


def check_theorem1(f: CadlagStep, params, consts=None) -> list[AuditReport]:
    """Main estimate, its sup-norm form, and the exact terminal sup bound."""
    params = as_params(params)
    c = _constants_for(params, consts)
    mu = params.mu
    h = holder_seminorm(f, mu)
    left_s, right_s = endpoint_seminorms(f, mu)
    tb = triple_besov(f, params)
    lb, rb = endpoint_besov(f, params)
    lp, sup = lp_sup_norms(f, params.p)
    lhs = h + left_s + right_s
    integrals = tb + lb + rb
    raw = lhs / integrals if integrals > 0 else 0.0
    info = {"mu": mu, "p": params.p, "raw_ratio": raw}
    return [
        AuditReport("theorem1_seminorms", lhs, c.theorem1_C * integrals, dict(info, C=c.theorem1_C)),
        AuditReport("theorem1_sup", sup, c.theorem1_sup_C * (lp + integrals), dict(info, C=c.theorem1_sup_C)),
        AuditReport("sup_terminal", sup, 2.0 * left_s + lp, {"mu": mu, "p": params.p}),
    ]


def chain_times(f: CadlagStep, G: int = 64) -> np.ndarray:
    """Times for the pointwise chain checks: a uniform grid plus the breakpoints."""
    return np.unique(np.concatenate((np.linspace(0.0, 1.0, G + 1), f.breakpoints)))


def check_proof_chain(f: CadlagStep, params, consts=None, times=None) -> list[AuditReport]:
    """Intermediate estimates of the main argument at ``delta = consts.delta``.

    ``fo1``/``fo2`` are checked at every time in ``times`` (default
    :func:`chain_times`) within their ranges; ``f51``/``f52`` once each.
    """
    params = as_params(params)
    c = _constants_for(params, consts)
    mu, p = params.mu, params.p
    delta = c.delta
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    h = holder_seminorm(f, mu)
    lb, rb = endpoint_besov(f, params)
    tb = triple_besov(f, params)
    left_s, right_s = endpoint_seminorms(f, mu)
    ha = hat_seminorm(f, mu)
    base = h * delta ** mu
    inv = delta ** (-1.0 / p)
    v0, v1 = f.values[0], f.values[-1]
    if times is None:
        times = chain_times(f)
    out = []
    for t in np.asarray(times, dtype=float):
        t = float(t)
        info = {"mu": mu, "p": p, "delta": delta, "t": t}
        ft = f(t)
        if t <= 0.75:
            out.append(AuditReport("chain_fo1", dist(v0, ft), c.chain_fo1_C * t ** mu * (base + inv * lb), info))
        if t >= 0.25:
            # the left limit is the worst case near a breakpoint for the distance to f(1)
            fl = f(SidedTime(t, LEFT)) if t > 0 else ft
            d = max(dist(v1, ft), dist(v1, fl))
            out.append(
                AuditReport("chain_fo2", d, c.chain_fo2_C * (1.0 - t) ** mu * (base + inv * rb), info)
            )
    info = {"mu": mu, "p": p, "delta": delta}
    out.append(AuditReport("chain_f51", left_s + right_s, c.chain_f51_C * (base + inv * (lb + rb)), info))
    out.append(
        AuditReport(
            "chain_f52",
            ha,
            c.chain_f52_C * (base + tb * delta ** (-3.0 / p) + inv * (lb + rb)),
            info,
        )
    )
    return out
