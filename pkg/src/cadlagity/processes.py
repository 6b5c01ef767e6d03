"""Compound Poisson paths, dyadic projections and Monte Carlo moment estimates.

Randomness: replicate ``i`` of a run with seed ``s`` draws from
``Generator(Philox(SeedSequence(s).spawn(M)[i]))``.  Each replicate owns its
stream, so estimates do not depend on how replicates are split across
workers, and the same replicate index sees the same path in every
experiment that shares the seed (common random numbers).
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .errors import BadParams, UnorderedTriple
from .integral_norms import endpoint_besov_power, lp_sup_norms, triple_besov_power
from .moduli import delta_triple
from .paths import CadlagStep, as_params, check_p, constant_path, make_step_path

KINDS = ("poisson", "compound_poisson")
LAWS = ("unit", "rademacher", "uniform")
BESOV_KEYS = ("triple", "left", "right", "sup", "lp")


@dataclass(frozen=True)
class ProcessSpec:
    kind: str = "poisson"
    lam: float = 5.0
    jump_law: str = "unit"
    low: float = -1.0
    high: float = 1.0
    # amplitudes are multiplied by this; with a shared seed this gives paired samples
    scale: float = 1.0
    # force the jump count instead of drawing it (test hook)
    fixed_count: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadParams(f"kind must be one of {KINDS}, got {self.kind!r}", "kind")
        if not (self.lam >= 0) or not math.isfinite(self.lam):
            raise BadParams(f"jump intensity must be finite and >= 0, got {self.lam}", "lambda")
        if self.jump_law not in LAWS:
            raise BadParams(f"jump_law must be one of {LAWS}, got {self.jump_law!r}", "jump_law")
        if self.jump_law == "uniform" and not self.low < self.high:
            raise BadParams(f"uniform law needs a < b, got ({self.low}, {self.high})", "jump_law")
        if not self.scale > 0:
            raise BadParams("scale must be positive", "scale")
        if self.fixed_count is not None and self.fixed_count < 0:
            raise BadParams("fixed_count must be >= 0", "fixed_count")

    @classmethod
    def from_json(cls, obj: dict) -> "ProcessSpec":
        if not isinstance(obj, dict):
            raise BadParams("process must be a JSON object", "process")
        law = obj.get("jump_law", "unit")
        low, high = -1.0, 1.0
        if isinstance(law, dict):
            # {"uniform": [a, b]}
            (name, bounds), = law.items()
            low, high = (float(x) for x in bounds)
            law = name
        return cls(
            kind=obj.get("kind", "poisson"),
            lam=float(obj.get("lambda", obj.get("lam", 5.0))),
            jump_law=law,
            low=low,
            high=high,
            scale=float(obj.get("scale", 1.0)),
            fixed_count=obj.get("fixed_count"),
        )


@dataclass(frozen=True)
class MomentHypothesis:
    """Moment bound ``E[Delta(X; s, t, u)^p] <= C0 |u - s|^(1 + r)``."""

    p: float
    r: float
    C0: float

    def __post_init__(self):
        check_p(self.p)
        if not self.r > 0:
            raise BadParams(f"r must be positive, got {self.r}", "r")
        if not self.C0 > 0:
            raise BadParams(f"C0 must be positive, got {self.C0}", "C0")

    def bound(self, span: float) -> float:
        return self.C0 * span ** (1.0 + self.r)


def poisson_hypothesis(lam: float) -> MomentHypothesis:
    """Bound for unit-jump Poisson paths at p = 2, r = 1.

    With ``A``, ``B`` the independent counts on ``(s, t]`` and ``(t, u]``,
    ``min(A, B)^2 <= A^2 1{B >= 1}``, so
    ``E <= E[A^2] P(B >= 1) <= (lam a + lam^2 a^2) lam b`` with ``a + b = h``;
    using ``a, b <= h`` and ``a b <= h^2 / 4`` gives ``lam^2 (1 + lam) h^2 / 4``
    for ``h <= 1``.
    """
    lam = float(lam)
    return MomentHypothesis(p=2.0, r=1.0, C0=max(lam * lam * (1.0 + lam) / 4.0, 1e-300))


def exact_poisson_triple_moment(lam: float, s: float, t: float, u: float, p: float, terms: int = 200) -> float:
    """``E[min(A, B)^p]`` for independent Poisson counts, by direct summation."""
    from scipy.stats import poisson

    k = np.arange(terms)
    ta = poisson.sf(k - 1, lam * (t - s))   # P(A >= k)
    tb = poisson.sf(k - 1, lam * (u - t))
    tail = ta * tb                           # P(min >= k)
    pmf = tail[:-1] - tail[1:]
    return math.fsum(k[:-1] ** p * pmf)


@dataclass(frozen=True)
class MCConfig:
    M: int = 2000
    seed: int = 0
    confidence: float = 0.99
    workers: int = 1

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise BadParams(f"replicate count must be a positive integer, got {self.M}", "M")
        if not 0 < self.confidence < 1:
            raise BadParams(f"confidence must lie in (0, 1), got {self.confidence}", "confidence")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise BadParams("seed must be a 64-bit unsigned integer", "seed")


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    half_width: float
    M: int

    @property
    def upper(self) -> float:
        return self.mean + self.half_width


def estimate(samples, confidence: float) -> MCEstimate:
    x = np.asarray(samples, dtype=float)
    M = x.size
    mean = math.fsum(x) / M
    if M < 2:
        return MCEstimate(mean, 0.0, M)
    sd = math.sqrt(math.fsum((x - mean) ** 2) / (M - 1))
    z = NormalDist().inv_cdf(0.5 + 0.5 * confidence)
    return MCEstimate(mean, z * sd / math.sqrt(M), M)


def replicate_rngs(seed: int, M: int, lo: int = 0, hi: int | None = None):
    """Generators for replicates ``lo..hi-1`` of an ``M``-replicate run."""
    children = np.random.SeedSequence(int(seed)).spawn(M)[lo:hi]
    for child in children:
        yield np.random.Generator(np.random.Philox(child))


def _amplitudes(spec: ProcessSpec, rng: np.random.Generator, k: int) -> np.ndarray:
    if spec.kind == "poisson" or spec.jump_law == "unit":
        amp = np.ones(k)
    elif spec.jump_law == "rademacher":
        amp = np.where(rng.random(k) < 0.5, -1.0, 1.0)
    else:
        amp = rng.uniform(spec.low, spec.high, k)
    return amp * spec.scale


def sample_path(spec: ProcessSpec, rng: np.random.Generator) -> CadlagStep:
    """One path started at 0 on [0, 1]."""
    k = spec.fixed_count if spec.fixed_count is not None else int(rng.poisson(spec.lam))
    if k == 0:
        return constant_path(0.0)
    while True:
        times = np.sort(rng.random(k))
        # a jump at 0 or two jumps at one time have probability zero; redraw
        if times[0] > 0.0 and np.all(np.diff(times) > 0.0):
            break
    values = np.concatenate(([0.0], np.cumsum(_amplitudes(spec, rng, k))))
    return make_step_path(1, times, values[:, None])


def sample_paths(spec: ProcessSpec, seed: int, M: int) -> list[CadlagStep]:
    return [sample_path(spec, rng) for rng in replicate_rngs(seed, M)]


def dyadic_projection(f: CadlagStep, n: int) -> CadlagStep:
    """``X^n_t = X(k / 2^n)`` on ``[k / 2^n, (k + 1) / 2^n)``; the value at 1 is ``X(1 - 2^-n)``."""
    if int(n) != n or n < 1:
        raise BadParams(f"n must be a positive integer, got {n}", "n")
    cells = 2 ** int(n)
    grid = np.arange(cells) / cells
    idx = np.searchsorted(f.breakpoints, grid, side="right")
    return make_step_path(f.dim, grid[1:], f.values[idx])


# ---------------------------------------------------------------------------
# per-replicate functionals (module level so they pickle for worker pools)
# ---------------------------------------------------------------------------

def _triple_sample(spec, seed, M, lo, hi, s, t, u, p):
    out = np.empty(hi - lo)
    for i, rng in enumerate(replicate_rngs(seed, M, lo, hi)):
        out[i] = delta_triple(sample_path(spec, rng), s, t, u) ** p
    return out


def _besov_values(f: CadlagStep, params) -> list[float]:
    left, right = endpoint_besov_power(f, params)
    lp, sup = lp_sup_norms(f, params.p)
    return [triple_besov_power(f, params), left, right, sup ** params.p, lp ** params.p]


def _besov_sample(spec, seed, M, lo, hi, params):
    out = np.empty((hi - lo, len(BESOV_KEYS)))
    for i, rng in enumerate(replicate_rngs(seed, M, lo, hi)):
        out[i] = _besov_values(sample_path(spec, rng), params)
    return out


def _dyadic_sample(spec, seed, M, lo, hi, params, ns):
    out = np.empty((hi - lo, len(ns)))
    for i, rng in enumerate(replicate_rngs(seed, M, lo, hi)):
        f = sample_path(spec, rng)
        for j, n in enumerate(ns):
            g = dyadic_projection(f, n)
            left, right = endpoint_besov_power(g, params)
            out[i, j] = triple_besov_power(g, params) + left + right
    return out


def _run(fn, cfg: MCConfig, *args) -> np.ndarray:
    """Evaluate replicates 0..M-1 in order, optionally split over processes."""
    M, seed = cfg.M, cfg.seed
    if cfg.workers <= 1 or M < 2:
        return fn(*((args[0], seed, M, 0, M) + args[1:]))
    bounds = np.linspace(0, M, min(cfg.workers, M) + 1).astype(int)
    with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
        futs = [
            ex.submit(fn, *((args[0], seed, M, int(a), int(b)) + args[1:]))
            for a, b in zip(bounds[:-1], bounds[1:])
        ]
        parts = [fut.result() for fut in futs]
    return np.concatenate(parts)


def mc_triple_moment(spec: ProcessSpec, s: float, t: float, u: float, p: float, cfg: MCConfig) -> MCEstimate:
    """Estimate ``E[Delta(X; s, t, u)^p]``."""
    s, t, u = float(s), float(t), float(u)
    if not (0.0 <= s < t < u <= 1.0):
        raise UnorderedTriple(f"need 0 <= s < t < u <= 1, got {s}, {t}, {u}")
    p = check_p(p)
    return estimate(_run(_triple_sample, cfg, spec, s, t, u, p), cfg.confidence)


def mc_besov_moments(spec: ProcessSpec, params, cfg: MCConfig) -> dict[str, MCEstimate]:
    """Estimates of ``E[[X]]^p``, ``E||X]]^p``, ``E[[X||^p``, ``E sup|X|^p`` and ``E int |X|^p``."""
    params = as_params(params)
    vals = _run(_besov_sample, cfg, spec, params)
    return {k: estimate(vals[:, j], cfg.confidence) for j, k in enumerate(BESOV_KEYS)}


def mc_dyadic_uniform(spec: ProcessSpec, params, n_range, cfg: MCConfig) -> dict[int, MCEstimate]:
    """Per-n estimates of ``E([[X^n]]^p + ||X^n]]^p + [[X^n||^p)`` for dyadic projections.

    All n share the replicate paths.
    """
    params = as_params(params)
    ns = tuple(int(n) for n in n_range)
    if not ns or min(ns) < 1 or max(ns) > 20:
        raise BadParams("n_range must lie within [1, 20]", "n_range")
    vals = _run(_dyadic_sample, cfg, spec, params, ns)
    return {n: estimate(vals[:, j], cfg.confidence) for j, n in enumerate(ns)}
