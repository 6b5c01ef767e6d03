"""Invariants checked on random step paths."""

import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cadlagity.inequalities import (
    check_eq10,
    check_equivalences,
    check_lemma_f2,
    check_proof_chain,
    check_remark22,
    check_remark31,
    check_theorem1,
    load_constants,
)
from cadlagity.integral_norms import endpoint_besov_power, triple_besov_power
from cadlagity.moduli import hat_seminorm, holder_seminorm, n_eta, tilde_seminorm
from cadlagity.paths import make_step_path

CONSTS = load_constants()
MUS = [0.1, 0.3, 0.5, 0.7, 0.9]
PS = [1.5, 2.0, 4.0]


@st.composite
def step_paths(draw, max_jumps=7, dim=1):
    k = draw(st.integers(0, max_jumps))
    cells = draw(st.lists(st.integers(1, 999), min_size=k, max_size=k, unique=True))
    bp = sorted(c / 1000 for c in cells)
    vals = draw(st.lists(
        st.lists(st.integers(-4, 4).map(float) | st.floats(-5, 5, allow_nan=False), min_size=dim, max_size=dim),
        min_size=k + 1, max_size=k + 1,
    ))
    return make_step_path(dim, bp, vals)


unit = st.floats(0, 1, allow_nan=False)
mu_st = st.sampled_from(MUS)
p_st = st.sampled_from(PS)
FAST = settings(max_examples=60, deadline=None)


@FAST
@given(step_paths(), unit, unit, unit, unit)
def test_sandwich_and_nesting(f, a, b, c, d):
    a, b = sorted((a, b))
    assume(b - a > 1e-6)
    c, d = sorted((a + c * (b - a), a + d * (b - a)))
    assume(d - c > 1e-9)
    assert all(r.passed for r in check_remark31(f, (a, b), (c, d)))


@FAST
@given(step_paths(), unit, unit, unit)
def test_three_point_estimate(f, s, t, u):
    s, t, u = sorted((s, t, u))
    assume(s < t < u)
    assert check_lemma_f2(f, s, t, u).passed
    assert check_lemma_f2(f, s, t, u, reading="window").passed


@FAST
@given(step_paths(dim=2), mu_st)
def test_equivalence_chains(f, mu):
    assert all(r.passed for r in check_equivalences(f, mu))
    assert check_eq10(f, mu).passed


@FAST
@given(step_paths(), st.floats(0.05, 0.95))
def test_seminorms_monotone_in_mu(f, mu):
    # every span is at most 1, so a larger exponent can only increase the ratio
    for fn in (holder_seminorm, tilde_seminorm, hat_seminorm):
        assert fn(f, mu) <= fn(f, min(mu + 0.04, 0.99)) * (1 + 1e-12) + 1e-300


@FAST
@given(step_paths(), mu_st, p_st, st.floats(0.1, 10))
def test_homogeneity(f, mu, p, c):
    g = f.scaled(c)
    assert math.isclose(holder_seminorm(g, mu), c * holder_seminorm(f, mu), rel_tol=1e-12, abs_tol=1e-300)
    assert math.isclose(triple_besov_power(g, (mu, p)), c ** p * triple_besov_power(f, (mu, p)), rel_tol=1e-10, abs_tol=1e-300)
    la, ra = endpoint_besov_power(f, (mu, p))
    lb, rb = endpoint_besov_power(g, (mu, p))
    assert math.isclose(lb, c ** p * la, rel_tol=1e-10, abs_tol=1e-300)
    assert math.isclose(rb, c ** p * ra, rel_tol=1e-10, abs_tol=1e-300)


@FAST
@given(step_paths(), st.floats(0.01, 1), st.floats(0.01, 1))
def test_n_eta_monotone(f, a, b):
    a, b = sorted((a, b))
    assert n_eta(f, a) <= n_eta(f, b)


@FAST
@given(step_paths(), mu_st, p_st)
def test_finite_and_nonnegative(f, mu, p):
    vals = [holder_seminorm(f, mu), tilde_seminorm(f, mu), hat_seminorm(f, mu), triple_besov_power(f, (mu, p))]
    vals += list(endpoint_besov_power(f, (mu, p)))
    assert all(np.isfinite(v) and v >= 0 for v in vals)


@FAST
@given(step_paths(), mu_st, p_st)
def test_product_bound(f, mu, p):
    assert check_remark22(f, (mu, p)).passed


@settings(max_examples=40, deadline=None)
@given(step_paths(), mu_st, p_st)
def test_main_estimate_and_chain(f, mu, p):
    c = CONSTS.get(mu, p)
    assert all(r.passed for r in check_theorem1(f, (mu, p), c))
    assert all(r.passed for r in check_proof_chain(f, (mu, p), c))


@FAST
@given(step_paths(), mu_st)
def test_translation_invariance(f, mu):
    g = make_step_path(f.dim, f.breakpoints, f.values + 3.25)
    assert math.isclose(holder_seminorm(g, mu), holder_seminorm(f, mu), rel_tol=1e-12, abs_tol=1e-12)
    assert math.isclose(triple_besov_power(g, (mu, 2)), triple_besov_power(f, (mu, 2)), rel_tol=1e-9, abs_tol=1e-12)
