import math

import numpy as np
import pytest

from cadlagity.errors import BadMu, EmptyWindow, NonpositiveEta, UnorderedTriple
from cadlagity.moduli import (
    Window,
    delta_triple,
    delta_window,
    endpoint_seminorms,
    hat_seminorm,
    holder_seminorm,
    n_eta,
    n_window,
    seminorm_report,
    tilde_seminorm,
)
from cadlagity.paths import LEFT, SidedTime, make_step_path

SQ3 = math.sqrt(3.0)


def test_delta_triple_examples(f2, const):
    assert delta_triple(f2, 0.2, 0.5, 0.8) == 1.0
    assert delta_triple(f2, 0.1, 0.2, 0.5) == 0.0
    assert delta_triple(const, 0.1, 0.2, 0.5) == 0.0


def test_delta_triple_order():
    f = make_step_path(1, [0.5], [0, 1])
    with pytest.raises(UnorderedTriple):
        delta_triple(f, 0.5, 0.2, 0.8)
    # left limit sorts before the value at the same time
    assert delta_triple(f, SidedTime(0.5, LEFT), 0.5, 0.5) == 0.0


def test_window_examples(f1, f2):
    assert delta_window(f1, (0, 1)) == 0.0
    assert delta_window(f2, (0, 1)) == 1.0
    assert delta_window(f2, (0.4, 0.6)) == 0.0
    assert n_window(f1, (0, 1)) == 0.0
    assert n_window(f2, (0, 1)) == 1.0
    assert n_window(f2, (0.2, 0.6)) == 0.0


def test_empty_window():
    with pytest.raises(EmptyWindow):
        Window(0.5, 0.5)
    with pytest.raises(EmptyWindow):
        Window(0.6, 0.2)


def test_window_with_left_limit_end(f2):
    # (0, 2/3-) sees only pieces 0 and 1
    assert delta_window(f2, (0.0, SidedTime(2 / 3, LEFT))) == 0.0
    assert delta_window(f2, (0.0, 2 / 3)) == 1.0


def test_n_eta_examples(f2, const):
    assert n_eta(f2, 0.2) == 0.0
    assert n_eta(f2, 0.5) == 1.0
    # window (1/3 - e, 2/3 + e) has length just above 1/3
    assert n_eta(f2, 1 / 3 + 1e-9) == 1.0
    assert n_eta(f2, 1 / 3) == 0.0
    assert n_eta(const, 0.7) == 0.0
    with pytest.raises(NonpositiveEta):
        n_eta(f2, 0.0)


def test_seminorm_examples(f1, f2, const):
    assert holder_seminorm(f2, 0.5) == pytest.approx(SQ3, rel=1e-14)
    assert holder_seminorm(f1, 0.3) == 0.0
    assert holder_seminorm(const, 0.3) == 0.0
    assert endpoint_seminorms(f2, 0.5) == pytest.approx((SQ3, SQ3), rel=1e-14)
    assert endpoint_seminorms(f1, 0.5) == pytest.approx((math.sqrt(2), math.sqrt(2)), rel=1e-14)
    assert endpoint_seminorms(const, 0.5) == (0.0, 0.0)
    assert tilde_seminorm(f2, 0.5) == pytest.approx(SQ3, rel=1e-14)
    assert tilde_seminorm(f1, 0.5) == 0.0
    assert hat_seminorm(f2, 0.5) == pytest.approx(SQ3, rel=1e-14)
    assert hat_seminorm(f1, 0.5) == 0.0
    assert hat_seminorm(const, 0.5) == 0.0


def test_bad_mu(f2):
    with pytest.raises(BadMu):
        holder_seminorm(f2, 1.0)
    with pytest.raises(BadMu):
        tilde_seminorm(f2, 0.0)


def test_hat_skips_infeasible_triples():
    # pieces 0 = [0, .1), 1 = [.1, .2), 3 = [.8, 1]: a midpoint of s < .1 and
    # u >= .8 lies past .4, so triple (0, 1, 3) never occurs
    f = make_step_path(1, [0.1, 0.2, 0.8], [0, 1, 5, 0])
    exact = hat_seminorm(f, 0.5)
    holder = holder_seminorm(f, 0.5)
    assert exact <= holder
    s = np.linspace(0, 1, 801)
    best = 0.0
    for i, a in enumerate(s):
        for b in s[i + 1:]:
            m = 0.5 * (a + b)
            d = min(abs(f(a)[0] - f(m)[0]), abs(f(m)[0] - f(b)[0]))
            best = max(best, d / (b - a) ** 0.5)
    assert best <= exact * (1 + 1e-12)
    assert best >= 0.97 * exact


def test_max_span_cap(f2):
    # the only nonzero triple has infimum span 1/3
    assert holder_seminorm(f2, 0.5, max_span=0.34) == pytest.approx(SQ3)
    assert holder_seminorm(f2, 0.5, max_span=1 / 3) == 0.0


def test_report(f2):
    r = seminorm_report(f2, (0.25, 2))
    assert r.holder == pytest.approx(3 ** 0.25)
    assert set(r.as_dict()) == {"holder", "left_end", "right_end", "tilde", "hat"}


def test_multidimensional_values():
    f = make_step_path(2, [0.25, 0.5], [[0, 0], [3, 4], [0, 0]])
    assert delta_window(f, (0, 1)) == 5.0
    assert holder_seminorm(f, 0.5) == pytest.approx(5.0 / math.sqrt(0.25))
