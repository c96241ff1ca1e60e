import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linecross.crossprob import (
    BiasSpec,
    LineSpec,
    alpha_beta_bounds,
    phi,
    phi_asymptotic,
    phi_p0,
    phi_series,
    psi,
    psi_first_return,
    x1,
)
from linecross.errors import DomainError
from linecross.gfroots import solve_H

GOLDEN = (math.sqrt(5) - 1) / 2


def test_types_validate():
    with pytest.raises(DomainError):
        BiasSpec(0)
    with pytest.raises(DomainError):
        LineSpec(-1, 0)
    assert BiasSpec(3).up_probability == Fraction(3, 4)
    assert LineSpec("5/4", 0).alpha == Fraction(5, 4)


def test_phi_examples():
    assert phi(3, 2, 5).value == 1.0
    assert phi(1, 2, 0).value == pytest.approx(0.6180339887, abs=1e-10)
    assert phi(1, 2, 1).value == pytest.approx(0.3819660113, abs=1e-10)
    assert phi(BiasSpec(1.0), 2).method == "root"


def test_phi_horizontal_line():
    for beta, d in ((5, 0), (0.1, 7), (1, 0)):
        assert phi_p0(beta, d).value == 1.0
        assert phi(beta, 0, d).value == 1.0


def test_phi_one_when_beta_at_least_p():
    for p in range(1, 7):
        for beta in (p, p + 0.5, p + 3):
            assert phi(beta, p, 0).value == 1.0


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 6.0), st.integers(1, 6), st.integers(0, 8))
def test_phi_power_law(beta, p, d):
    assert abs(phi(beta, p, d).value - phi(beta, p, 0).value ** (d + 1)) <= 1e-11


def test_phi_equals_generating_function_form():
    for p in (1, 2, 4):
        for beta in (0.5, 1.0, 3.0):
            via_h = beta / (beta + 1) * solve_H(p, x1(beta, p)).value
            assert phi(beta, p).value == pytest.approx(via_h, abs=1e-6)


def test_psi_examples():
    assert psi(2, 1, 0).value == pytest.approx(2 / 3, abs=1e-12)
    assert psi(3, 2, 4).value == 1.0
    assert psi(1, 2, 0).value == pytest.approx(2 * (1 - 0.5 / GOLDEN), abs=1e-12)
    assert psi(1, 2, 0).value == pytest.approx(0.3819660113, abs=1e-9)


def test_psi_horizontal():
    with pytest.raises(DomainError):
        psi(1, 0, 0)
    assert psi(1, 0, 3).value == 1.0


def test_psi_theorem_grid():
    for p in range(1, 6):
        for beta in (p, p + 0.25, 2 * p + 1):
            assert abs(psi(beta, p, 0).value - 2 / (beta + 1)) <= 1e-10
            for d in range(1, 5):
                assert psi(beta, p, d).value == 1.0
        for beta in (0.3, 0.9):
            for d in range(1, 5):
                assert abs(psi(beta, p, d).value - phi(beta, p, 0).value ** d) <= 1e-10


def test_psi_matches_first_passage_series():
    # hitting y = p x from the origin: 2 * sum N(p,n) x1^n
    from linecross.exactcomb import first_passage_N

    for p, beta in ((2, Fraction(1)), (3, Fraction(1, 2)), (1, Fraction(1, 3))):
        x = beta**p / (beta + 1) ** (p + 1)
        N = first_passage_N(p, 80)
        series = 2 * sum(N[n] * x**n for n in range(81))
        assert float(series) == pytest.approx(psi(beta, p, 0).value, abs=1e-6)


def test_series_examples():
    one = phi_series(1, 2, 0, 1)
    assert one.exact == Fraction(1, 2)
    v = phi_series(1, 2, 0, 40).value
    assert 0.616 < v < 0.6180339888
    v = phi_series(2, 1, 0, 40).value
    assert 0.99 < v <= 1


def test_series_float_agrees_with_exact():
    exact = phi_series(Fraction(3, 4), 2, 1, 30).value
    approx = phi_series(0.75, 2, 1, 30).value
    assert approx == pytest.approx(exact, rel=1e-13)


@pytest.mark.parametrize("p,d", [(1, 0), (2, 0), (2, 2), (3, 1)])
def test_series_is_increasing_lower_bound(p, d):
    root = phi(1, p, d).value
    vals = [phi_series(1, p, d, n).exact for n in range(1, 40)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert float(vals[-1]) <= root


def test_asymptotic_examples():
    assert phi_asymptotic(1, 10).value == 0.500244140625
    assert phi_asymptotic(1, 2).value == 0.5625
    assert phi_asymptotic(2, 8).value == pytest.approx(2 / 3 * (1 + 2**8 / 3**9), rel=1e-15)
    assert phi_asymptotic(2, 8).detail["x1"] == pytest.approx(2**8 / 3**9, rel=1e-15)
    with pytest.raises(DomainError):
        phi_asymptotic(3, 2)


def test_asymptotic_below_exact():
    for beta in (0.5, 1.0, 2.0):
        for p in range(math.floor(beta) + 1, 16):
            assert phi(beta, p).value >= phi_asymptotic(beta, p).value


def test_alpha_beta_bounds():
    assert alpha_beta_bounds(2.5) == (2, 3)
    assert alpha_beta_bounds(1) == (1, 2)
    assert alpha_beta_bounds(0.3) == (0, 1)
    for beta in (0.3, 1.0, 2.5, 4.7):
        lo, hi = alpha_beta_bounds(beta)
        if lo >= 1:
            assert phi(beta, lo).value == 1.0
        assert phi(beta, hi).value < 1.0


def _first_return_dp(beta, p, steps=2000, band=80):
    # forward DP on (a, b) absorbing at the line; excess truncated at +-band
    from collections import defaultdict

    q = beta / (beta + 1)
    cur = {(0, 0): 1.0}
    hit = 0.0
    for _ in range(steps):
        nxt = defaultdict(float)
        for (a, b), m in cur.items():
            for a2, b2, w in ((a + 1, b, 1 - q), (a, b + 1, q)):
                e = b2 - p * a2
                if e == 0:
                    hit += m * w
                elif -band < e < band:
                    nxt[a2, b2] += m * w
        cur = nxt
    return hit


def test_first_return_matches_dp_oracle():
    for beta, p in ((1.0, 2), (0.6, 3), (3.0, 2), (2.0, 1)):
        assert psi_first_return(beta, p).value == pytest.approx(_first_return_dp(beta, p), abs=1e-9)


def test_first_return_agrees_with_closed_form_where_no_overshoot():
    for beta in (0.3, 1.0, 2.0, 4.5):
        assert psi_first_return(beta, 1).value == pytest.approx(psi(beta, 1).value, abs=1e-12)
        for p in (2, 3):
            for d in (1, 3):
                assert psi_first_return(beta, p, d).value == psi(beta, p, d).value


def test_closed_form_undercounts_overshooting_returns():
    # walks that start upward can step right over y = 2x and come back from below
    assert psi(1, 2).value == pytest.approx(0.3819660113, abs=1e-9)
    assert psi_first_return(1, 2).value == pytest.approx(0.5729490169, abs=1e-9)
    assert psi_first_return(2, 2).value == 1.0
