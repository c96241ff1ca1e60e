"""Exit criteria, one test each; every test prints a single PASS/FAIL line."""

import math
import time
from fractions import Fraction

import pytest

from linecross.crossprob import alpha_beta_bounds, phi, phi_series, psi
from linecross.exactcomb import STRICTLY_BELOW, WEAKLY_BELOW, catalan_M, check_identity_zero, dp_count, first_passage_N
from linecross.gfroots import domain_bound, solve_G, solve_H
from linecross.walksim import CROSSING, HITTING, estimate, sweep_alpha


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n:>2} {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail

    return emit


def test_01_exact_count_oracle(report):
    t0 = time.perf_counter()
    ok = all(
        dp_count(p, 0, 12, WEAKLY_BELOW).entries == tuple(catalan_M(p, n) for n in range(13))
        for p in range(1, 6)
    )
    dt = time.perf_counter() - t0
    report(1, ok and dt < 5, f"DP == closed form for p<=5, n<=12 ({dt:.3f}s)")


def test_02_first_passage(report):
    ok = all(
        tuple(first_passage_N(p, 10)) == dp_count(p, 0, 10, STRICTLY_BELOW).entries for p in range(1, 5)
    )
    report(2, ok, "convolution inversion == strictly-below DP for p<=4, n<=10")


def test_03_identity_suite(report):
    alphas = [0, 1, 2, 10, Fraction(1, 2), Fraction(3, 2), Fraction(7, 3)]
    bad = [(a, k) for a in alphas for k in range(1, 21) if check_identity_zero(a, k) != 0]
    report(3, not bad, f"alternating binomial identity exactly 0, nonzero cases: {bad}")


def test_04_root_relations(report):
    worst_h = worst_hg = 0.0
    for p in range(1, 7):
        x_max = domain_bound(p).x_max
        for i in range(20):
            x = x_max * i / 19
            h = solve_H(p, x).value
            g = solve_G(p, x).value
            worst_h = max(worst_h, abs(x * h ** (p + 1) - (h - 1)))
            worst_hg = max(worst_hg, abs(h * (1 - g) - 1))
    report(4, worst_h <= 1e-11 and worst_hg <= 1e-11, f"max residuals {worst_h:.2e}, {worst_hg:.2e} (tol 1e-11)")


def test_05_crossing_theorem(report):
    ones = all(phi(b, p, 0).value == 1.0 for p in range(1, 7) for b in (p, p + 0.5, p + 3))
    golden = phi(1, 2, 0).value
    worst = max(
        abs(phi(b, p, d).value - phi(b, p, 0).value ** (d + 1))
        for b in (0.3, 1.0, 1.7, 2.5)
        for p in range(1, 7)
        for d in range(9)
    )
    ok = ones and abs(golden - 0.6180339887) <= 1e-9 and worst <= 1e-10
    report(5, ok, f"phi=1 for beta>=p: {ones}; phi(1,2,0)={golden:.12f}; power-law gap {worst:.1e}")


def test_06_hitting_theorem(report):
    a = abs(psi(2, 1, 0).value - 2 / 3)
    b = max(abs(psi(beta, p, 0).value - 2 / (beta + 1)) for p in range(1, 7) for beta in (p, p + 0.5, p + 3))
    c = max(
        abs(psi(beta, p, d).value - phi(beta, p, 0).value ** d)
        for beta in (0.3, 1.0, 2.5, 4.0)
        for p in range(1, 7)
        for d in range(1, 9)
    )
    report(6, a <= 1e-12 and b <= 1e-10 and c <= 1e-10, f"errors {a:.1e}, {b:.1e}, {c:.1e}")


@pytest.mark.parametrize("p", [1, 2, 3])
def test_07_series_lower_bound(report, p):
    root = phi(1, p, 0).value
    vals = [phi_series(1, p, 0, n).exact for n in range(1, 61)]
    increasing = all(x < y for x, y in zip(vals, vals[1:]))
    gap = root - float(vals[-1])
    ok = increasing and 0 <= gap <= 1e-3
    report(7, ok, f"p={p}: 60-term series {float(vals[-1]):.10f} vs root {root:.10f}, gap {gap:.2e} (tol 1e-3)")


def _within(p_hat, target, n, k=3):
    sd = math.sqrt(target * (1 - target) / n)
    return abs(p_hat - target) <= k * sd, sd


def test_08_monte_carlo_vs_analytic(report):
    n = 10**6
    t0 = time.perf_counter()
    cross = estimate(CROSSING, 1, 2, 0, n, 20240101)
    hit = estimate(HITTING, 2, 1, 0, n, 20240101)
    dt = time.perf_counter() - t0
    ok_c, sd_c = _within(cross.p_hat, 0.618034, n)
    ok_h, sd_h = _within(hit.p_hat, 0.666667, n)
    same = estimate(CROSSING, 1, 2, 0, n, 20240101) == cross and estimate(HITTING, 2, 1, 0, n, 20240101) == hit
    report(
        8,
        ok_c and ok_h and dt < 60 and same,
        f"crossing {cross.p_hat:.6f} ({(cross.p_hat - 0.618034) / sd_c:+.2f} sd), "
        f"hitting {hit.p_hat:.6f} ({(hit.p_hat - 0.666667) / sd_h:+.2f} sd), {dt:.1f}s, rerun identical: {same}",
    )


def test_09_asymptotics(report):
    ratios, above = [], True
    for p in range(3, 16):
        x = 2.0 ** (-p - 1)
        exact = phi(1, p, 0).value
        approx = 0.5 * (1 + x)
        above &= exact >= approx
        ratios.append(abs(exact - approx) / x)
    dec = all(a > b for a, b in zip(ratios, ratios[1:]))
    at10 = ratios[10 - 3]
    report(9, dec and at10 < 0.5 and above, f"ratio decreasing: {dec}, at p=10: {at10:.3e}, phi >= approx: {above}")


@pytest.mark.parametrize("beta", [1.5, 2.5])
def test_10_alpha_bracket(report, beta):
    n = 2 * 10**5
    lo, hi = alpha_beta_bounds(beta)
    at_lo, at_hi = sweep_alpha(beta, [lo, hi], 0, n, 31337)
    sd_lo = math.sqrt(max(at_lo.p_hat * (1 - at_lo.p_hat), 1 / n) / n)
    sd_hi = math.sqrt(max(at_hi.p_high * (1 - at_hi.p_high), 1 / n) / n)
    one_at_lo = 1 - at_lo.p_hat <= 4 * sd_lo
    below_at_hi = at_hi.p_high < 1 - 4 * sd_hi
    report(
        10,
        one_at_lo and below_at_hi,
        f"beta={beta}: alpha={lo} p_hat={at_lo.p_hat:.6f}; alpha={hi} envelope "
        f"[{at_hi.p_low:.6f}, {at_hi.p_high:.6f}] vs 1-4sd={1 - 4 * sd_hi:.6f}",
    )
