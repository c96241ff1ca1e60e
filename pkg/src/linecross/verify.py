"""Cross-module consistency suites used by ``linecross verify``.

Each check yields a ``Check`` with a pass flag and the measured discrepancy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from . import crossprob, exactcomb, gfroots

IDENTITY_ALPHAS = (Fraction(0), Fraction(1), Fraction(2), Fraction(10), Fraction(1, 2), Fraction(3, 2), Fraction(7, 3))


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    case: str
    passed: bool
    discrepancy: float


def identities() -> Iterator[Check]:
    for alpha in IDENTITY_ALPHAS:
        vals = [exactcomb.check_identity_zero(alpha, k) for k in range(1, 21)]
        worst = max(abs(v) for v in vals)
        yield Check("identities", "alternating_binomial_sum", f"alpha={alpha},k<=20", worst == 0, float(worst))
    for p, z in ((1, Fraction(1, 4)), (2, Fraction(1, 5)), (3, Fraction(1, 7))):
        sums = [exactcomb.partial_sum_prop21(p, z, n) for n in range(1, 31)]
        ok = all(a < b for a, b in zip(sums, sums[1:])) and sums[-1] <= 1
        yield Check("identities", "partial_sum_increasing_below_one", f"p={p},z={z}", ok, float(1 - sums[-1]))


def convolutions() -> Iterator[Check]:
    for p in range(1, 6):
        dp = exactcomb.dp_count(p, 0, 12, exactcomb.WEAKLY_BELOW).entries
        closed = tuple(exactcomb.catalan_M(p, n) for n in range(13))
        yield Check("convolutions", "dp_equals_closed_form", f"p={p},n<=12", dp == closed, float(sum(a != b for a, b in zip(dp, closed))))
        strict = exactcomb.dp_count(p, 0, 12, exactcomb.STRICTLY_BELOW).entries
        inv = tuple(exactcomb.first_passage_N(p, 12))
        yield Check("convolutions", "first_passage_equals_strict_dp", f"p={p},n<=12", strict == inv, float(sum(a != b for a, b in zip(strict, inv))))
    for p in range(1, 5):
        for d in range(1, 4):
            t = exactcomb.dp_count(p, d, 10, exactcomb.STRICTLY_BELOW).entries
            s = exactcomb.dp_count(p, d - 1, 10, exactcomb.WEAKLY_BELOW).entries
            yield Check("convolutions", "strict_d_equals_weak_d_minus_1", f"p={p},d={d},n<=10", t == s, float(sum(a != b for a, b in zip(t, s))))
            ok = exactcomb.t_convolution_check(p, d, 10)
            yield Check("convolutions", "s_equals_t_star_m", f"p={p},d={d},n<=10", ok, 0.0 if ok else 1.0)
        for d in range(0, 3):
            ok = exactcomb.s_convolution_check(p, d, 8)
            yield Check("convolutions", "s_d_plus_1_equals_s_d_star_s_0", f"p={p},d={d},n<=8", ok, 0.0 if ok else 1.0)


def grid(p: int, points: int = 20) -> list[float]:
    x_max = gfroots.domain_bound(p).x_max
    return [x_max * i / (points - 1) for i in range(points)]


def roots(tol: float = gfroots.DEFAULT_TOL) -> Iterator[Check]:
    for p in range(1, 7):
        worst_h = worst_hg = 0.0
        for x in grid(p):
            g = gfroots.solve_G(p, x, tol)
            h = gfroots.solve_H(p, x, tol)
            worst_h = max(worst_h, abs(x * h.value ** (p + 1) - (h.value - 1)))
            worst_hg = max(worst_hg, abs(h.value * (1 - g.value) - 1))
        yield Check("roots", "H_solves_x_y^(p+1)=y-1", f"p={p}", worst_h <= 1e-11, worst_h)
        yield Check("roots", "H_times_1_minus_G_is_1", f"p={p}", worst_hg <= 1e-11, worst_hg)
    for p in range(1, 7):
        worst = 0.0
        for beta in (0.25, 0.5, 1.0, 1.5, 2.5, 4.0, 8.0):
            phi0 = gfroots.solve_phi0(beta, p, tol).value
            via_h = beta / (beta + 1) * gfroots.solve_H(p, float(crossprob.x1(beta, p)), tol).value
            worst = max(worst, abs(phi0 - via_h))
        yield Check("roots", "phi0_equals_q_times_H_at_x1", f"p={p}", worst <= 1e-6, worst)
    betas = [0.1 * i for i in range(1, 80)]
    ok = True
    for p in range(1, 8):
        vals = [gfroots.solve_phi0(b, p, tol).value for b in betas]
        ok &= all(a <= b for a, b in zip(vals, vals[1:]))
    for b in betas:
        vals = [gfroots.solve_phi0(b, p, tol).value for p in range(1, 10)]
        ok &= all(u >= v for u, v in zip(vals, vals[1:]))
    yield Check("roots", "phi0_monotone_in_beta_and_p", "beta<8,p<10", ok, 0.0 if ok else 1.0)


def asymptotics() -> Iterator[Check]:
    ratios = []
    below = True
    for p in range(3, 16):
        exact = crossprob.phi(1, p, 0).value
        approx = crossprob.phi_asymptotic(1, p)
        below &= exact >= approx.value
        ratios.append(abs(exact - approx.value) / approx.detail["x1"])
    dec = all(a > b for a, b in zip(ratios, ratios[1:]))
    yield Check("asymptotics", "relative_correction_decreasing", "beta=1,p=3..15", dec, ratios[-1])
    yield Check("asymptotics", "relative_correction_at_p10", "beta=1,p=10", ratios[7] < 0.5, ratios[7])
    yield Check("asymptotics", "phi_at_least_approximation", "beta=1,p=3..15", below, 0.0 if below else 1.0)
    for p in (1, 2, 3):
        root = crossprob.phi(1, p, 0).value
        vals = [crossprob.phi_series(1, p, 0, n).exact for n in range(1, 61)]
        ok = all(a < b for a, b in zip(vals, vals[1:])) and float(vals[-1]) <= root
        yield Check("asymptotics", "series_increasing_lower_bound", f"beta=1,p={p},n<=60", ok, root - float(vals[-1]))


SUITES: dict[str, Callable[[], Iterator[Check]]] = {
    "identities": identities,
    "convolutions": convolutions,
    "roots": roots,
    "asymptotics": asymptotics,
}


def run(suite: str = "all") -> list[Check]:
    names = list(SUITES) if suite == "all" else [suite]
    out = []
    for name in names:
        out.extend(SUITES[name]())
    return out
