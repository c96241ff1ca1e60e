"""Exact path counts for monotone lattice paths below lines y = p*x + d.

Counts are plain Python ints and exact rationals are ``fractions.Fraction``,
so nothing here ever overflows or rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DomainError

WEAKLY_BELOW = "weakly_below"
STRICTLY_BELOW = "strictly_below"
KINDS = (WEAKLY_BELOW, STRICTLY_BELOW)


@dataclass(frozen=True)
class CountTable:
    p: int
    d: int
    kind: str
    entries: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        return self.entries[n]

    def __len__(self) -> int:
        return len(self.entries)


def binom(a: int, b: int) -> int:
    """C(a, b) for nonnegative integers; zero when b > a."""
    if a < 0 or b < 0:
        raise ValueError("binom takes nonnegative integers")
    return math.comb(a, b)


def catalan_M(p: int, n: int) -> int:
    """Number of paths (0,0) -> (n, p*n) never strictly above y = p*x.

    Closed form C(pn+n+1, n) / (pn+n+1); the division is checked to be exact.
    """
    if p < 1 or n < 0:
        raise ValueError(f"need p >= 1 and n >= 0, got p={p}, n={n}")
    top = p * n + n + 1
    q, r = divmod(binom(top, n), top)
    if r:
        raise ArithmeticError(f"non-integral M({p},{n})")
    return q


def _kernel(p: int, d: int, n_max: int, allowed: Callable[[int, int], bool]) -> list[int]:
    # f[b] holds the number of admissible paths from the origin to (a, b);
    # interior points must pass `allowed`, the endpoint (n, pn+d) is exempt.
    out = []
    col: list[int] = []
    for a in range(n_max + 1):
        top = p * a + d
        new = [0] * (top + 1)
        for b in range(top + 1):
            left = col[b] if a > 0 and b < len(col) else 0
            down = new[b - 1] if b > 0 else 0
            reach = 1 if (a, b) == (0, 0) else left + down
            if b == top:
                out.append(reach)
            new[b] = reach if (a, b) == (0, 0) or allowed(a, b) else 0
        col = new
    return out


def dp_count(p: int, d: int, n_max: int, kind: str = WEAKLY_BELOW) -> CountTable:
    """Count paths (0,0) -> (n, pn+d) for n <= n_max by lattice DP.

    ``weakly_below`` keeps every point on or under y = p*x + d;
    ``strictly_below`` keeps every point except the two endpoints strictly under it.
    """
    if p < 1 or d < 0 or n_max < 0:
        raise ValueError(f"need p >= 1, d >= 0, n_max >= 0; got {p}, {d}, {n_max}")
    if kind == WEAKLY_BELOW:
        allowed = lambda a, b: b <= p * a + d  # noqa: E731
    elif kind == STRICTLY_BELOW:
        allowed = lambda a, b: b < p * a + d  # noqa: E731
    else:
        raise ValueError(f"unknown kind {kind!r}")
    entries = _kernel(p, d, n_max, allowed)
    if kind == STRICTLY_BELOW and d == 0:
        # start and end coincide: no path leaves and returns in zero steps
        entries[0] = 0
    return CountTable(p, d, kind, tuple(entries))


def first_passage_N(p: int, n_max: int) -> list[int]:
    """N(p, n) for n <= n_max, by inverting M = N * M (Cauchy product)."""
    if p < 1 or n_max < 0:
        raise ValueError(f"need p >= 1 and n_max >= 0, got p={p}, n_max={n_max}")
    M = [catalan_M(p, n) for n in range(n_max + 1)]
    N = [0]
    for n in range(1, n_max + 1):
        N.append(M[n] - sum(N[m] * M[n - m] for m in range(1, n)))
    return N


def gen_binom(r: Fraction | int, l: int) -> Fraction:
    """Generalized binomial r(r-1)...(r-l+1)/l! for rational r."""
    if l < 0:
        raise ValueError("l must be nonnegative")
    r = Fraction(r)
    num = Fraction(1)
    for i in range(l):
        num *= r - i
    return num / math.factorial(l)


def check_identity_zero(alpha: Fraction | int, k: int) -> Fraction:
    """Exact value of sum_{n=0}^{k} (-1)^n C(k,n) C(n*alpha + n, k-1).

    The sum vanishes for every alpha and every k >= 1.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    alpha = Fraction(alpha)
    total = Fraction(0)
    for n in range(k + 1):
        term = binom(k, n) * gen_binom(n * alpha + n, k - 1)
        total += -term if n % 2 else term
    return total


def partial_sum_prop21(p: int, z: Fraction | int, n_terms: int) -> Fraction:
    """sum_{n < n_terms} M(p,n) z^n (1-z)^(pn+1), exactly.

    The full series equals 1 on 0 <= z < 1/(p+1); outside that interval a
    ``DomainError`` is raised.
    """
    z = Fraction(z)
    if p < 1 or n_terms < 1:
        raise ValueError("need p >= 1 and n_terms >= 1")
    if z < 0 or z >= Fraction(1, p + 1):
        raise DomainError(f"z={z} outside [0, 1/{p + 1})")
    w = 1 - z
    step = z * w**p
    term = w
    total = Fraction(0)
    for n in range(n_terms):
        total += catalan_M(p, n) * term
        term *= step
    return total


def convolve(u: Sequence[int], v: Sequence[int], n: int) -> int:
    return sum(u[i] * v[n - i] for i in range(n + 1))


def s_convolution_check(p: int, d: int, n_max: int) -> bool:
    """Check S(n, d+1) = sum_i S(i, d) S(n-i, 0) against the DP tables."""
    lhs = dp_count(p, d + 1, n_max, WEAKLY_BELOW)
    sd = dp_count(p, d, n_max, WEAKLY_BELOW)
    s0 = dp_count(p, 0, n_max, WEAKLY_BELOW)
    return all(lhs[n] == convolve(sd.entries, s0.entries, n) for n in range(n_max + 1))


def t_convolution_check(p: int, d: int, n_max: int) -> bool:
    """Check S(n, d) = sum_m T(m, d) M(p, n-m) for d > 0."""
    if d < 1:
        raise ValueError("T-convolution holds for d >= 1")
    s = dp_count(p, d, n_max, WEAKLY_BELOW)
    t = dp_count(p, d, n_max, STRICTLY_BELOW)
    M = [catalan_M(p, n) for n in range(n_max + 1)]
    return all(s[n] == convolve(t.entries, M, n) for n in range(n_max + 1))
