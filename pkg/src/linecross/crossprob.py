"""Crossing and hitting probabilities of the beta-biased monotone walk.

The walk steps up with probability beta/(beta+1) and right with probability
1/(beta+1). ``phi`` is the chance of ever reaching a lattice point strictly
above y = p*x + d, ``psi`` the chance of landing exactly on y = p*x + d
after leaving the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Any

from .errors import DomainError
from .exactcomb import WEAKLY_BELOW, dp_count
from .gfroots import DEFAULT_TOL, RootResult, solve_phi0

ROOT = "root"
SERIES = "series"
ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class BiasSpec:
    beta: float | Fraction

    def __post_init__(self):
        if not self.beta > 0:
            raise DomainError(f"beta must be > 0, got {self.beta}")

    @property
    def up_probability(self):
        return self.beta / (self.beta + 1)


@dataclass(frozen=True)
class LineSpec:
    alpha: Fraction
    d: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "d", Fraction(self.d))
        if self.alpha < 0 or self.d < 0:
            raise DomainError(f"line needs alpha, d >= 0, got {self.alpha}, {self.d}")


@dataclass(frozen=True)
class ProbResult:
    value: float
    method: str
    detail: Any = None
    exact: Fraction | None = field(default=None, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ArithmeticError(f"probability {self.value} outside [0, 1]")


def _beta(beta) -> float | Fraction:
    return beta.beta if isinstance(beta, BiasSpec) else BiasSpec(beta).beta


def x1(beta, p: int):
    """Evaluation point beta^p / (beta+1)^(p+1)."""
    b = _beta(beta)
    return b**p / (b + 1) ** (p + 1)


def phi(beta, p: int, d: int = 0, tol: float = DEFAULT_TOL) -> ProbResult:
    b = _beta(beta)
    if d < 0:
        raise DomainError("d must be >= 0")
    if p == 0:
        return phi_p0(b, d)
    root = solve_phi0(float(b), p, tol)
    return ProbResult(root.value ** (d + 1), ROOT, root)


def phi_p0(beta, d: int = 0) -> ProbResult:
    """Horizontal line: the walk climbs past any height eventually."""
    _beta(beta)
    if d < 0:
        raise DomainError("d must be >= 0")
    return ProbResult(1.0, ROOT, RootResult(1.0, 0.0, 0, 1.0, 1.0))


def psi(beta, p: int, d: int = 0, tol: float = DEFAULT_TOL) -> ProbResult:
    """Hitting probability from the closed form 2(1 - q/phi0) at d = 0, phi0^d for d > 0.

    For d = 0 and p >= 2 the closed form only counts first returns whose
    interior stays on one side of the line. A walk that starts upward can
    step right over the line and come back from below; those returns are
    counted by ``psi_first_return``.
    """
    b = _beta(beta)
    if d < 0:
        raise DomainError("d must be >= 0")
    if p == 0 and d > 0:
        return phi_p0(b, d - 1)
    if p < 1:
        # above y = d a monotone walk never comes back down to the line
        raise DomainError("hitting probability at d = 0 needs p >= 1")
    root = solve_phi0(float(b), p, tol)
    if d > 0:
        return ProbResult(root.value**d, ROOT, root)
    bf = float(b)
    v = 2.0 * (1.0 - (bf / (bf + 1.0)) / root.value)
    if v < 0.0 and v > -tol:
        v = 0.0
    elif 1.0 < v < 1.0 + tol:
        v = 1.0
    return ProbResult(v, ROOT, root)


def psi_first_return(beta, p: int, d: int = 0, tol: float = 1e-13, max_levels: int = 1 << 21) -> ProbResult:
    """Probability of meeting a lattice point of y = p*x + d after departure.

    Below the line the walk can only reach it by unit up-steps, so from gap g
    it succeeds with probability phi0**g. Above it the excess e = b - p*a
    moves +1 or -p; the landing probabilities are solved as a banded linear
    system truncated at excess ``levels`` (doubled until the value settles
    to ``tol``). Truncation only drops mass, so every iterate is a lower bound.
    """
    b = float(_beta(beta))
    if d < 0:
        raise DomainError("d must be >= 0")
    if p == 0 and d > 0:
        return phi_p0(b, d - 1)
    if p < 1:
        raise DomainError("hitting probability at d = 0 needs p >= 1")
    root = solve_phi0(b, p)
    if d > 0:
        return ProbResult(root.value**d, ROOT, root)

    if b == p:
        # zero drift above the line and phi0 = 1 below: the walk returns surely
        return ProbResult(1.0, ROOT, {"levels": 0, "phi0": 1.0})

    import numpy as np
    from scipy.linalg import solve_banded

    q = b / (b + 1.0)
    r = 1.0 / (b + 1.0)
    phi0 = root.value

    def above(levels: int) -> float:
        # unknown u[e-1] for excess e = 1..levels:
        #   u_e - q u_{e+1} - r u_{e-p} = r * [landing weight when e - p <= 0]
        ab = np.zeros((p + 2, levels))
        ab[0, 1:] = -q  # superdiagonal
        ab[1, :] = 1.0
        if levels > p:
            ab[p + 1, : levels - p] = -r  # p-th subdiagonal
        rhs = np.zeros(levels)
        e = np.arange(1, min(p, levels) + 1)
        rhs[: e.size] = r * phi0 ** (p - e).astype(float)
        u = solve_banded((p, 1), ab, rhs)
        return float(u[0])

    levels = 256
    prev = above(levels)
    while levels < max_levels:
        levels *= 2
        cur = above(levels)
        if abs(cur - prev) <= tol:
            prev = cur
            break
        prev = cur
    value = r * phi0**p + q * prev
    return ProbResult(min(max(value, 0.0), 1.0), ROOT, {"levels": levels, "phi0": phi0})


def phi_series(beta, p: int, d: int, n_terms: int) -> ProbResult:
    """Truncated positive series sum_{n<n_terms} S(n,d) beta^(pn+d+1)/(beta+1)^(pn+n+d+1).

    Every term is positive, so the result is a lower bound for ``phi``.
    Rational beta is summed exactly, float beta with ``math.fsum``.
    """
    b = _beta(beta)
    if p < 1 or d < 0 or n_terms < 1:
        raise DomainError("need p >= 1, d >= 0, n_terms >= 1")
    S = dp_count(p, d, n_terms - 1, WEAKLY_BELOW).entries
    if isinstance(b, Rational):
        b = Fraction(b)
        q = b / (b + 1)
        x = b**p / (b + 1) ** (p + 1)
        term = q ** (d + 1)
        total = Fraction(0)
        for s in S:
            total += s * term
            term *= x
        return ProbResult(float(total), SERIES, n_terms, exact=total)
    bf = float(b)
    logq = math.log(bf) - math.log1p(bf)
    logx = p * math.log(bf) - (p + 1) * math.log1p(bf)
    terms = [math.exp(math.log(s) + (d + 1) * logq + n * logx) for n, s in enumerate(S) if s]
    return ProbResult(min(math.fsum(terms), 1.0), SERIES, n_terms)


def phi_asymptotic(beta, p: int) -> ProbResult:
    """Large-p approximation (beta/(beta+1)) * (1 + x1) of phi(beta, p, 0)."""
    b = float(_beta(beta))
    if p < 1:
        raise DomainError("p must be >= 1")
    if b >= p:
        raise DomainError(f"approximation needs beta < p, got beta={b}, p={p}")
    xv = b**p / (b + 1.0) ** (p + 1)
    return ProbResult(b / (b + 1.0) * (1.0 + xv), ASYMPTOTIC, {"x1": xv})


def alpha_beta_bounds(beta) -> tuple[int, int]:
    """Integer bracket floor(beta) <= alpha_beta <= floor(beta) + 1."""
    lo = math.floor(_beta(beta))
    return lo, lo + 1
