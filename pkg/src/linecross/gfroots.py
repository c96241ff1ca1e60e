"""Bracketed root solvers for the generating-function equations.

All three equations have an a priori bracket on which the defining function
is monotone, so plain bisection is run down to adjacent doubles and then
polished with a single Newton step when that lowers the residual.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import DomainError

DEFAULT_TOL = 1e-12
MAX_ITER = 200


@dataclass(frozen=True)
class RootResult:
    value: float
    residual: float
    iterations: int
    bracket_lo: float
    bracket_hi: float


@dataclass(frozen=True)
class DomainBound:
    p: int
    x_max: float
    z_star: float


def domain_bound(p: int) -> DomainBound:
    """Radius of convergence p^p / (p+1)^(p+1) and its maximizer 1/(p+1)."""
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    return DomainBound(p, p**p / (p + 1) ** (p + 1), 1.0 / (p + 1))


def bisect_increasing(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    fprime: Callable[[float], float] | None = None,
    tol: float = DEFAULT_TOL,
) -> RootResult:
    """Root of an increasing function on [lo, hi] with f(lo) <= 0 <= f(hi)."""
    a, b = lo, hi
    fa, fb = f(a), f(b)
    if fa > 0 or fb < 0:
        raise DomainError(f"no sign change on [{lo}, {hi}]: f={fa}, {fb}")
    if fa == 0:
        return RootResult(a, 0.0, 0, lo, hi)
    if fb == 0:
        return RootResult(b, 0.0, 0, lo, hi)
    it = 0
    while it < MAX_ITER:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        it += 1
        fm = f(m)
        if fm == 0:
            a = b = m
            break
        if fm < 0:
            a = m
        else:
            b = m
    x = a if abs(f(a)) <= abs(f(b)) else b
    res = abs(f(x))
    if fprime is not None and res > 0:
        dx = fprime(x)
        if dx > 0:
            y = min(max(x - f(x) / dx, lo), hi)
            if abs(f(y)) < res:
                x, res = y, abs(f(y))
    if res > tol:
        raise ArithmeticError(f"root residual {res:.3e} exceeds tol {tol:.1e}")
    return RootResult(x, res, it, lo, hi)


def _check_x(p: int, x: float, tol: float) -> tuple[DomainBound, float]:
    bound = domain_bound(p)
    if x < 0 or x > bound.x_max + tol:
        raise DomainError(f"x={x} outside [0, {bound.x_max}] for p={p}")
    return bound, min(x, bound.x_max)


def solve_G(p: int, x: float, tol: float = DEFAULT_TOL) -> RootResult:
    """Smallest nonnegative root z of z(1-z)^p = x (first-passage GF)."""
    bound, x = _check_x(p, x, tol)
    if x == 0:
        return RootResult(0.0, 0.0, 0, 0.0, bound.z_star)
    if x == bound.x_max:
        z = bound.z_star
        return RootResult(z, abs(z * (1 - z) ** p - x), 0, 0.0, z)
    f = lambda z: z * (1 - z) ** p - x  # noqa: E731
    fp = lambda z: (1 - z) ** (p - 1) * (1 - (p + 1) * z)  # noqa: E731
    return bisect_increasing(f, 0.0, bound.z_star, fp, tol)


def solve_H(p: int, x: float, tol: float = DEFAULT_TOL) -> RootResult:
    """H_p(x) = 1 / (1 - G_p(x)), the smallest positive root of x y^(p+1) = y - 1."""
    g = solve_G(p, x, tol)
    _, x = _check_x(p, x, tol)
    h = 1.0 / (1.0 - g.value)
    res = abs(x * h ** (p + 1) - (h - 1.0))
    return RootResult(h, res, g.iterations, 1.0, 1.0 / (1.0 - g.bracket_hi))


def deflated_poly(p: int, beta: float) -> tuple[Callable[[float], float], Callable[[float], float]]:
    """y^p + ... + y - beta and its derivative, via Horner with unit coefficients."""

    def f(y: float) -> float:
        acc = 0.0
        for _ in range(p):
            acc = (acc + 1.0) * y
        return acc - beta

    def fp(y: float) -> float:
        acc = 0.0
        for k in range(p, 0, -1):
            acc = acc * y + k
        return acc

    return f, fp


def solve_phi0(beta: float, p: int, tol: float = DEFAULT_TOL) -> RootResult:
    """Smallest positive root of y^(p+1) - (beta+1) y + beta = 0.

    For beta >= p this is exactly 1; otherwise the root in (0, 1) of the
    polynomial left after dividing out (y - 1).
    """
    if not beta > 0:
        raise DomainError(f"beta must be > 0, got {beta}")
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    if beta >= p:
        return RootResult(1.0, 0.0, 0, 0.0, 1.0)
    f, fp = deflated_poly(p, float(beta))
    return bisect_increasing(f, 0.0, 1.0, fp, tol)


def lundberg_root(up: int, right: int, beta: float, tol: float = DEFAULT_TOL) -> RootResult | None:
    """Root in (0,1) of t^(right+up) - (beta+1) t^up + beta = 0.

    This is the decay rate of the chance that a walk whose gap moves by
    +right on a right step and -up on an up step ever goes negative. When
    right <= beta * up the gap does not drift upward and there is no root
    below 1, so ``None`` is returned. For up == 1 it coincides with
    ``solve_phi0(beta, right)``.
    """
    if up < 1 or right < 0:
        raise DomainError("need up >= 1 and right >= 0")
    if right <= beta * up:
        return None
    # (t - 1) * (sum_{i=up}^{up+right-1} t^i - beta * sum_{i<up} t^i)
    def f(t: float) -> float:
        hi = sum(t**i for i in range(up, up + right))
        lo = sum(t**i for i in range(up))
        return hi - beta * lo

    r = bisect_increasing_sign(f, 0.0, 1.0)
    return RootResult(r, abs(f(r)), 0, 0.0, 1.0)


def bisect_increasing_sign(f: Callable[[float], float], lo: float, hi: float) -> float:
    # f(lo) < 0 < f(hi) with a single crossing; monotonicity not required
    a, b = lo, hi
    for _ in range(MAX_ITER):
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        if f(m) < 0:
            a = m
        else:
            b = m
    # b is on the nonnegative side, which keeps the bound conservative
    return b
