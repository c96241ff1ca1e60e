"""Seeded Monte Carlo for the beta-biased monotone walk.

Random numbers come from a counter-based SplitMix64 construction:

    trial_key(seed, i) = mix64(mix64(seed) + (i + 1) * GAMMA)
    draw(seed, i, j)   = mix64(trial_key(seed, i) + (j + 1) * GAMMA)

where j counts steps already taken by trial i and all arithmetic is mod 2**64.
A step goes up iff draw < ceil(2**64 * beta / (beta + 1)), computed from the
exact binary value of beta. Outcomes therefore depend only on
(seed, trial index, parameters), never on batching or thread count.

Each trial ends in one of three states: success, certified failure (the
remaining success probability is provably below ``epsilon``), or unresolved
(step or excess budget exhausted). Certified bounds use the exponential
martingale t**gap, where t < 1 solves the step-generating equation of the gap
process; for integer slopes t is the crossing probability of y = p*x itself.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .crossprob import BiasSpec, LineSpec
from .errors import ConfigError, DomainError
from .gfroots import lundberg_root

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

SUCCESS = "success"
FAILURE_CERTIFIED = "failure_certified"
UNRESOLVED = "unresolved"
CROSSING = "crossing"
HITTING = "hitting"

CHUNK = 1 << 15
BLOCK_ELEMS = 1 << 20
Z95 = 1.959963984540054


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def _mix64_np(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def trial_key(master_seed: int, index: int) -> int:
    return mix64(mix64(master_seed) + (index + 1) * GAMMA)


def _trial_keys(master_seed: int, indices: np.ndarray) -> np.ndarray:
    base = np.uint64(mix64(master_seed))
    with np.errstate(over="ignore"):
        return _mix64_np(base + (indices.astype(np.uint64) + np.uint64(1)) * np.uint64(GAMMA))


class TrialStream:
    """Per-trial stream of 64-bit draws."""

    def __init__(self, master_seed: int, index: int):
        self.key = trial_key(master_seed, index)
        self.counter = 0

    def next_u64(self) -> int:
        self.counter += 1
        return mix64(self.key + self.counter * GAMMA)


def up_threshold(beta) -> int:
    """Integer T with P(draw < T) = beta/(beta+1) up to 2**-64."""
    b = Fraction(BiasSpec(beta).beta)
    q = b / (b + 1)
    t = -((-q.numerator << 64) // q.denominator)
    return min(t, MASK64)


def sample_step(beta, stream: TrialStream, threshold: int | None = None) -> str:
    if threshold is None:
        threshold = up_threshold(beta)
    return "up" if stream.next_u64() < threshold else "right"


@dataclass(frozen=True)
class StopRule:
    epsilon: float = 1e-9
    max_steps: int = 10**6
    max_excess: int = 64

    def validate(self) -> None:
        if not 0.0 < self.epsilon < 1.0:
            raise ConfigError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.max_steps < 1:
            raise ConfigError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.max_excess < 0:
            raise ConfigError(f"max_excess must be >= 0, got {self.max_excess}")


@dataclass(frozen=True)
class TrialOutcome:
    status: str
    steps_used: int
    bound_at_stop: float = 0.0


@dataclass(frozen=True)
class SimEstimate:
    kind: str
    trials: int
    successes: int
    certified_failures: int
    unresolved: int
    p_low: float
    p_high: float
    ci_low: float
    ci_high: float
    master_seed: int
    epsilon: float

    @property
    def p_hat(self) -> float:
        """Point estimate: fraction of certain successes."""
        return self.p_low

    def sigma(self, p: float | None = None) -> float:
        """Binomial standard error at ``p`` (envelope midpoint by default)."""
        if p is None:
            p = 0.5 * (self.p_low + self.p_high)
        return math.sqrt(max(p * (1.0 - p), 1.0 / self.trials) / self.trials)


# --- walk geometry -----------------------------------------------------------
#
# Both trial kinds track one integer "gap" g that moves by +right_inc on a
# right step and by -up_inc on an up step.
#   crossing: g = A*a + D - q*b with alpha = A/q, d = D/q; success iff g < 0.
#   hitting:  g = p*a + d - b; success iff g == 0 after the first step,
#             certified failure from below, unresolved when -g > max_excess.


@dataclass(frozen=True)
class _Plan:
    kind: str
    threshold: int
    up_inc: int
    right_inc: int
    g0: int
    g_fail: int | None  # certified failure once g >= g_fail
    rate: float  # per-unit decay of the remaining success bound
    offset: int  # bound = rate ** (g + offset)
    max_excess: int | None


def _fail_level(rate: float, offset: int, epsilon: float) -> int:
    g = max(0, math.ceil(math.log(epsilon) / math.log(rate)) - offset - 1)
    while rate ** (g + offset) >= epsilon:
        g += 1
    while g > 0 and rate ** (g - 1 + offset) < epsilon:
        g -= 1
    return g


def crossing_plan(beta, line: LineSpec, stop: StopRule) -> _Plan:
    b = BiasSpec(beta).beta
    q = math.lcm(line.alpha.denominator, line.d.denominator)
    A = int(line.alpha * q)
    D = int(line.d * q)
    if (A + q) * stop.max_steps + D >= 1 << 62:
        raise ConfigError("line coefficients too large for 64-bit gap tracking")
    root = lundberg_root(q, A, float(b))
    if root is None or root.value >= 1.0:
        g_fail, rate = None, 1.0
    else:
        rate = root.value
        g_fail = _fail_level(rate, 1, stop.epsilon)
    return _Plan(CROSSING, up_threshold(b), q, A, D, g_fail, rate, 1, None)


def hitting_plan(beta, p: int, d: int, stop: StopRule) -> _Plan:
    b = BiasSpec(beta).beta
    if p < 1 or d < 0 or int(p) != p or int(d) != d:
        raise DomainError("hitting trials need integer p >= 1 and integer d >= 0")
    p, d = int(p), int(d)
    root = lundberg_root(1, p, float(b))
    if root is None or root.value >= 1.0:
        g_fail, rate = None, 1.0
    else:
        rate = root.value
        g_fail = _fail_level(rate, 0, stop.epsilon)
        # a trial sitting on the line has succeeded, never failed
        g_fail = max(g_fail, 1)
    return _Plan(HITTING, up_threshold(b), 1, p, d, g_fail, rate, 0, stop.max_excess)


def _classify_scalar(plan: _Plan, g: int, steps: int) -> tuple[str, float] | None:
    if plan.kind == CROSSING:
        if g < 0:
            return SUCCESS, 0.0
    else:
        if g == 0 and steps > 0:
            return SUCCESS, 0.0
        if plan.max_excess is not None and -g > plan.max_excess:
            return UNRESOLVED, 0.0
    if plan.g_fail is not None and g >= plan.g_fail:
        return FAILURE_CERTIFIED, plan.rate ** (g + plan.offset)
    return None


def _run_scalar(plan: _Plan, stream: TrialStream, stop: StopRule) -> TrialOutcome:
    g, steps = plan.g0, 0
    a = b = 0
    while True:
        done = _classify_scalar(plan, g, steps)
        if done is not None:
            return TrialOutcome(done[0], steps, done[1])
        if steps >= stop.max_steps:
            return TrialOutcome(UNRESOLVED, steps)
        if stream.next_u64() < plan.threshold:
            g -= plan.up_inc
            b += 1
        else:
            g += plan.right_inc
            a += 1
        steps += 1
        assert a + b == steps


def run_crossing_trial(beta, line: LineSpec, stop: StopRule, stream: TrialStream) -> TrialOutcome:
    """Walk until the first lattice point strictly above y = alpha*x + d."""
    stop.validate()
    return _run_scalar(crossing_plan(beta, line, stop), stream, stop)


def run_hitting_trial(beta, p: int, d: int, stop: StopRule, stream: TrialStream) -> TrialOutcome:
    """Walk until a lattice point on y = p*x + d is met after the start."""
    stop.validate()
    return _run_scalar(hitting_plan(beta, p, d, stop), stream, stop)


def _stop_mask(plan: _Plan, g: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if plan.kind == CROSSING:
        succ = g < 0
        unres = np.zeros_like(succ)
    else:
        succ = g == 0
        unres = -g > plan.max_excess
    if plan.g_fail is not None:
        fail = g >= plan.g_fail
    else:
        fail = np.zeros_like(succ)
    return succ, fail, unres


def run_batch(plan: _Plan, master_seed: int, start: int, stop_index: int, stop: StopRule) -> tuple[int, int, int]:
    """Vectorized trials [start, stop_index); returns (success, certified, unresolved) counts.

    Per-trial outcomes are identical to ``_run_scalar`` on the same stream.
    """
    idx = np.arange(start, stop_index, dtype=np.uint64)
    keys = _trial_keys(master_seed, idx)
    g = np.full(idx.size, plan.g0, dtype=np.int64)
    n_succ = n_fail = n_unres = 0

    first = _classify_scalar(plan, plan.g0, 0)
    if first is not None:
        n = idx.size
        return (n, 0, 0) if first[0] == SUCCESS else (0, n, 0) if first[0] == FAILURE_CERTIFIED else (0, 0, n)

    thr = np.uint64(plan.threshold)
    up, right = np.int64(-plan.up_inc), np.int64(plan.right_inc)
    t = 0
    k = 16
    while keys.size and t < stop.max_steps:
        m = keys.size
        k = min(k, max(16, BLOCK_ELEMS // m), stop.max_steps - t)
        ctr = (np.arange(t + 1, t + k + 1, dtype=np.uint64)) * np.uint64(GAMMA)
        with np.errstate(over="ignore"):
            draws = _mix64_np(keys[:, None] + ctr[None, :])
        path = np.where(draws < thr, up, right)
        np.cumsum(path, axis=1, out=path)
        path += g[:, None]
        succ, fail, unres = _stop_mask(plan, path)
        hit = succ | fail | unres
        done = hit.any(axis=1)
        if done.any():
            pos = hit[done].argmax(axis=1)
            rows = np.nonzero(done)[0]
            s_first = succ[rows, pos]
            u_first = unres[rows, pos] & ~s_first
            n_succ += int(s_first.sum())
            n_unres += int(u_first.sum())
            n_fail += int((~s_first & ~u_first).sum())
        keep = ~done
        g = path[keep, -1]
        keys = keys[keep]
        t += k
        k *= 2
    n_unres += int(keys.size)
    return n_succ, n_fail, n_unres


def _wilson(k: float, n: int, z: float) -> tuple[float, float]:
    phat = k / n
    den = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / den
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / den
    return max(0.0, centre - half), min(1.0, centre + half)


def _check_seed(master_seed: int) -> int:
    if not isinstance(master_seed, (int, np.integer)) or not 0 <= master_seed <= MASK64:
        raise ConfigError(f"master_seed must be a 64-bit unsigned integer, got {master_seed!r}")
    return int(master_seed)


def aggregate(kind: str, counts: tuple[int, int, int], trials: int, master_seed: int, stop: StopRule, z: float = Z95) -> SimEstimate:
    succ, fail, unres = counts
    assert succ + fail + unres == trials
    cert_mass = fail * stop.epsilon / trials
    p_low = succ / trials
    p_high = min(1.0, (succ + unres) / trials + cert_mass)
    ci_low = _wilson(succ, trials, z)[0]
    ci_high = min(1.0, _wilson(succ + unres, trials, z)[1] + cert_mass)
    return SimEstimate(kind, trials, succ, fail, unres, p_low, p_high, ci_low, ci_high, master_seed, stop.epsilon)


def estimate(
    kind: str,
    beta,
    alpha,
    d,
    trials: int,
    master_seed: int,
    stop: StopRule = StopRule(),
    threads: int = 1,
    z: float = Z95,
) -> SimEstimate:
    """Run ``trials`` independent walks and aggregate an envelope estimate.

    ``kind`` is ``"crossing"`` (line y = alpha*x + d, rational alpha and d) or
    ``"hitting"`` (alpha and d must be integers).
    """
    if trials is None or trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    if threads < 1:
        raise ConfigError(f"threads must be >= 1, got {threads}")
    stop.validate()
    master_seed = _check_seed(master_seed)
    if kind == CROSSING:
        plan = crossing_plan(beta, LineSpec(Fraction(alpha), Fraction(d)), stop)
    elif kind == HITTING:
        a, dd = Fraction(alpha), Fraction(d)
        if a.denominator != 1 or dd.denominator != 1:
            raise DomainError("hitting needs integer slope and intercept")
        plan = hitting_plan(beta, int(a), int(dd), stop)
    else:
        raise ConfigError(f"unknown kind {kind!r}")

    bounds = [(s, min(s + CHUNK, trials)) for s in range(0, trials, CHUNK)]
    if threads == 1:
        parts = [run_batch(plan, master_seed, s, e, stop) for s, e in bounds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda se: run_batch(plan, master_seed, se[0], se[1], stop), bounds))
    counts = tuple(sum(c[i] for c in parts) for i in range(3))
    return aggregate(kind, counts, trials, master_seed, stop, z)


def sweep_alpha(
    beta,
    alphas,
    d,
    trials: int,
    master_seed: int,
    stop: StopRule = StopRule(),
    threads: int = 1,
) -> list[SimEstimate]:
    """Crossing estimates along a list of slopes, all from the same seed.

    Sharing the seed means every slope sees the same walks, so the estimates
    are monotone in alpha apart from truncation effects.
    """
    alphas = list(alphas)
    if not alphas:
        raise ConfigError("alphas must be non-empty")
    return [estimate(CROSSING, beta, a, d, trials, master_seed, stop, threads) for a in alphas]
