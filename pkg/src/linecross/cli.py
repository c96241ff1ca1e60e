"""Command-line interface: ``linecross {count,prob,simulate,verify,sweep-alpha}``.

Records go to stdout as JSON lines (default) or CSV; progress and warnings go
to stderr. Exit codes: 0 ok, 1 a check failed, 2 usage or domain error,
3 simulation disagrees with the analytic value.
"""

from __future__ import annotations

import argparse
import secrets
import sys
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import crossprob, exactcomb, verify, walksim
from .errors import ConfigError, DomainError
from .records import record, to_csv, to_jsonl

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_STAT = 0, 1, 2, 3

CONVERTERS = {
    "format": str,
    "tol": float,
    "threads": int,
    "seed": str,
    "kind": str,
    "d": Fraction,
    "method": str,
    "n_terms": int,
    "trials": int,
    "epsilon": float,
    "max_steps": int,
    "max_excess": int,
    "sigma": float,
    "steps": int,
    "beta": Fraction,
    "p": int,
    "alpha": Fraction,
    "n_max": int,
    "lo": Fraction,
    "hi": Fraction,
}


class UsageError(Exception):
    pass


def read_config(text: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def load_defaults() -> dict[str, str]:
    return read_config(resources.files("linecross").joinpath("defaults.cfg").read_text())


def _fraction(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--format", choices=["json", "csv"], help="output format (default json)")
    g.add_argument("--tol", type=float, help="root tolerance (default 1e-12)")
    g.add_argument("--threads", type=int, help="worker threads for simulation (default 1)")
    g.add_argument("--seed", help="master seed (integer) or 'auto'; required by randomized commands")
    g.add_argument("--config", type=Path, help="flat key=value file with flag defaults")

    parser = argparse.ArgumentParser(
        prog="linecross",
        description="Path counts and line-crossing probabilities for biased monotone lattice walks.",
        epilog="Unset flags fall back to --config, then to the packaged defaults.cfg. "
        "Exit codes: 0 ok, 1 check failed, 2 usage/domain error, 3 statistical disagreement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", parents=[common], help="exact path counts")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--d", type=int)
    c.add_argument("--kind", choices=["weakly", "strictly"])
    c.add_argument("--n-max", type=int, required=True)
    c.add_argument("--check", action="store_true", help="compare DP against the closed form / generating function")

    pr = sub.add_parser("prob", parents=[common], help="crossing and hitting probabilities")
    pr.add_argument("--beta", type=_fraction, required=True)
    pr.add_argument("--p", type=int, required=True)
    pr.add_argument("--d", type=int)
    pr.add_argument("--method", choices=["root", "series", "asymptotic"])
    pr.add_argument("--n-terms", type=int)

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo estimate")
    s.add_argument("kind", choices=["crossing", "hitting"])
    s.add_argument("--beta", type=_fraction, required=True)
    s.add_argument("--alpha", type=_fraction, required=True)
    s.add_argument("--d", type=_fraction)
    s.add_argument("--trials", type=int)
    s.add_argument("--epsilon", type=float)
    s.add_argument("--max-steps", type=int)
    s.add_argument("--max-excess", type=int)
    s.add_argument("--compare-analytic", action="store_true")
    s.add_argument("--sigma", type=float, help="z-score threshold for --compare-analytic (default 3)")

    v = sub.add_parser("verify", parents=[common], help="run consistency suites")
    v.add_argument("suite", choices=["identities", "convolutions", "roots", "asymptotics", "all"])

    w = sub.add_parser("sweep-alpha", parents=[common], help="crossing estimates over a slope grid")
    w.add_argument("--beta", type=_fraction, required=True)
    w.add_argument("--lo", type=_fraction, required=True)
    w.add_argument("--hi", type=_fraction, required=True)
    w.add_argument("--steps", type=int)
    w.add_argument("--d", type=_fraction)
    w.add_argument("--trials", type=int)
    w.add_argument("--epsilon", type=float)
    w.add_argument("--max-steps", type=int)
    return parser


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset flags from --config, then from the packaged defaults."""
    layers = []
    if args.config is not None:
        try:
            layers.append(read_config(args.config.read_text()))
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
    layers.append(load_defaults())
    for key in vars(args):
        if getattr(args, key) is not None or key not in CONVERTERS:
            continue
        for layer in layers:
            if key in layer:
                try:
                    setattr(args, key, CONVERTERS[key](layer[key]))
                except (ValueError, ZeroDivisionError) as exc:
                    raise UsageError(f"bad value for {key}: {layer[key]!r}") from exc
                break
    return args


def _seed(args) -> int:
    if args.seed is None:
        raise UsageError("randomized commands need --seed <int> or --seed auto")
    if args.seed == "auto":
        seed = secrets.randbits(64)
        print(f"linecross: using seed {seed}", file=sys.stderr)
        return seed
    try:
        seed = int(args.seed)
    except ValueError as exc:
        raise UsageError(f"bad seed {args.seed!r}") from exc
    if not 0 <= seed < 1 << 64:
        raise UsageError("seed must be a 64-bit unsigned integer")
    return seed


def _stop(args) -> walksim.StopRule:
    return walksim.StopRule(
        epsilon=args.epsilon,
        max_steps=args.max_steps,
        max_excess=getattr(args, "max_excess", walksim.StopRule.max_excess),
    )


def _frac_str(x: Fraction) -> str:
    return str(Fraction(x))


def _closed_form_counts(p: int, d: int, n_max: int, kind: str) -> list[int]:
    if kind == exactcomb.STRICTLY_BELOW and d == 0:
        return exactcomb.first_passage_N(p, n_max)
    power = d + 1 if kind == exactcomb.WEAKLY_BELOW else d
    M = [exactcomb.catalan_M(p, n) for n in range(n_max + 1)]
    acc = [1] + [0] * n_max
    for _ in range(power):
        acc = [exactcomb.convolve(acc, M, n) for n in range(n_max + 1)]
    return acc


def cmd_count(args) -> tuple[list[dict], int]:
    kind = exactcomb.WEAKLY_BELOW if args.kind == "weakly" else exactcomb.STRICTLY_BELOW
    d = int(args.d)
    if args.p < 1 or d < 0 or args.n_max < 0:
        raise DomainError("count needs p >= 1, d >= 0, n-max >= 0")
    table = exactcomb.dp_count(args.p, d, args.n_max, kind)
    ref = _closed_form_counts(args.p, d, args.n_max, kind) if args.check else None
    params = {"p": args.p, "d": d, "kind": kind, "n_max": args.n_max}
    recs, ok = [], True
    for n, value in enumerate(table.entries):
        result = {"n": n, "count": str(value)}
        if ref is not None:
            result["closed_form"] = str(ref[n])
            result["agree"] = ref[n] == value
            ok &= ref[n] == value
        recs.append(record("count", params, result))
    return recs, EXIT_OK if ok else EXIT_CHECK


def cmd_prob(args) -> tuple[list[dict], int]:
    beta, p, d = args.beta, args.p, int(args.d)
    params = {"beta": _frac_str(beta), "p": p, "d": d, "method": args.method}
    result: dict = {}
    if args.method == "root":
        ph = crossprob.phi(beta, p, d, args.tol)
        result.update(phi=ph.value, residual=ph.detail.residual, iterations=ph.detail.iterations)
    elif args.method == "series":
        if args.n_terms is None or args.n_terms < 1:
            raise UsageError("--method series needs --n-terms >= 1")
        params["n_terms"] = args.n_terms
        ph = crossprob.phi_series(beta, p, d, args.n_terms)
        result.update(phi=ph.value, n_terms=args.n_terms, lower_bound=True)
    else:
        if d != 0:
            raise DomainError("asymptotic approximation is for d = 0")
        ph = crossprob.phi_asymptotic(beta, p)
        result.update(phi=ph.value, x1=ph.detail["x1"])
    result["psi"] = crossprob.psi(beta, p, d, args.tol).value
    result["psi_first_return"] = crossprob.psi_first_return(beta, p, d).value
    return [record("prob", params, result)], EXIT_OK


def analytic_value(kind: str, beta, alpha: Fraction, d: Fraction, tol: float) -> float | None:
    """Closed-form probability when the slope is an integer, else None."""
    if Fraction(alpha).denominator != 1:
        return None
    p = int(alpha)
    if kind == walksim.CROSSING:
        # lattice crossing of y = p x + d is crossing of y = p x + floor(d)
        return crossprob.phi(beta, p, int(d // 1), tol).value
    if Fraction(d).denominator != 1 or (p == 0 and d == 0):
        return None
    # the closed form misses returns that overshoot from above when p >= 2
    return crossprob.psi_first_return(beta, p, int(d)).value


def z_score(est: walksim.SimEstimate, analytic: float) -> float:
    """Signed distance from the analytic value to the envelope, in standard errors."""
    sd = est.sigma(analytic)
    if analytic < est.p_low:
        return (est.p_low - analytic) / sd
    if analytic > est.p_high:
        return (est.p_high - analytic) / sd
    return 0.0


def estimate_result(est: walksim.SimEstimate) -> dict:
    return {
        "trials": est.trials,
        "successes": est.successes,
        "certified_failures": est.certified_failures,
        "unresolved": est.unresolved,
        "p_hat": est.p_hat,
        "p_low": est.p_low,
        "p_high": est.p_high,
        "ci_low": est.ci_low,
        "ci_high": est.ci_high,
        "sigma": est.sigma(),
    }


def cmd_simulate(args) -> tuple[list[dict], int]:
    seed = _seed(args)
    stop = _stop(args)
    t0 = time.perf_counter()
    est = walksim.estimate(args.kind, args.beta, args.alpha, args.d, args.trials, seed, stop, args.threads)
    print(f"linecross: {args.trials} trials in {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    params = {
        "kind": args.kind,
        "beta": _frac_str(args.beta),
        "alpha": _frac_str(args.alpha),
        "d": _frac_str(args.d),
        "trials": args.trials,
        "epsilon": stop.epsilon,
        "max_steps": stop.max_steps,
        "max_excess": stop.max_excess,
    }
    result = estimate_result(est)
    code = EXIT_OK
    if args.compare_analytic:
        a = analytic_value(args.kind, args.beta, args.alpha, args.d, args.tol)
        if a is None:
            print("linecross: no analytic value for this slope; skipping comparison", file=sys.stderr)
            result.update(analytic=None, z=None)
        else:
            z = z_score(est, a)
            result.update(analytic=a, z=z)
            if abs(z) > args.sigma:
                code = EXIT_STAT
    return [record("simulate", params, result, seed)], code


def cmd_verify(args) -> tuple[list[dict], int]:
    checks = verify.run(args.suite)
    recs = [
        record("verify", {"suite": c.suite, "check": c.name, "case": c.case}, {"pass": c.passed, "discrepancy": c.discrepancy})
        for c in checks
    ]
    return recs, EXIT_OK if all(c.passed for c in checks) else EXIT_CHECK


def cmd_sweep_alpha(args) -> tuple[list[dict], int]:
    if not args.lo < args.hi:
        raise UsageError("sweep-alpha needs --lo < --hi")
    if args.steps < 2:
        raise UsageError("sweep-alpha needs --steps >= 2")
    if args.lo < 0:
        raise UsageError("slopes must be >= 0")
    seed = _seed(args)
    stop = _stop(args)
    alphas = [args.lo + (args.hi - args.lo) * Fraction(i, args.steps - 1) for i in range(args.steps)]
    lo_b, hi_b = crossprob.alpha_beta_bounds(args.beta)
    ests = walksim.sweep_alpha(args.beta, alphas, args.d, args.trials, seed, stop, args.threads)
    recs = []
    for a, est in zip(alphas, ests):
        params = {
            "beta": _frac_str(args.beta),
            "alpha": _frac_str(a),
            "d": _frac_str(args.d),
            "trials": args.trials,
            "epsilon": stop.epsilon,
            "max_steps": stop.max_steps,
        }
        result = estimate_result(est)
        result.update(alpha_value=float(a), bracket_lo=lo_b, bracket_hi=hi_b)
        recs.append(record("sweep-alpha", params, result, seed))
    return recs, EXIT_OK


COMMANDS = {
    "count": cmd_count,
    "prob": cmd_prob,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "sweep-alpha": cmd_sweep_alpha,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        resolve(args)
        if args.format not in ("json", "csv"):
            raise UsageError(f"unknown format {args.format!r}")
        recs, code = COMMANDS[args.command](args)
    except (UsageError, DomainError, ConfigError) as exc:
        print(f"linecross: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(to_csv(recs) if args.format == "csv" else to_jsonl(recs))
    return code


if __name__ == "__main__":
    sys.exit(main())
