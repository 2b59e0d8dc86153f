"""Command-line front end.

Subcommands:

* ``test``      run a change point test on a CSV series
* ``critvals``  write a critical-value table for a limit family
* ``constants`` compute the normalization constants a(p), b(p)
* ``simulate``  draw a Monte Carlo limit sample and write the draws
* ``study``     run a size/power study

stdout carries JSON only; human-readable messages go to stderr.  Exit codes:
0 completed, 2 input parse failure, 3 inadmissible weight, 4 insufficient
data, 6 quadrature accuracy failure, 5 unwritable output.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from pathlib import Path

import numpy as np
from filelock import FileLock

from . import limits
from ._version import __version__
from .cusum import Family, compute_cusum, darling_erdos_statistic, lp_statistic, renyi_statistic
from .errors import (
    CusumLpError,
    InsufficientDataError,
    InvalidInputError,
    InvalidParameterError,
    QuadratureAccuracyError,
    WeightAdmissibilityError,
)
from .simulate import (
    AR1,
    MA,
    BernoulliShiftAR,
    ChangeSpec,
    IIDNormal,
    IIDStudentT,
    StudyConfig,
    run_study,
)
from .variance import Demeaning, Kernel, LrvConfig, estimate_lrv
from .weights import Power, Uniform, require_admissible

EXIT_PARSE = 2
EXIT_WEIGHT = 3
EXIT_DATA = 4
EXIT_OUTPUT = 5
EXIT_QUADRATURE = 6


class ParseError(CusumLpError):
    pass


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def read_series(path: str, column: str | None = None) -> np.ndarray:
    """One numeric value per line, or a named column when ``column`` is given.
    Blank lines and '#' comments are ignored; any non-numeric cell is a hard
    parse error."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read input file {path}: {exc}") from exc
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError(f"no data rows in {path}")
    if column is None:
        values = []
        for i, ln in enumerate(lines, start=1):
            try:
                values.append(float(ln.strip()))
            except ValueError as exc:
                raise ParseError(f"non-numeric value {ln.strip()!r} on data line {i}") from exc
        return np.array(values)
    reader = csv.DictReader(io.StringIO("\n".join(lines)))
    if reader.fieldnames is None or column not in reader.fieldnames:
        raise ParseError(f"column {column!r} not found in {path}")
    values = []
    for i, row in enumerate(reader, start=1):
        cell = (row[column] or "").strip()
        try:
            values.append(float(cell))
        except ValueError as exc:
            raise ParseError(f"non-numeric value {cell!r} in column {column!r}, row {i}") from exc
    return np.array(values)


def _weight_from_args(args) -> object:
    if args.family == "general":
        return Uniform() if args.weight_q in (None, 0.0) else Power(args.weight_q)
    if args.family == "renyi":
        return None  # trimming handled explicitly
    return None


def _sigma_mode(spec: str):
    """Parse --sigma: 'auto' or 'fixed:<value>'."""
    if spec == "auto":
        return "auto"
    if spec.startswith("fixed:"):
        try:
            v = float(spec.split(":", 1)[1])
        except ValueError as exc:
            raise ParseError(f"bad --sigma value {spec!r}") from exc
        if v <= 0:
            raise InvalidParameterError(f"fixed sigma must be positive, got {v}")
        return v
    raise ParseError(f"--sigma must be 'auto' or 'fixed:<v>', got {spec!r}")


def cache_dir() -> Path:
    env = os.environ.get("CUSUM_LP_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "cusum-lp"


def _cache_key(meta: dict) -> str:
    return hashlib.sha256(json.dumps(meta, sort_keys=True).encode()).hexdigest()[:24]


def _cached_sample(family: str, make, meta: dict) -> tuple[limits.LimitSample, dict]:
    """Fetch or simulate-and-store a limit sample keyed by its full config."""
    meta = dict(meta, family=family, version=__version__)
    key = _cache_key(meta)
    d = cache_dir()
    d.mkdir(parents=True, exist_ok=True)
    path = d / f"{key}.csv"
    provenance = {"cache_key": key, **meta}
    if path.exists():
        return limits.read_draws(path), provenance
    sample = make()
    with FileLock(str(path) + ".lock"):
        if not path.exists():
            limits.write_draws(path, sample)
    return sample, provenance


def _limit_sample(args, p: float, weight, t1: float | None, t2: float | None):
    if args.family == "darling-erdos":
        return limits.analytic_darling_erdos(), {"family": "darling-erdos-normal", "analytic": True}
    if args.family == "general":
        meta = {
            "p": p,
            "weight": limits._weight_params(weight),
            "grid": args.grid,
            "reps": args.reps,
            "seed": args.seed,
        }
        return _cached_sample(
            "general-weighted",
            lambda: limits.sample_limit_general(p, weight, grid_size=args.grid, replications=args.reps, seed=args.seed),
            meta,
        )
    # renyi: plug the finite-sample trimming into the limit's gamma weights
    r = min(t1, 1.0 - t2)
    gamma1 = r / t1
    gamma2 = r / (1.0 - t2)
    meta = {
        "p": p,
        "kappa": args.kappa,
        "gamma1": gamma1,
        "gamma2": gamma2,
        "reps": args.reps,
        "seed": args.seed,
    }
    return _cached_sample(
        "fraktur-b",
        lambda: limits.sample_fb(p, args.kappa, gamma1=gamma1, gamma2=gamma2, replications=args.reps, seed=args.seed),
        meta,
    )


def cmd_test(args) -> int:
    x = read_series(args.input, args.column)
    n = x.size
    path = compute_cusum(x)
    sigma_mode = _sigma_mode(args.sigma)
    if sigma_mode == "auto":
        cfg = LrvConfig(
            kernel=Kernel(args.kernel),
            bandwidth="auto" if args.bandwidth is None else args.bandwidth,
            demeaning=Demeaning(args.demeaning),
        )
        sigma2 = estimate_lrv(x, cfg).value
    else:
        sigma2 = sigma_mode**2
    sigma = float(np.sqrt(sigma2))
    p = args.p

    t1 = t2 = None
    if args.family == "renyi":
        t1 = args.t1 if args.t1 is not None else 1.0 / np.sqrt(n)
        t2 = args.t2 if args.t2 is not None else 1.0 - 1.0 / np.sqrt(n)

    if args.family == "general":
        weight = _weight_from_args(args)
        require_admissible(p, weight)
        raw = lp_statistic(path, p, weight)
        normalized = raw / sigma**p
        weight_desc = limits._weight_params(weight)
    elif args.family == "darling-erdos":
        constants = limits.compute_a(p)
        stat = darling_erdos_statistic(path, p, sigma, constants.a_p, constants.b_p)
        raw, normalized = stat.raw, stat.normalized
        weight_desc = {"kind": "power", "q": 1.0 + p / 2.0}
        weight = None
    else:
        stat = renyi_statistic(path, p, args.kappa, t1, t2, sigma)
        raw, normalized = stat.raw, stat.normalized
        weight_desc = {"kind": "trimmed-power", "kappa": args.kappa, "t1": t1, "t2": t2}
        weight = None

    sample, provenance = _limit_sample(args, p, weight, t1, t2)
    cv = limits.critical_value(sample, args.alpha)
    pv = limits.p_value(sample, normalized)
    payload = {
        "family": args.family,
        "p": p,
        "weight": weight_desc,
        "N": n,
        "sigma2_hat": sigma2,
        "statistic_raw": raw,
        "statistic_normalized": normalized,
        "critical_value": cv,
        "p_value": pv,
        "reject": bool(normalized > cv),
        "table_provenance": provenance,
    }
    if args.emit_path:
        _write_text(
            args.emit_path,
            "t,z\n"
            + "".join(
                f"{k / (n + 1.0)!r},{float(path.z[k] / np.sqrt(n))!r}\n" for k in range(n + 1)
            ),
        )
    _emit(payload)
    return 0


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


class OutputError(CusumLpError):
    pass


def cmd_critvals(args) -> int:
    alphas = (0.10, 0.05, 0.025, 0.01)
    if args.family == "darling-erdos":
        sample = limits.analytic_darling_erdos()
    elif args.family == "general":
        weight = _weight_from_args(args)
        require_admissible(args.p, weight)
        sample = limits.sample_limit_general(
            args.p, weight, grid_size=args.grid, replications=args.reps, seed=args.seed
        )
    else:
        sample = limits.sample_fb(args.p, args.kappa, replications=args.reps, seed=args.seed)
    rows = [(a, limits.critical_value(sample, a)) for a in alphas]
    try:
        limits.write_table(args.output, sample, alphas)
    except OSError as exc:
        raise OutputError(f"cannot write {args.output}: {exc}") from exc
    _emit({"output": args.output, "rows": [{"alpha": a, "critical_value": cv} for a, cv in rows]})
    return 0


def cmd_constants(args) -> int:
    try:
        pair = limits.compute_a(args.p)
    except QuadratureAccuracyError as exc:
        pair = getattr(exc, "partial", None)
        if pair is not None:
            _emit(_constants_payload(pair))
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_QUADRATURE
    _emit(_constants_payload(pair))
    return 0


def _constants_payload(pair) -> dict:
    return {
        "p": pair.p,
        "a_p": pair.a_p,
        "b_p": pair.b_p,
        "quadrature_error_estimate": pair.quadrature_error_estimate,
        "g_u_mass_check": pair.g_u_mass_deviation,
    }


def cmd_simulate(args) -> int:
    if args.family == "darling-erdos":
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(args.seed)))
        draws = np.sort(rng.standard_normal(args.reps))
        sample = limits.LimitSample(
            draws=draws, family=limits.DARLING_ERDOS_NORMAL, params={},
            grid_size=None, replications=args.reps, seed=args.seed,
        )
    elif args.family == "general":
        weight = _weight_from_args(args)
        require_admissible(args.p, weight)
        sample = limits.sample_limit_general(
            args.p, weight, grid_size=args.grid, replications=args.reps, seed=args.seed
        )
    else:
        sample = limits.sample_fb(args.p, args.kappa, replications=args.reps, seed=args.seed)
    try:
        limits.write_draws(args.output, sample)
    except OSError as exc:
        raise OutputError(f"cannot write {args.output}: {exc}") from exc
    _emit(
        {
            "output": args.output,
            "family": sample.family,
            "replications": sample.replications,
            "seed": sample.seed,
            "mean": float(np.mean(sample.draws)),
        }
    )
    return 0


def _noise_from_args(args):
    if args.noise == "iid-normal":
        return IIDNormal(args.noise_scale)
    if args.noise == "iid-t":
        return IIDStudentT(df=args.df, scale=args.noise_scale)
    if args.noise == "ar1":
        return AR1(rho=args.rho, s=args.noise_scale)
    if args.noise == "ma":
        coeffs = tuple(float(c) for c in args.ma_coeffs.split(","))
        return MA(coeffs=coeffs, s=args.noise_scale)
    if args.noise == "bernoulli-shift":
        return BernoulliShiftAR(a=args.bshift_a, s=args.noise_scale)
    raise ParseError(f"unknown noise model {args.noise!r}")


def cmd_study(args) -> int:
    sigma_mode = _sigma_mode(args.sigma)
    family = Family(args.family)
    weight = Uniform() if args.weight_q in (None, 0.0) else Power(args.weight_q)
    if family is Family.GENERAL_WEIGHTED:
        require_admissible(args.p, weight)
    config = StudyConfig(
        noise=_noise_from_args(args),
        change=ChangeSpec(k_star=args.kstar, delta=args.delta, mu0=args.mu0),
        n=args.n,
        family=family,
        p=args.p,
        weight=weight,
        kappa=args.kappa,
        t1=args.t1,
        t2=args.t2,
        alpha=args.alpha,
        replications=args.reps,
        seed=args.seed,
        sigma=sigma_mode,
        lrv=LrvConfig(kernel=Kernel(args.kernel), demeaning=Demeaning(args.demeaning)),
        limit_grid=args.grid,
        limit_replications=args.limit_reps,
    )
    report = run_study(config)
    text = report.to_json(include_statistics=args.include_statistics)
    if args.output:
        _write_text(args.output, text + "\n")
    sys.stdout.write(text + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cusum-lp", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_family(sp, with_grid=True):
        sp.add_argument("--family", choices=["general", "darling-erdos", "renyi"], default="general")
        sp.add_argument("--p", type=float, default=2.0)
        sp.add_argument("--weight-q", type=float, default=None, help="power-weight exponent q (general family)")
        sp.add_argument("--kappa", type=float, default=3.0, help="trimmed-weight exponent (renyi family)")
        sp.add_argument("--t1", type=float, default=None)
        sp.add_argument("--t2", type=float, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--reps", type=int, default=10_000)
        if with_grid:
            sp.add_argument("--grid", type=int, default=4096)

    sp = sub.add_parser("test", help="run a change point test on a CSV series")
    sp.add_argument("--input", required=True)
    sp.add_argument("--column", default=None, help="named CSV column to read")
    add_family(sp)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--sigma", default="auto", help="'auto' or 'fixed:<value>'")
    sp.add_argument("--kernel", choices=[k.value for k in Kernel], default="bartlett")
    sp.add_argument("--bandwidth", type=float, default=None)
    sp.add_argument("--demeaning", choices=[d.value for d in Demeaning], default="full")
    sp.add_argument("--emit-path", default=None, help="write the rescaled CUSUM path (t, Z_N(t)) to this CSV")
    sp.set_defaults(func=cmd_test)

    sp = sub.add_parser("critvals", help="write a critical-value table")
    add_family(sp)
    sp.add_argument("--output", required=True)
    sp.set_defaults(func=cmd_critvals, reps=100_000)

    sp = sub.add_parser("constants", help="compute a(p) and b(p)")
    sp.add_argument("--p", type=float, required=True)
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("simulate", help="draw a limit sample and write the draws")
    add_family(sp)
    sp.add_argument("--output", required=True)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("study", help="run a size/power study")
    add_family(sp)
    sp.add_argument("--noise", choices=["iid-normal", "iid-t", "ar1", "ma", "bernoulli-shift"], default="iid-normal")
    sp.add_argument("--noise-scale", type=float, default=1.0)
    sp.add_argument("--rho", type=float, default=0.5)
    sp.add_argument("--df", type=float, default=5.0)
    sp.add_argument("--ma-coeffs", default="0.5")
    sp.add_argument("--bshift-a", type=float, default=0.5)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--delta", type=float, default=0.0)
    sp.add_argument("--kstar", type=int, default=None)
    sp.add_argument("--mu0", type=float, default=0.0)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--sigma", default="auto")
    sp.add_argument("--kernel", choices=[k.value for k in Kernel], default="bartlett")
    sp.add_argument("--demeaning", choices=[d.value for d in Demeaning], default="split-half")
    sp.add_argument("--limit-reps", type=int, default=10_000)
    sp.add_argument("--output", default=None)
    sp.add_argument("--include-statistics", action="store_true")
    sp.set_defaults(func=cmd_study)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except WeightAdmissibilityError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_WEIGHT
    except (InsufficientDataError, InvalidInputError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA
    except OutputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_OUTPUT
    except QuadratureAccuracyError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_QUADRATURE
    except CusumLpError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
