"""Command-line surface: figure data, ACF evaluation, simulation, estimation,
and identity auditing, glued together with CSV files and a flat config file.

Conventions shared by every subcommand:

* CSV only, header row mandatory, dot decimal separator, fixed column
  order, "\n" line endings, trailing newline.  Floats are written with
  repr, the shortest round-tripping form, so output is locale-independent
  and byte-identical across reruns.
* Config file: flat ``key = value`` lines (``#`` comments and blank lines
  allowed).  Recognized keys: ``time_unit``, ``seed``, ``out_dir``,
  ``tolerance``, and model parameter presets ``model.<name>``.  Flags
  override config values, which override built-in defaults.
* Exit codes: 0 success, 2 bad input (including parse and degenerate-data
  errors), 3 capability gap (the combination is not defined), 4 accuracy
  or convergence failure.
* Randomized commands never fall back to wall-clock seeding: an explicit
  ``--seed`` (or a ``seed`` line in the config) is required.
"""

import argparse
import csv
import os
import sys
from dataclasses import dataclass

import numpy as np

from .errors import (
    AccuracyError,
    CapabilityError,
    DegenerateSeriesError,
    DomainError,
    GleMarketError,
    InputError,
    ParseError,
    SolverError,
    SpectralPositivityError,
)
from .estimate import ensemble_acf, fit_theta, sample_acf
from .laplace import invert
from .market import MarketParams, price_from_returns, returns_from_prices, simulate_gbm, simulate_white_returns
from .models import (
    ModelSpec,
    Variant,
    closed_form_acf,
    force_shape,
    identity_residual,
    observable_evaluator,
    observable_shape,
)
from .noise import generate_wiener_increments
from .series import PathEnsemble
from .specfun import lambda0, lambda1
from .volterra import boltzmann_acf, differential_acf, memory_kernel, propagate_acf, simulate_stationary_ensemble

_PRESET_KEYS = (
    "model.tau_r",
    "model.tau_R",
    "model.theta",
    "model.variance",
    "model.mu",
    "model.sigma",
    "model.M0",
)

ACF_MATRIX = """\
ACF route capability matrix (model x route):

  model         closed            laplace   volterra
  white         yes               yes       no (memoryless kernel)
  selfsim       yes               yes       yes
  stock         theta in {0,1,2}  yes       theta > 0
  scaling       no                no        no (shape-level model)
  fractional    no                no        no (shape-level model)
  boltzmann     no                no (real-axis image)  yes
  differential  no                no (real-axis image)  yes
"""

SIMULATE_MATRIX = """\
Simulation generators (model -> sampler and seed lanes):

  gbm           geometric Brownian prices; Wiener increments on lane 1
  white         exact one-step stationary update; lane 2
  stock (th=0)  exact one-step stationary update (memoryless); lane 2
  selfsim       band-limited colored force + memory-kernel evolution; lane 0
  stock (th>0)  same, plus an explicit undamped spectral line when
                theta > 2; lanes 0 and 3
"""

AUDIT_MATRIX = """\
Audit checks (model -> identity rows emitted):

  white / selfsim / stock   closure residual |y (tau p + g) - 1| on a real
                            log grid and, with --n-complex, random points
                            in the right half-plane
  scaling / fractional      closure residual on the real grid only
                            (functional solves; non-convergence is flagged
                            per row, not fatal)
  boltzmann                 closure residual on the real grid only
  differential              closure residual plus a finite-difference check
                            of the defining derivative identity
                            dg/du = y(u); those rows pass at the
                            second-order step tolerance, not --tolerance
"""


@dataclass(frozen=True)
class RunConfig:
    """Flat run configuration; parses from and serializes to key=value text."""

    time_unit: str = "unit"
    seed: int | None = None
    out_dir: str = "."
    tolerance: float = 1e-10
    presets: tuple = ()

    def __post_init__(self):
        if not self.time_unit or any(c in self.time_unit for c in "=\n"):
            raise InputError("time_unit must be a nonempty single-line label")
        if self.seed is not None and not (
            isinstance(self.seed, int) and 0 <= self.seed < 2**64
        ):
            raise InputError("seed must be an integer in [0, 2^64)")
        if not (np.isfinite(self.tolerance) and self.tolerance > 0):
            raise InputError("tolerance must be positive and finite")
        object.__setattr__(self, "presets", tuple(sorted(dict(self.presets).items())))
        for key, value in self.presets:
            if key not in _PRESET_KEYS:
                raise InputError(f"unknown preset key {key!r}")
            if not np.isfinite(value):
                raise InputError(f"preset {key} must be finite")

    def preset(self, name, default=None):
        return dict(self.presets).get(f"model.{name}", default)


def parse_config(text):
    """Parse flat key=value config text into a RunConfig."""
    fields = {}
    presets = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"expected key=value, got {line!r}", line=lineno)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in fields or key in presets:
            raise ParseError(f"duplicate key {key!r}", line=lineno)
        if key not in ("time_unit", "seed", "out_dir", "tolerance") and key not in _PRESET_KEYS:
            raise ParseError(f"unknown config key {key!r}", line=lineno)
        try:
            if key == "time_unit":
                fields[key] = value
            elif key == "seed":
                fields[key] = int(value)
            elif key == "out_dir":
                fields[key] = value
            elif key == "tolerance":
                fields[key] = float(value)
            else:
                presets[key] = float(value)
        except ValueError:
            raise ParseError(
                f"could not parse value {value!r} for key {key!r}", line=lineno
            ) from None
    return RunConfig(presets=tuple(sorted(presets.items())), **fields)


def serialize_config(config):
    """Canonical text form; parse_config(serialize_config(c)) == c."""
    lines = [
        f"time_unit = {config.time_unit}",
        f"out_dir = {config.out_dir}",
        f"tolerance = {config.tolerance!r}",
    ]
    if config.seed is not None:
        lines.insert(1, f"seed = {config.seed}")
    lines.extend(f"{key} = {value!r}" for key, value in config.presets)
    return "\n".join(lines) + "\n"


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from None


# -- CSV plumbing ---------------------------------------------------------------


def _write_csv(path, header, rows):
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from None


def _out_path(args, filename):
    out_dir = args.out_dir if args.out_dir is not None else args.config.out_dir
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create output directory {out_dir!r}: {exc}") from exc
    return os.path.join(out_dir, filename)


def _resolved_seed(args):
    seed = args.seed if args.seed is not None else args.config.seed
    if seed is None:
        raise InputError(
            "this command draws random numbers: pass --seed (or set seed in the config)"
        )
    return seed


def _resolved_tolerance(args, default=None):
    if args.tolerance is not None:
        return args.tolerance
    if default is not None:
        return default
    return args.config.tolerance


def _param(args, name, default):
    value = getattr(args, name, None)
    if value is not None:
        return value
    preset = args.config.preset(name)
    return default if preset is None else preset


# -- model construction -----------------------------------------------------------


def _build_model(args):
    name = args.model
    variance = _param(args, "variance", 1.0)
    if name in ("white", "selfsim", "boltzmann", "differential"):
        if getattr(args, "tau_r", None) is not None or getattr(args, "theta", None) is not None:
            raise InputError(f"model {name!r} takes --tau-R only")
        tau_R = _param(args, "tau_R", 1.0)
        maker = {
            "white": ModelSpec.white_noise,
            "selfsim": ModelSpec.linear_self_similar,
            "boltzmann": ModelSpec.boltzmann,
            "differential": ModelSpec.differential,
        }[name]
        return maker(tau_R, variance=variance)
    if name in ("stock", "scaling", "fractional"):
        tau_r = _param(args, "tau_r", 1.0)
        theta = getattr(args, "theta", None)
        tau_R = getattr(args, "tau_R", None)
        if theta is None and tau_R is None:
            theta = args.config.preset("theta")
            tau_R = args.config.preset("tau_R") if theta is None else None
            if theta is None and tau_R is None:
                theta = 1.0
        maker = {
            "stock": ModelSpec.stock_theta,
            "scaling": ModelSpec.scaling,
            "fractional": ModelSpec.fractional,
        }[name]
        return maker(tau_r, theta=theta, tau_R=tau_R, variance=variance)
    raise InputError(f"unknown model {name!r}")


def _add_model_arguments(parser, models):
    parser.add_argument("--model", required=True, choices=models)
    parser.add_argument("--tau-R", type=float, default=None, dest="tau_R",
                        help="market memory time (market-family models, or stock via ratio)")
    parser.add_argument("--tau-r", type=float, default=None, dest="tau_r",
                        help="stock correlation time (stock-family models)")
    parser.add_argument("--theta", type=float, default=None,
                        help="memory ratio tau_R/tau_r (stock-family models)")
    parser.add_argument("--variance", type=float, default=None,
                        help="equal-time second moment (default 1)")


# -- subcommands --------------------------------------------------------------------


def cmd_fig1(args):
    if args.n_points < 2:
        raise InputError("--n-points must be >= 2")
    if not (np.isfinite(args.tau_R) and args.tau_R > 0):
        raise InputError("--tau-R must be positive")
    if not (np.isfinite(args.max_lag_ratio) and args.max_lag_ratio > 0):
        raise InputError("--max-lag-ratio must be positive")
    ratio = np.linspace(0.0, args.max_lag_ratio, args.n_points)
    col1 = lambda1(2.0 * ratio)
    col0 = lambda0(2.0 * ratio)
    path = _out_path(args, args.out)
    _write_csv(path, ["lag_ratio", "lambda1", "lambda0"], zip(ratio, col1, col0))
    print(f"wrote {path} ({args.n_points} rows)")
    return 0


def _acf_by_route(model, route, h, n_points, tolerance):
    if route == "closed":
        lags = h * np.arange(n_points)
        return lags, closed_form_acf(model, lags)
    if route == "laplace":
        acf = invert(observable_evaluator(model), h, n_points,
                     tolerance=1e-6 if tolerance is None else tolerance)
        return h * np.arange(n_points), acf.values
    if route == "volterra":
        if model.variant is Variant.BOLTZMANN:
            acf = boltzmann_acf(model, h, n_points)
        elif model.variant is Variant.DIFFERENTIAL:
            acf = differential_acf(model, h, n_points)
        else:
            kernel = memory_kernel(model, h, n_points)
            acf = propagate_acf(kernel, n_points)
        return h * np.arange(n_points), acf.values
    raise InputError(f"unknown route {route!r}")


def cmd_acf(args):
    model = _build_model(args)
    if not (np.isfinite(args.h) and args.h > 0):
        raise InputError("--h must be positive")
    if args.n_points < 2:
        raise InputError("--n-points must be >= 2")
    lags, values = _acf_by_route(model, args.route, args.h, args.n_points, args.tolerance)
    path = _out_path(args, args.out)
    _write_csv(path, ["lag", "acf"], zip(lags, values))
    print(f"wrote {path} ({args.n_points} rows, model={args.model}, route={args.route})")
    return 0


_LANE_LEGEND = "seed lanes: colored-force=0, wiener=1, white-return=2, spectral-line=3"


def _simulate_ensemble(args, model_name, seed):
    h, n_steps, n_paths = args.h, args.n_steps, args.n_paths
    if model_name == "white":
        tau_R = _param(args, "tau_R", 1.0)
        variance = _param(args, "variance", 1.0)
        return simulate_white_returns(tau_R, variance, n_steps, h, n_paths, seed)
    model = _build_model(args)
    if model.variant is Variant.STOCK_THETA and model.theta == 0.0:
        # memoryless boundary: the exact one-step sampler, not the kernel route
        return simulate_white_returns(model.tau_r, model.variance, n_steps, h, n_paths, seed)
    return simulate_stationary_ensemble(
        model, h, n_steps, n_paths, seed, burn_in=args.burn_in
    )


def _write_paths_csv(path, times, paths, prices=False):
    if prices and paths.shape[0] == 1:
        # single price path: use the exact header cmd_estimate reads back
        header = ["t", "price"]
    else:
        header = ["t"] + [f"path_{i}" for i in range(paths.shape[0])]
    _write_csv(path, header, zip(times, *paths))


def cmd_simulate(args):
    seed = _resolved_seed(args)
    if not (np.isfinite(args.h) and args.h > 0):
        raise InputError("--h must be positive")
    if args.n_steps < 2 or args.n_paths < 1:
        raise InputError("--n-steps must be >= 2 and --n-paths >= 1")
    base = args.out

    if args.model == "gbm":
        params = MarketParams(
            mu=_param(args, "mu", 0.0),
            sigma=_param(args, "sigma", 0.2),
            variance_R=_param(args, "variance", 1.0),
            M0=_param(args, "M0", 1.0),
        )
        increments = generate_wiener_increments(args.n_steps, args.h, args.n_paths, seed)
        prices = simulate_gbm(params, increments)
        paths_file = _out_path(args, f"{base}_paths.csv")
        _write_paths_csv(paths_file, prices.times, prices.paths, prices=True)
        print(f"wrote {paths_file} (prices, {prices.n_paths} paths x {prices.n_steps} samples)")
        if params.sigma == 0.0:
            # deterministic run: the return rate is exactly the drift
            summary_file = _out_path(args, f"{base}_summary.csv")
            _write_csv(summary_file, ["lag", "acf_mean", "acf_se"], [])
            print(f"wrote {summary_file} (deterministic run: zero return variance, ACF omitted)")
            print("variance = 0.0")
            code = 0
        else:
            returns = returns_from_prices(prices)  # sample-mean detrended log returns
            code = _summarize_returns(args, returns, base)
        print(f"master_seed = {seed}")
        print(_LANE_LEGEND)
        return code

    ensemble = _simulate_ensemble(args, args.model, seed)
    paths_file = _out_path(args, f"{base}_paths.csv")
    _write_paths_csv(paths_file, ensemble.times, ensemble.paths)
    print(f"wrote {paths_file} (return rates, {ensemble.n_paths} paths x {ensemble.n_steps} samples)")
    if args.emit_prices:
        mu = _param(args, "mu", 0.0)
        M0 = _param(args, "M0", 1.0)
        prices = price_from_returns(ensemble, mu=mu, M0=M0)
        prices_file = _out_path(args, f"{base}_prices.csv")
        _write_paths_csv(prices_file, prices.times, prices.paths, prices=True)
        print(f"wrote {prices_file} (prices via exp integral, mu={mu!r}, M0={M0!r})")
    code = _summarize_returns(args, ensemble, base)
    print(f"master_seed = {seed}")
    print(_LANE_LEGEND)
    return code


def _summarize_returns(args, ensemble, base):
    variance = float(np.mean(ensemble.paths**2))
    summary_file = _out_path(args, f"{base}_summary.csv")
    if variance <= 0.0:
        _write_csv(summary_file, ["lag", "acf_mean", "acf_se"], [])
        print(f"wrote {summary_file} (deterministic run: zero return variance, ACF omitted)")
        print("variance = 0.0")
        return 0
    max_lag = max(1, min(ensemble.n_steps // 4, args.max_lag))
    acf, se = ensemble_acf(ensemble, max_lag)
    lags = acf.h * np.arange(max_lag + 1)
    _write_csv(summary_file, ["lag", "acf_mean", "acf_se"], zip(lags, acf.values, se))
    print(f"wrote {summary_file} ({max_lag + 1} rows)")
    print(f"variance = {float(acf.variance)!r}")
    return 0


def _read_price_csv(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise ParseError("empty file: expected a 't,price' or 'price' header", line=1)
    header = [cell.strip() for cell in rows[0]]
    if header == ["t", "price"]:
        t_col, p_col = 0, 1
    elif header == ["price"]:
        t_col, p_col = None, 0
    else:
        raise ParseError(
            f"unrecognized header {','.join(header)!r}: expected 't,price' or 'price'",
            line=1,
        )
    times, prices = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(
                f"expected {len(header)} columns, got {len(row)}", line=lineno
            )
        try:
            if t_col is not None:
                times.append(float(row[t_col]))
            prices.append(float(row[p_col]))
        except ValueError:
            raise ParseError(
                f"could not parse {row[p_col] if t_col is None else row!r} as a number",
                line=lineno,
            ) from None
    if len(prices) < 3:
        raise InputError("need at least 3 price samples to estimate anything")
    t = np.asarray(times) if t_col is not None else None
    return t, np.asarray(prices)


def _infer_h(args, t):
    if args.h is not None:
        if not (np.isfinite(args.h) and args.h > 0):
            raise InputError("--h must be positive")
        return args.h
    if t is None:
        raise InputError("input has no 't' column: pass --h explicitly")
    steps = np.diff(t)
    if steps.size == 0 or not np.all(steps > 0):
        raise InputError("'t' column must be strictly increasing")
    h = float(steps[0])
    if np.max(np.abs(steps - h)) > 1e-9 * h:
        raise InputError("'t' column is not uniformly spaced: pass --h explicitly")
    return h


def cmd_estimate(args):
    t, price_row = _read_price_csv(args.input)
    h = _infer_h(args, t)
    prices = PathEnsemble(h=h, paths=price_row[None, :], kind="price")
    mu = None if args.detrend == "sample-mean" else 0.0
    returns = returns_from_prices(prices, mu=mu)
    series = returns.paths[0]
    # a deterministic price series leaves only log/exp roundoff after
    # detrending; refuse to fit that noise rather than report a bogus model
    raw_scale = float(np.sqrt(np.mean(np.square(np.diff(np.log(price_row)) / h))))
    if float(np.sqrt(np.mean(series * series))) <= 1e-12 * raw_scale:
        raise DegenerateSeriesError("series has zero variance after detrending")
    n = series.size
    max_lag = min(n // 4, args.max_lag)
    if max_lag < 8:
        raise InputError("series too short: fewer than 8 usable ACF lags")
    acf = sample_acf(series, max_lag, h=h)
    lag_window = args.lag_window if args.lag_window is not None else max_lag * h
    report = fit_theta(acf, lag_window)
    lines = [
        ("tau_r", repr(float(report.tau_r))),
        ("theta", repr(float(report.theta))),
        ("variance", repr(float(report.variance))),
        ("residual", repr(float(report.residual))),
        ("stock_class", report.stock_class.value),
        ("lags_used", str(report.lags_used)),
        ("degenerate", str(report.degenerate).lower()),
        ("window_ok", str(report.window_ok).lower()),
    ]
    for key, value in lines:
        print(f"{key} = {value}")
    if not report.window_ok:
        print("note: lag window shorter than 3 fitted correlation times", file=sys.stderr)
    if report.degenerate:
        print("note: objective is flat near the optimum (non-identifiable fit)", file=sys.stderr)
    if args.out is not None:
        path = _out_path(args, args.out)
        _write_csv(path, [k for k, _ in lines], [[v for _, v in lines]])
        print(f"wrote {path}")
    return 0


def _audit_rows(model, args, tolerance):
    scale = 1.0 / model.corr_time
    p_real = scale * np.logspace(-2.0, 2.0, args.n_real)
    rows = []
    failures = 0

    def closure_row(p):
        nonlocal failures
        try:
            residual = float(identity_residual(model, p))
        except (SolverError, AccuracyError):
            failures += 1
            return ["closure", repr(float(np.real(p))), repr(float(np.imag(p))),
                    "nan", "no-converge"]
        ok = residual <= tolerance
        failures += 0 if ok else 1
        return ["closure", repr(float(np.real(p))), repr(float(np.imag(p))),
                repr(residual), "ok" if ok else "FAIL"]

    for p in p_real:
        rows.append(closure_row(p))
    if args.n_complex > 0:
        if not model.complex_capable:
            raise CapabilityError(
                f"model {model.variant.value!r} is defined on the real axis only; "
                "drop --n-complex\n\n" + AUDIT_MATRIX
            )
        rng = np.random.default_rng(_resolved_seed(args))
        magnitude = scale * 10.0 ** rng.uniform(-2.0, 2.0, size=(args.n_complex, 2))
        signs = rng.choice([-1.0, 1.0], size=args.n_complex)
        for (re, im), sign in zip(magnitude, signs):
            rows.append(closure_row(complex(re, sign * im)))

    if model.variant is Variant.DIFFERENTIAL:
        # defining derivative identity dg/du = y(u) in normalized units,
        # checked by central differences; accuracy is limited by the step,
        # so these rows pass at max(tolerance, 10 * step^2)
        step = args.fd_step
        fd_tol = max(tolerance, 10.0 * step * step)
        for p in p_real:
            u = model.tau_R * p
            du = step * max(u, 1.0)
            gp = force_shape(model, (u + du) / model.tau_R)
            gm = force_shape(model, (u - du) / model.tau_R)
            residual = abs((gp - gm) / (2.0 * du) - observable_shape(model, p))
            ok = residual <= fd_tol
            failures += 0 if ok else 1
            rows.append(["derivative", repr(float(p)), "0.0", repr(float(residual)),
                         "ok" if ok else "FAIL"])
    return rows, failures


def cmd_audit(args):
    model = _build_model(args)
    if args.n_real < 2:
        raise InputError("--n-real must be >= 2")
    if args.n_complex < 0:
        raise InputError("--n-complex must be >= 0")
    if not (np.isfinite(args.fd_step) and 0 < args.fd_step < 0.1):
        raise InputError("--fd-step must be in (0, 0.1)")
    tolerance = _resolved_tolerance(args)
    rows, failures = _audit_rows(model, args, tolerance)
    print("check,p_real,p_imag,residual,status")
    for row in rows:
        print(",".join(row))
    if args.out is not None:
        path = _out_path(args, args.out)
        _write_csv(path, ["check", "p_real", "p_imag", "residual", "status"], rows)
        print(f"wrote {path}")
    worst = max((float(r[3]) for r in rows if r[3] != "nan"), default=0.0)
    print(f"checked {len(rows)} points, worst residual = {worst!r}, "
          f"tolerance = {tolerance!r}, failures = {failures}")
    if failures:
        raise AccuracyError(f"{failures} audit rows exceed tolerance", achieved=worst)
    return 0


# -- argument parsing ----------------------------------------------------------------


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="glemarket",
        description="Numerical laboratory for memory-kernel market and stock return models.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=ACF_MATRIX,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", default=None, help="flat key=value config file")
        p.add_argument("--seed", type=int, default=None, help="master seed (required for randomized commands)")
        p.add_argument("--out-dir", default=None, help="output directory (default: config out_dir or '.')")
        p.add_argument("--tolerance", type=float, default=None, help="numeric tolerance override")

    p = sub.add_parser(
        "fig1",
        help="emit the two market-ACF reference curves vs dimensionless lag",
        description="CSV columns: lag_ratio (tau/tau_R), lambda1(2 tau/tau_R), lambda0(2 tau/tau_R); the first row is (0, 1, 1).",
    )
    common(p)
    p.add_argument("--tau-R", type=float, default=1.0, dest="tau_R", help="memory time the lag ratios refer to")
    p.add_argument("--max-lag-ratio", type=float, default=12.0)
    p.add_argument("--n-points", type=int, default=481)
    p.add_argument("--out", default="fig1.csv")
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser(
        "acf",
        help="evaluate a model ACF by the closed, laplace, or volterra route",
        description="Emits CSV columns (lag, acf).\n\n" + ACF_MATRIX,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common(p)
    _add_model_arguments(
        p, ["white", "selfsim", "stock", "scaling", "fractional", "boltzmann", "differential"]
    )
    p.add_argument("--route", required=True, choices=["closed", "laplace", "volterra"])
    p.add_argument("--h", type=float, required=True, help="lag step")
    p.add_argument("--n-points", type=int, default=256)
    p.add_argument("--out", default="acf.csv")
    p.set_defaults(func=cmd_acf)

    p = sub.add_parser(
        "simulate",
        help="synthesize a seeded path ensemble plus an ACF/variance summary",
        description=SIMULATE_MATRIX,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common(p)
    _add_model_arguments(p, ["gbm", "white", "selfsim", "stock"])
    p.add_argument("--mu", type=float, default=None, help="drift rate (gbm / --emit-prices)")
    p.add_argument("--sigma", type=float, default=None, help="gbm volatility")
    p.add_argument("--M0", type=float, default=None, dest="M0", help="initial price")
    p.add_argument("--n-paths", type=int, required=True)
    p.add_argument("--n-steps", type=int, required=True)
    p.add_argument("--h", type=float, required=True, help="time step")
    p.add_argument("--burn-in", type=int, default=None,
                   help="warm-up steps for kernel-driven models (default: 8 memory times)")
    p.add_argument("--max-lag", type=int, default=400, help="summary ACF lag cap")
    p.add_argument("--emit-prices", action="store_true",
                   help="also write price paths integrated from the return rates")
    p.add_argument("--out", default="simulate", help="output basename")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser(
        "estimate",
        help="fit (tau_r, theta) and the stock class to a price series CSV",
        description="Input CSV header must be 't,price' or 'price'. "
        "The fitted report is printed as key = value lines.",
    )
    common(p)
    p.add_argument("--input", required=True, help="price CSV path")
    p.add_argument("--h", type=float, default=None,
                   help="sample spacing (default: inferred from the 't' column)")
    p.add_argument("--detrend", choices=["sample-mean", "none"], default="sample-mean")
    p.add_argument("--max-lag", type=int, default=400, help="ACF lag cap (also capped at n/4)")
    p.add_argument("--lag-window", type=float, default=None,
                   help="fit window in time units (default: the full ACF range)")
    p.add_argument("--out", default=None, help="optional one-row CSV report")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser(
        "audit",
        help="evaluate closure-identity residuals on a p grid and flag failures",
        description=AUDIT_MATRIX,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common(p)
    _add_model_arguments(
        p, ["white", "selfsim", "stock", "scaling", "fractional", "boltzmann", "differential"]
    )
    p.add_argument("--n-real", type=int, default=100, help="log-spaced real-axis points")
    p.add_argument("--n-complex", type=int, default=0,
                   help="random right-half-plane points (requires --seed)")
    p.add_argument("--fd-step", type=float, default=1e-4,
                   help="relative step for derivative-identity rows")
    p.add_argument("--out", default=None, help="optional CSV copy of the table")
    p.set_defaults(func=cmd_audit)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        args.config = load_config(args.config) if args.config else RunConfig()
        return args.func(args)
    except (InputError, DomainError) as exc:  # includes Parse/Degenerate errors
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.command in ("acf", "simulate"):
            print("\n" + ACF_MATRIX if args.command == "acf" else "\n" + SIMULATE_MATRIX,
                  file=sys.stderr)
        return 3
    except (AccuracyError, SpectralPositivityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except GleMarketError as exc:  # any stray package error: treat as input
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
