"""Command-line front end.

Subcommands: exact, approx, compare, verify, rates, sweep.  Flags override
values from an optional JSON --config file, which overrides defaults.
Every output embeds the fully resolved run configuration (CSV comment
header or JSON "config" field), all floats carry 17 significant digits,
and identical configurations produce bit-identical files.

Exit codes: 0 ok, 1 bound violation, 2 config error, 3 parameter-box
violation, 4 hypothesis violation, 5 numerical non-convergence.  Failures
print a machine-readable JSON object to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, exact, verify
from .inversion import (ApproxVariant, ConvergenceError, approximation_measure,
                        assemble_transform, midpoint_grid)
from .measures import measure_to_csv_lines, measure_to_json_dict
from .model import ConditionError, ModelParams
from .verify import HypothesisError

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_CONDITION = 3
EXIT_HYPOTHESIS = 4
EXIT_NONCONVERGENT = 5


class _ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ConfigError(message)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--c0", type=float, default=None)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", default=None, help="JSON file with defaults for any flag")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="markov-claims",
                     description="aggregate-claims laws, approximations and bound checks")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="exact payout law (or a sampled estimate)")
    _add_model_args(p)
    _add_common(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--engine", choices=("dp", "enum", "mc"), default=None)
    p.add_argument("--samples", type=int, default=None, help="trajectories for --engine mc")
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("approx", help="inverted approximation measure")
    _add_model_args(p)
    _add_common(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--variant", default=None,
                   choices=[v.value for v in ApproxVariant])
    p.add_argument("--grid-n", type=int, default=None,
                   help="transform nodes for --dump-transform (default 512)")
    p.add_argument("--dump-transform", default=None,
                   help="emit a named transform grid (t,re,im) instead of the measure")

    p = sub.add_parser("compare", help="distances between the law and an approximation")
    _add_model_args(p)
    _add_common(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--variant", default=None,
                   choices=[v.value for v in ApproxVariant])
    p.add_argument("--norm", default=None,
                   choices=("all", "local", "kolmogorov", "tv"))
    p.add_argument("--nonuniform", action="store_true",
                   help="include the weighted sequences over k = 1..n*d")
    p.add_argument("--with-bounds", action="store_true",
                   help="also report the five quadrature upper bounds")
    p.add_argument("--a", type=float, default=None, help="centre of the non-uniform weights")
    p.add_argument("--b", type=float, default=None, help="free parameter of the TV bound")

    p = sub.add_parser("verify", help="bound checks over the parameter box")
    _add_common(p)
    p.add_argument("--suite", choices=("exact-constant", "fitted", "all"), default=None)
    p.add_argument("--t-points", type=int, default=None)
    p.add_argument("--dense-box", action="store_true",
                   help="midpoint-refine every parameter axis")
    p.add_argument("--report-dir", default=None,
                   help="also write one JSON report per check into this directory")

    p = sub.add_parser("rates", help="fit the decay exponent of one regime")
    _add_common(p)
    p.add_argument("--regime", default=None, choices=sorted(verify.REGIMES))
    p.add_argument("--n-values", default=None,
                   help="comma-separated horizons (default: regime standard)")

    p = sub.add_parser("sweep", help="aggregate CSV over all bounds and regimes")
    _add_common(p)
    p.add_argument("--t-points", type=int, default=None)
    p.add_argument("--skip-rates", action="store_true")
    return parser


_DEFAULTS = {
    "alpha": 0.5, "beta": 0.1, "gamma": 0.02, "d": 3, "c0": 0.9,
    "n": 8, "engine": "dp", "samples": 100_000, "seed": 0,
    "variant": "GV_E", "grid_n": 512, "norm": "all", "a": 0.0, "b": 1.0,
    "suite": "exact-constant", "t_points": 512, "regime": "e_only_tv_exponential",
    "format": "csv",
}


def _resolve(args: argparse.Namespace) -> dict:
    """defaults < config file < explicit flags."""
    cfg = dict(_DEFAULTS)
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as f:
                loaded = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise _ConfigError(f"cannot read config {args.config}: {e}")
        if not isinstance(loaded, dict):
            raise _ConfigError("config file must hold a JSON object")
        for key, val in loaded.items():
            cfg[key.replace("-", "_")] = val
    for key, val in vars(args).items():
        if key in ("config",):
            continue
        if val is not None and val is not False:
            cfg[key] = val
    cfg["command"] = args.command
    return cfg


def _params(cfg: dict) -> ModelParams:
    return ModelParams(alpha=float(cfg["alpha"]), beta=float(cfg["beta"]),
                       gamma=float(cfg["gamma"]), d=int(cfg["d"]),
                       c0=float(cfg.get("c0", 0.9)))


#: destinations are not part of the computation; keeping them out of the echo
#: makes identical runs byte-identical regardless of where they are written
_NON_SEMANTIC_KEYS = ("out", "report_dir")


def _config_echo(cfg: dict) -> dict:
    keep = {k: v for k, v in sorted(cfg.items()) if k not in _NON_SEMANTIC_KEYS}
    keep["version"] = __version__
    return keep


def _emit(cfg: dict, lines=None, payload=None) -> None:
    """Write CSV lines or a JSON payload to --out (default stdout)."""
    if cfg.get("format", "csv") == "json" or lines is None:
        body = dict(payload or {})
        body["config"] = _config_echo(cfg)
        text = json.dumps(body, indent=2, sort_keys=True) + "\n"
    else:
        header = "# config: " + json.dumps(_config_echo(cfg), sort_keys=True)
        text = "\n".join([header] + list(lines)) + "\n"
    out = cfg.get("out")
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _measure_payload(measure, extra=None) -> dict:
    body = measure_to_json_dict(measure)
    if extra:
        body.update(extra)
    return body


def _cmd_exact(cfg: dict) -> int:
    params = _params(cfg)
    n = int(cfg["n"])
    engine = cfg["engine"]
    if engine == "dp":
        measure = exact.exact_distribution_dp(params, n)
    elif engine == "enum":
        measure = exact.exact_distribution_enum(params, n)
    else:
        measure = exact.sample_empirical(params, n, int(cfg["samples"]), int(cfg["seed"]))
    lines = measure_to_csv_lines(measure)
    _emit(cfg, lines=lines, payload=_measure_payload(measure))
    return EXIT_OK


def _cmd_approx(cfg: dict) -> int:
    params = _params(cfg)
    n = int(cfg["n"])
    if cfg.get("dump_transform"):
        name = cfg["dump_transform"]
        grid = midpoint_grid(int(cfg["grid_n"]))
        variant_names = {v.value for v in ApproxVariant}
        if name in variant_names:
            vals = assemble_transform(params, grid, n, ApproxVariant.from_string(name))
        else:
            from .charfn import transform_by_name
            vals = transform_by_name(params, grid, name, n)
        lines = ["t,re,im"] + [f"{_fmt(t)},{_fmt(v.real)},{_fmt(v.imag)}"
                               for t, v in zip(grid, np.atleast_1d(vals))]
        payload = {"t": [float(t) for t in grid],
                   "re": [float(v.real) for v in np.atleast_1d(vals)],
                   "im": [float(v.imag) for v in np.atleast_1d(vals)]}
        _emit(cfg, lines=lines, payload=payload)
        return EXIT_OK
    variant = ApproxVariant.from_string(cfg["variant"])
    measure, record = approximation_measure(params, n, variant, return_record=True)
    header = [f"variant: {variant.value}", f"n_grid_used: {record.n_used}",
              f"window: {record.window[0]}..{record.window[1]}",
              f"mass_error: {_fmt(record.mass_error)}"]
    lines = measure_to_csv_lines(measure, header_lines=header)
    _emit(cfg, lines=lines, payload=_measure_payload(measure, {
        "variant": variant.value, "n_grid_used": record.n_used,
        "window": list(record.window), "mass_error": record.mass_error}))
    return EXIT_OK


def _cmd_compare(cfg: dict) -> int:
    params = _params(cfg)
    n = int(cfg["n"])
    variant = ApproxVariant.from_string(cfg["variant"])
    result = verify.approximation_error(
        params, n, variant, include_nonuniform=bool(cfg.get("nonuniform")),
        a=float(cfg["a"]))
    report = result.report.to_dict()
    if cfg["norm"] != "all":
        key = {"tv": "total_variation"}.get(cfg["norm"], cfg["norm"])
        report = {key: report[key]}
    lines = ["norm,value"] + [f"{k},{_fmt(v)}" for k, v in report.items()
                              if isinstance(v, float)]
    if "nonuniform_local" in report:
        lines += ["k,nonuniform_local,nonuniform_df"]
        lines += [f"{k},{_fmt(v)},{_fmt(w)}" for (k, v), (_, w)
                  in zip(report["nonuniform_local"], report["nonuniform_df"])]
    payload = dict(report)
    payload.update({"variant": variant.value, "n_grid_used": result.n_grid_used,
                    "spectral_residual": result.spectral_residual})
    _emit(cfg, lines=lines, payload=payload)
    return EXIT_OK


def _check_rows(checks) -> list[str]:
    rows = []
    for c in checks:
        stat = "max_ratio" if c.kind != "fitted_lower" else "min_ratio"
        ok = "pass" if not c.violated else "FAIL"
        if c.violated is None:
            ok = "fitted"
        rows.append(f"{c.bound_id},{c.kind},{stat},{_fmt(c.max_ratio)},{ok}")
    return rows


def _cmd_verify(cfg: dict) -> int:
    box = verify.default_box(dense=bool(cfg.get("dense_box")))
    n_t = int(cfg["t_points"])
    suite = cfg["suite"]
    checks = []
    if suite in ("exact-constant", "all"):
        checks += verify.exact_constant_suite(box, n_t)
    if suite in ("fitted", "all"):
        checks += verify.fitted_suite(box, n_t)
    if cfg.get("report_dir"):
        import os
        os.makedirs(cfg["report_dir"], exist_ok=True)
        for c in checks:
            with open(os.path.join(cfg["report_dir"], f"{c.bound_id}.json"),
                      "w", encoding="utf-8") as f:
                json.dump(c.to_dict(), f, indent=2, sort_keys=True)
                f.write("\n")
    lines = ["bound_id,kind,statistic,value,status"] + _check_rows(checks)
    _emit(cfg, lines=lines,
          payload={"checks": [c.to_dict() for c in checks]})
    return EXIT_VIOLATION if any(c.violated for c in checks) else EXIT_OK


def _cmd_rates(cfg: dict) -> int:
    regime = cfg["regime"]
    n_values = cfg.get("n_values")
    if isinstance(n_values, str):
        n_values = tuple(int(x) for x in n_values.split(","))
    fit = verify.rate_fit(regime, n_values)
    lines = ["field,value",
             f"regime,{fit.regime_id}",
             f"slope,{_fmt(fit.slope)}",
             f"intercept,{_fmt(fit.intercept)}",
             f"r_squared,{_fmt(fit.r_squared)}",
             "n,error"]
    lines += [f"{n},{_fmt(e)}" for n, e in zip(fit.n_values, fit.errors)]
    _emit(cfg, lines=lines, payload=fit.to_dict())
    return EXIT_OK


def _cmd_sweep(cfg: dict) -> int:
    n_t = int(cfg["t_points"])
    box = verify.default_box()
    box_desc = f"default box x {n_t} t-nodes"
    rows = ["check_id,category,box,statistic,value,pass"]
    failed = False
    for c in verify.exact_constant_suite(box, n_t) + verify.fitted_suite(box, n_t):
        ok = "yes" if not c.violated else "no"
        failed = failed or bool(c.violated)
        rows.append(f"{c.bound_id},bound,{box_desc},ratio,{_fmt(c.max_ratio)},{ok}")
    if not cfg.get("skip_rates"):
        for rid, reg in verify.REGIMES.items():
            fit = verify.rate_fit(rid)
            ok = "yes"
            if reg.expected_slope is not None:
                lo, hi = reg.expected_slope
                ok = "yes" if lo <= fit.slope <= hi else "no"
                failed = failed or ok == "no"
            desc = f"n {fit.n_values[0]}..{fit.n_values[-1]}"
            rows.append(f"{rid},rate,{desc},slope,{_fmt(fit.slope)},{ok}")
    _emit(cfg, lines=rows, payload={"rows": rows[1:]})
    return EXIT_VIOLATION if failed else EXIT_OK


_COMMANDS = {"exact": _cmd_exact, "approx": _cmd_approx, "compare": _cmd_compare,
             "verify": _cmd_verify, "rates": _cmd_rates, "sweep": _cmd_sweep}


def _fail(code: int, kind: str, detail) -> int:
    sys.stderr.write(json.dumps({"error": kind, "detail": detail}) + "\n")
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = _resolve(args)
        return _COMMANDS[args.command](cfg)
    except _ConfigError as e:
        return _fail(EXIT_CONFIG, "config", str(e))
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        return _fail(EXIT_CONFIG, "config", repr(e))
    except ConditionError as e:
        return _fail(EXIT_CONDITION, "condition", list(e.violations))
    except HypothesisError as e:
        return _fail(EXIT_HYPOTHESIS, "hypothesis", str(e))
    except exact.SupportCapError as e:
        return _fail(EXIT_NONCONVERGENT, "support_cap", str(e))
    except ConvergenceError as e:
        return _fail(EXIT_NONCONVERGENT, "nonconvergent", str(e))


if __name__ == "__main__":
    sys.exit(main())
